#pragma once

// Grid-based certification of the sign and monotonicity properties of the
// pressure, velocity and comparison function f = (c - u) v - g x beneath a
// computed wave. Every check reports its worst sample so that margins can be
// read off rather than inferred from a boolean.

#include <string>
#include <vector>

#include "stokes/hodograph_fields.hpp"
#include "stokes/wave_model.hpp"

namespace stokes {

enum class CheckKind {
    Negative,     // value < 0 strictly; worst = max value
    Positive,     // value > 0 strictly; worst = min value
    NonPositive,  // value <= tolerance; worst = max value
    AbsWithin,    // |value| <= tolerance; worst = max |value|
};

struct CheckResult {
    std::string name;
    CheckKind kind = CheckKind::AbsWithin;
    bool passed = false;
    bool degenerate = false;
    std::string flag;  // "zero-amplitude", "no-samples" or empty
    double worst_margin = 0.0;
    std::string units;
    StripPoint worst_location;
    int samples_checked = 0;
    int samples_excluded = 0;
    double tolerance = 0.0;
};

struct VerificationReport {
    double steepness = 0.0, c = 0.0, E = 0.0, crest_indicator = 0.0;
    double crest_angle_deg = 180.0;
    int modes = 0;
    int grid_nq = 0, grid_np = 0;
    double grid_depth = 0.0;
    bool exclusion_active = false;
    double excision_radius = 0.0;
    std::vector<CheckResult> checks;
    bool passed = false;

    const CheckResult* find(const std::string& name) const;
};

// Tolerances for equalities and identities, scaled by g where dimensional.
inline constexpr double kLineTolerance = 1e-10;
inline constexpr double kVelocityLineTolerance = 1e-12;
inline constexpr double kIdentityTolerance = 1e-9;
inline constexpr double kHodographTolerance = 1e-10;
inline constexpr double kFiniteDifferenceTolerance = 1e-5;
inline constexpr double kFarFieldDepth = -10.0;  // in units of c

/// P_x < 0 in the interior and on the surface; P_x = 0 on crest and trough lines.
std::vector<CheckResult> verify_theorem_Px(const ConformalSolution& sol, const FieldGrid& grid);

/// P_y < 0 everywhere on the grid, plus the far-field approach to -g at p = -10c.
std::vector<CheckResult> verify_theorem_Py(const ConformalSolution& sol, const FieldGrid& grid);

/// Far-field bound on |P_y + g| at depth p (<= 0): g (1e-8 + 2 sum_k k |a_k| e^{k p/c}).
double far_field_tolerance(const ConformalSolution& sol, double p);

/// Surface slope and sign of f along the surface, line values, harmonicity.
std::vector<CheckResult> verify_f_results(const ConformalSolution& sol, const FieldGrid& grid);

/// v > 0 inside, v = 0 on the lines, u - c < 0, u_q < 0.
std::vector<CheckResult> verify_velocity_results(const ConformalSolution& sol, const FieldGrid& grid);

/// Collocation residual, surface pressure, hodograph consistency, dual P_x
/// agreement and the superharmonicity identity.
std::vector<CheckResult> verify_identities(const ConformalSolution& sol, const FieldGrid& grid,
                                           const WaveConfig& cfg);

/// Interior crest angle in degrees: 180 - 2 atan(max |eta'|), the maximum
/// refined by a parabola through the three samples around the discrete peak.
double crest_angle(const ConformalSolution& sol, int samples = 8192);

/// Surface shape: slope^2 < 1, eta decreasing on (0, pi), eta'' >= 0 between crests.
std::vector<CheckResult> verify_surface_shape(const ConformalSolution& sol, int samples = 4096);

VerificationReport verify_all(const ConformalSolution& sol, const WaveConfig& cfg);

const char* to_string(CheckKind kind);

}  // namespace stokes
