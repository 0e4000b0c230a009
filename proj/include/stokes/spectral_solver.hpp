#pragma once

// Collocation solver for the surface Bernoulli condition
//
//   R_j = 2 (E - g h(q_j, 0)) (h_q^2 + h_p^2)(q_j, 0) - 1 = 0,   theta_j = j pi / N, j = 0..N,
//
// closed by prescribing the steepness s(a) = s_target. Unknowns are
// (a_1..a_N, c, E), so the Newton system is square of size N + 2.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stokes/wave_model.hpp"

namespace stokes {

inline constexpr double kTailTolerance = 1e-8;
inline constexpr double kSingularConditionLimit = 1e14;

struct SolveInfo {
    int newton_iters = 0;
    double residual_norm = 0.0;      // max |R| over collocation rows and the steepness row
    double midpoint_residual = 0.0;  // max |R| half-way between collocation points
    double tail_ratio = 0.0;
    double crest_indicator = 1.0;
};

struct SolveResult {
    ConformalSolution solution;
    SolveInfo info;
};

/// Linear-theory wave: a_1 = pi*s0, c = sqrt(g), E = g/2. Requires 0 <= s0 <= 0.02.
ConformalSolution initial_guess(double s0, const WaveConfig& cfg);

/// The N + 2 residuals: Bernoulli at each collocation angle, then s(sol) - s_target.
Eigen::VectorXd residual(const ConformalSolution& sol, double s_target);

/// Analytic derivative of residual() with respect to (a_1..a_N, c, E).
Eigen::MatrixXd jacobian(const ConformalSolution& sol, double s_target);

/// Max |R| evaluated at theta = (j + 1/2) pi / N, j = 0..N-1.
double midpoint_residual(const ConformalSolution& sol);

/// Damped Newton iteration from `guess`. Throws SolverError.
SolveResult newton_solve(const ConformalSolution& guess, double s_target, const WaveConfig& cfg);

struct FamilyMember {
    double steepness = 0.0;
    ConformalSolution solution;
    SolveInfo info;
};

struct ContinuationFamily {
    std::vector<FamilyMember> members;
    bool reached_target = false;
    std::string stop_reason;  // empty when reached_target
    double final_step = 0.0;
};

/// Continuation in steepness with step halving and mode doubling.
/// Requires 0 < s_start <= s_stop. Throws SolverError only if no member could be computed.
ContinuationFamily continue_family(double s_start, double s_stop, const WaveConfig& cfg);

struct LimitEstimate {
    double s_max = 0.0;
    double K_at_max = 1.0;
    int N_used = 0;
    ContinuationFamily family;
};

/// Pushes the continuation toward the extreme wave with N up to cfg.max_modes.
LimitEstimate estimate_limit(const WaveConfig& cfg);

/// Solution at a single steepness: direct Newton from the linear guess for
/// small s, continuation otherwise. Throws SolverError when s is not reached.
SolveResult solve_steepness(double s_target, const WaveConfig& cfg);

}  // namespace stokes
