#pragma once

// Representation of a periodic deep-water wave as a truncated harmonic series
// in the conformal half-strip (q, p), p <= 0. With theta = q/c and sigma = p/c:
//
//   h(q, p) = p/c + sum_k a_k e^{k sigma} cos(k theta)     (elevation y)
//   x(q, p) = q/c + sum_k a_k e^{k sigma} sin(k theta)     (harmonic conjugate)
//
// The wavelength is fixed at 2*pi in x, which makes h 2*pi*c periodic in q.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace stokes {

inline constexpr double kPi = 3.14159265358979323846;

struct WaveConfig {
    double gravity = 1.0;
    double surface_pressure = 0.0;
    int mode_count = 64;
    double newton_tol = 1e-12;
    int newton_max_iter = 30;

    int grid_nq = 256;
    int grid_np = 128;
    // Lower edge of verification grids; empty means -2*pi*c of the solution at hand.
    std::optional<double> grid_depth;
    double excision_radius = 0.05;  // in units of c
    double crest_indicator_threshold = 0.1;

    // Continuation controls.
    int max_modes = 2048;
    double max_step = 0.01;
    double min_step = 1e-5;

    /// Throws InvalidConfig when an invariant is violated.
    void validate() const;
};

struct StripPoint {
    double q = 0.0;
    double p = 0.0;
};

/// One traveling wave. coeffs[k-1] holds a_k.
struct ConformalSolution {
    double c = 1.0;
    double E = 0.5;
    std::vector<double> coeffs;
    double gravity = 1.0;
    double surface_pressure = 0.0;

    int modes() const { return static_cast<int>(coeffs.size()); }
    double period() const { return 2.0 * kPi * c; }
    /// Conformal abscissa of the trough line, c*pi.
    double trough_q() const { return kPi * c; }

    static ConformalSolution flat(int modes, double gravity = 1.0, double surface_pressure = 0.0);
};

struct ConformalJet {
    double h = 0, h_q = 0, h_p = 0, h_qq = 0, h_qp = 0, h_pp = 0;
    double x = 0, x_q = 0, x_p = 0;

    /// h_q^2 + h_p^2, the squared conformal-to-physical stretch.
    double metric() const { return h_q * h_q + h_p * h_p; }
};

/// Series value and first/second partials at pt. Throws InvalidConfig for pt.p > 0.
ConformalJet eval_conformal_jet(const ConformalSolution& sol, StripPoint pt);

/// Crest-to-trough height over wavelength.
double steepness(const ConformalSolution& sol);
double steepness(std::span<const double> coeffs);

/// (c - u)/c at the crest; 1 for the flat wave, tending to 0 near stagnation.
double crest_indicator(const ConformalSolution& sol);

/// |a_N| / max |a_k|; 0 for the flat wave.
double tail_ratio(std::span<const double> coeffs);

/// Copy of sol with coefficients zero-padded (or truncated) to `modes`.
ConformalSolution resized(const ConformalSolution& sol, int modes);

}  // namespace stokes
