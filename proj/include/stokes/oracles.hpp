#pragma once

// Slow reference implementations used by the test suites. Nothing here calls
// into the fast evaluation or solver paths it is meant to check.

#include <functional>

#include "stokes/wave_model.hpp"

namespace stokes::oracles {

/// Term-by-term series summation in long double with direct trig per mode.
ConformalJet naive_eval(const ConformalSolution& sol, StripPoint pt);

/// Fourth-order central difference of a scalar function; optional Richardson
/// step (h, h/2) raises the order to six.
double fd_derivative(const std::function<double(double)>& fn, double x, double step,
                     bool richardson = false);

/// Directional derivative of a field on the strip; `direction` is normalized.
double fd_derivative(const std::function<double(StripPoint)>& field, StripPoint pt,
                     StripPoint direction, double step, bool richardson = false);

/// Five-point-per-axis fourth-order Laplacian in (q, p).
double fd_laplacian(const std::function<double(StripPoint)>& field, StripPoint pt, double step);

/// Closed-form first-order wave: a_1 = pi s0, c = sqrt(g), E = g/2.
ConformalSolution linear_airy(double s0, double g, int modes = 4);

/// Conformal point whose physical image is (x, y), by Newton on the naive series
/// from `start`. Converges to 1e-12 in (q, p) or throws std::runtime_error.
StripPoint locate(const ConformalSolution& sol, double x, double y, StripPoint start);

/// Derivative of `field` along the physical direction (dx, dy) at the image of
/// `base`, differencing over points re-located in conformal variables.
double physical_derivative(const ConformalSolution& sol, const std::function<double(StripPoint)>& field,
                           StripPoint base, double dx, double dy, double step);

struct BracketBudget {
    int start_modes = 64;
    int max_modes = 4096;
    double newton_tol = 5e-13;
    double tail_tol = 5e-9;
    double width = 0.003;
    double s_low = 0.10;   // bisection starts on [s_low, s_high]
    double s_high = 0.20;
    double march_step = 0.0025;
    double min_step = 1e-4;
    int max_iter = 12;

    /// Doubled resolution and halved tolerances relative to a primary configuration.
    static BracketBudget doubled(const WaveConfig& primary);
};

struct LimitBracket {
    double s_lo = 0.0;   // largest steepness the oracle resolved
    double s_hi = 0.0;   // smallest steepness it failed to reach
    int modes_used = 0;
    int trials = 0;
    bool width_reached = false;
};

/// Independent bisection on steepness with its own collocation solver.
LimitBracket limit_bracket(const BracketBudget& budget);

}  // namespace stokes::oracles
