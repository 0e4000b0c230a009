#pragma once

// Physical-space fields of a wave reconstructed from the conformal series.
//
// With J = h_q^2 + h_p^2 the hodograph inversion gives
//   c - u = h_p / J,   v = -h_q / J,
// and physical derivatives follow from d/dx = (c-u) d/dq + v d/dp,
// d/dy = -v d/dq + (c-u) d/dp. Pressure comes from Bernoulli's law
//   P = (E + P0) - g y - ((u - c)^2 + v^2) / 2.

#include <vector>

#include "stokes/wave_model.hpp"

namespace stokes {

struct CrestExclusion {
    bool active = false;
    double radius = 0.0;

    bool contains(StripPoint pt) const;
};

/// Exclusion is active only when the crest indicator falls below the configured threshold.
CrestExclusion crest_exclusion(const ConformalSolution& sol, const WaveConfig& cfg);

struct Velocity {
    double u = 0.0;
    double v = 0.0;
};

struct VelocityGradient {
    double u_q = 0, u_p = 0, v_q = 0, v_p = 0;  // conformal partials
    double u_x = 0, u_y = 0, v_x = 0, v_y = 0;  // physical partials
};

struct PressureGradient {
    double P_x = 0.0;             // from the horizontal Euler equation
    double P_y = 0.0;
    double P_x_conformal = 0.0;   // u_q / (h_q^2 + h_p^2)
};

struct FieldSample {
    double q = 0, p = 0;
    double x = 0, y = 0;
    double u = 0, v = 0;
    double P = 0;
    double f = 0;
    double P_x = 0, P_y = 0;
    bool excluded = false;
};

struct SurfaceProfile {
    std::vector<double> q, x, eta, slope, curvature;
};

// All point evaluators throw InvalidConfig for p > 0 and StagnationProximity
// for points inside an active crest exclusion.
Velocity velocity(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl = {});
VelocityGradient velocity_gradient(const ConformalSolution& sol, StripPoint pt,
                                   const CrestExclusion& excl = {});
double pressure(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl = {});
PressureGradient pressure_gradient(const ConformalSolution& sol, StripPoint pt,
                                   const CrestExclusion& excl = {});
/// f = (c - u) v - g x.
double f_field(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl = {});

/// d/dx of f along the free surface, i.e. f_q / x_q at p = 0.
double surface_f_slope(const ConformalSolution& sol, double q);

/// Every reconstructed quantity at one point.
FieldSample sample(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl = {});

/// M + 1 surface samples uniformly in q over [0, c pi], i.e. x over [0, pi].
SurfaceProfile surface(const ConformalSolution& sol, int M);

/// Sup-norm distance between two surface profiles over x in [0, pi], with b
/// interpolated linearly onto the x samples of a.
double profile_distance(const ConformalSolution& a, const ConformalSolution& b, int M = 512);

struct FieldGrid {
    int nq = 0, np = 0;
    double p_min = 0.0;
    CrestExclusion exclusion;
    std::vector<FieldSample> samples;  // row-major, q fastest; row 0 is p = p_min

    const FieldSample& at(int iq, int ip) const {
        return samples[static_cast<std::size_t>(ip) * static_cast<std::size_t>(nq) +
                       static_cast<std::size_t>(iq)];
    }
};

/// Grid depth actually used for `sol` under `cfg` (default -2 pi c).
double grid_depth(const ConformalSolution& sol, const WaveConfig& cfg);

/// cfg.grid_nq x cfg.grid_np samples over [0, c pi] x [p_min, 0]. Excluded
/// samples keep their coordinates, carry excluded = true and NaN fields.
FieldGrid physical_grid(const ConformalSolution& sol, const WaveConfig& cfg);

}  // namespace stokes
