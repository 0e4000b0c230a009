#include "stokes/hodograph_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stokes/errors.hpp"

namespace stokes {

bool CrestExclusion::contains(StripPoint pt) const {
    return active && std::hypot(pt.q, pt.p) < radius;
}

CrestExclusion crest_exclusion(const ConformalSolution& sol, const WaveConfig& cfg) {
    CrestExclusion excl;
    excl.radius = cfg.excision_radius * sol.c;
    excl.active = crest_indicator(sol) < cfg.crest_indicator_threshold && cfg.excision_radius > 0.0;
    return excl;
}

namespace {

void guard(StripPoint pt, const CrestExclusion& excl) {
    if (excl.contains(pt)) {
        std::ostringstream os;
        os << "point (" << pt.q << ", " << pt.p << ") lies within " << excl.radius
           << " of the near-stagnation crest";
        throw StagnationProximity(os.str());
    }
}

struct Kinematics {
    ConformalJet jet;
    double metric = 1.0;
    double w = 0.0;  // c - u
    double v = 0.0;
    VelocityGradient grad;
};

Kinematics kinematics(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl) {
    guard(pt, excl);
    Kinematics k;
    k.jet = eval_conformal_jet(sol, pt);
    const ConformalJet& j = k.jet;
    const double J = j.metric();
    k.metric = J;
    k.w = j.h_p / J;
    k.v = -j.h_q / J;

    const double J_q = 2.0 * (j.h_q * j.h_qq + j.h_p * j.h_qp);
    const double J_p = 2.0 * (j.h_q * j.h_qp + j.h_p * j.h_pp);
    const double J2 = J * J;
    VelocityGradient& g = k.grad;
    g.u_q = -(j.h_qp * J - j.h_p * J_q) / J2;
    g.u_p = -(j.h_pp * J - j.h_p * J_p) / J2;
    g.v_q = -(j.h_qq * J - j.h_q * J_q) / J2;
    g.v_p = -(j.h_qp * J - j.h_q * J_p) / J2;

    const double w = k.w, v = k.v;
    g.u_x = w * g.u_q + v * g.u_p;
    g.u_y = -v * g.u_q + w * g.u_p;
    g.v_x = w * g.v_q + v * g.v_p;
    g.v_y = -v * g.v_q + w * g.v_p;
    return k;
}

double bernoulli_pressure(const ConformalSolution& sol, const Kinematics& k) {
    const double Q = sol.E + sol.surface_pressure;
    return Q - sol.gravity * k.jet.h - 0.5 * (k.w * k.w + k.v * k.v);
}

PressureGradient gradient_from(const ConformalSolution& sol, const Kinematics& k) {
    const VelocityGradient& g = k.grad;
    PressureGradient pg;
    pg.P_x = k.w * g.u_x - k.v * g.u_y;
    pg.P_y = -sol.gravity + k.w * g.v_x - k.v * g.v_y;
    pg.P_x_conformal = g.u_q / k.metric;
    return pg;
}

}  // namespace

Velocity velocity(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl) {
    guard(pt, excl);
    const ConformalJet j = eval_conformal_jet(sol, pt);
    const double J = j.metric();
    return {sol.c - j.h_p / J, -j.h_q / J};
}

VelocityGradient velocity_gradient(const ConformalSolution& sol, StripPoint pt,
                                   const CrestExclusion& excl) {
    return kinematics(sol, pt, excl).grad;
}

double pressure(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl) {
    return bernoulli_pressure(sol, kinematics(sol, pt, excl));
}

PressureGradient pressure_gradient(const ConformalSolution& sol, StripPoint pt,
                                   const CrestExclusion& excl) {
    return gradient_from(sol, kinematics(sol, pt, excl));
}

double f_field(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl) {
    const Kinematics k = kinematics(sol, pt, excl);
    return k.w * k.v - sol.gravity * k.jet.x;
}

double surface_f_slope(const ConformalSolution& sol, double q) {
    const Kinematics k = kinematics(sol, {q, 0.0}, {});
    // f_q = (c-u)_q v + (c-u) v_q - g x_q, and dx/dq = x_q along p = 0.
    const double f_q = -k.grad.u_q * k.v + k.w * k.grad.v_q - sol.gravity * k.jet.x_q;
    return f_q / k.jet.x_q;
}

FieldSample sample(const ConformalSolution& sol, StripPoint pt, const CrestExclusion& excl) {
    FieldSample s;
    s.q = pt.q;
    s.p = pt.p;
    if (excl.contains(pt)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.x = s.y = s.u = s.v = s.P = s.f = s.P_x = s.P_y = nan;
        s.excluded = true;
        return s;
    }
    const Kinematics k = kinematics(sol, pt, excl);
    const PressureGradient pg = gradient_from(sol, k);
    s.x = k.jet.x;
    s.y = k.jet.h;
    s.u = sol.c - k.w;
    s.v = k.v;
    s.P = bernoulli_pressure(sol, k);
    s.f = k.w * k.v - sol.gravity * k.jet.x;
    s.P_x = pg.P_x;
    s.P_y = pg.P_y;
    return s;
}

SurfaceProfile surface(const ConformalSolution& sol, int M) {
    if (M < 16) throw InvalidConfig("surface: at least 16 intervals required");
    SurfaceProfile prof;
    const auto n = static_cast<std::size_t>(M + 1);
    prof.q.resize(n);
    prof.x.resize(n);
    prof.eta.resize(n);
    prof.slope.resize(n);
    prof.curvature.resize(n);
    for (int i = 0; i <= M; ++i) {
        const double q = (i == M) ? sol.trough_q() : sol.trough_q() * i / M;
        const ConformalJet j = eval_conformal_jet(sol, {q, 0.0});
        const auto k = static_cast<std::size_t>(i);
        prof.q[k] = q;
        prof.x[k] = j.x;
        prof.eta[k] = j.h;
        prof.slope[k] = j.h_q / j.h_p;
        prof.curvature[k] = (j.h_qq * j.h_p - j.h_q * j.h_qp) / (j.h_p * j.h_p * j.h_p);
    }
    return prof;
}

double grid_depth(const ConformalSolution& sol, const WaveConfig& cfg) {
    return cfg.grid_depth ? *cfg.grid_depth : -2.0 * kPi * sol.c;
}

double profile_distance(const ConformalSolution& a, const ConformalSolution& b, int M) {
    const SurfaceProfile pa = surface(a, M);
    const SurfaceProfile pb = surface(b, M);
    double worst = 0.0;
    for (std::size_t i = 0; i < pa.x.size(); ++i) {
        const auto hi = std::lower_bound(pb.x.begin(), pb.x.end(), pa.x[i]);
        std::size_t j = static_cast<std::size_t>(hi - pb.x.begin());
        j = std::clamp<std::size_t>(j, 1, pb.x.size() - 1);
        const double t = (pa.x[i] - pb.x[j - 1]) / (pb.x[j] - pb.x[j - 1]);
        const double eta_b = pb.eta[j - 1] + t * (pb.eta[j] - pb.eta[j - 1]);
        worst = std::max(worst, std::abs(pa.eta[i] - eta_b));
    }
    return worst;
}

FieldGrid physical_grid(const ConformalSolution& sol, const WaveConfig& cfg) {
    if (cfg.grid_nq < 2 || cfg.grid_np < 2) throw InvalidConfig("physical_grid: grid must be at least 2x2");
    const double p_min = grid_depth(sol, cfg);
    if (!(p_min < 0.0)) throw InvalidConfig("physical_grid: grid depth must be negative");

    FieldGrid grid;
    grid.nq = cfg.grid_nq;
    grid.np = cfg.grid_np;
    grid.p_min = p_min;
    grid.exclusion = crest_exclusion(sol, cfg);
    grid.samples.reserve(static_cast<std::size_t>(grid.nq) * static_cast<std::size_t>(grid.np));
    const double q_max = sol.trough_q();
    for (int ip = 0; ip < grid.np; ++ip) {
        const double p = (ip == grid.np - 1) ? 0.0 : p_min * (1.0 - static_cast<double>(ip) / (grid.np - 1));
        for (int iq = 0; iq < grid.nq; ++iq) {
            const double q = (iq == grid.nq - 1) ? q_max : q_max * iq / (grid.nq - 1);
            grid.samples.push_back(sample(sol, {q, p}, grid.exclusion));
        }
    }
    return grid;
}

}  // namespace stokes
