#include "stokes/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "stokes/spectral_solver.hpp"

namespace stokes {

const char* to_string(CheckKind kind) {
    switch (kind) {
        case CheckKind::Negative: return "negative";
        case CheckKind::Positive: return "positive";
        case CheckKind::NonPositive: return "nonpositive";
        case CheckKind::AbsWithin: return "abs_within";
    }
    return "unknown";
}

const CheckResult* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

class Checker {
public:
    Checker(std::string name, CheckKind kind, double tolerance, std::string units) {
        r_.name = std::move(name);
        r_.kind = kind;
        r_.tolerance = tolerance;
        r_.units = std::move(units);
    }

    void add(double value, StripPoint at) {
        const double key = (r_.kind == CheckKind::AbsWithin) ? std::abs(value) : value;
        bool worse = false;
        if (r_.samples_checked == 0) {
            worse = true;
        } else if (r_.kind == CheckKind::Positive) {
            worse = key < r_.worst_margin || std::isnan(key);
        } else {
            worse = key > r_.worst_margin || std::isnan(key);
        }
        if (worse) {
            r_.worst_margin = key;
            r_.worst_location = at;
        }
        if (value != 0.0) all_zero_ = false;
        ++r_.samples_checked;
    }

    void skip() { ++r_.samples_excluded; }

    CheckResult finish() const {
        CheckResult r = r_;
        if (r.samples_checked == 0) {
            r.degenerate = true;
            r.flag = "no-samples";
            r.passed = false;
            return r;
        }
        const double w = r.worst_margin;
        switch (r.kind) {
            case CheckKind::Negative:
            case CheckKind::Positive:
                if (all_zero_) {
                    r.degenerate = true;
                    r.flag = "zero-amplitude";
                    r.passed = true;
                } else {
                    r.passed = (r.kind == CheckKind::Negative) ? (w < 0.0) : (w > 0.0);
                }
                break;
            case CheckKind::NonPositive:
            case CheckKind::AbsWithin:
                r.passed = w <= r.tolerance;
                break;
        }
        return r;
    }

private:
    CheckResult r_;
    bool all_zero_ = true;
};

enum class Column { Crest, Interior, Trough };

Column column_of(const FieldGrid& grid, int iq) {
    if (iq == 0) return Column::Crest;
    if (iq == grid.nq - 1) return Column::Trough;
    return Column::Interior;
}

template <class Fn>
void for_each_sample(const FieldGrid& grid, Fn&& fn) {
    for (int ip = 0; ip < grid.np; ++ip)
        for (int iq = 0; iq < grid.nq; ++iq) fn(grid.at(iq, ip), iq, ip);
}

// Stride so that roughly `target` indices out of n are visited.
int stride_for(int n, int target) { return std::max(1, n / std::max(1, target)); }

// Fourth-order central second derivative along one conformal direction.
template <class Fn>
double second_difference(Fn&& fn, StripPoint pt, double dq, double dp) {
    auto at = [&](int m) { return fn(StripPoint{pt.q + m * dq, pt.p + m * dp}); };
    const double h2 = dq * dq + dp * dp;
    return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h2);
}

template <class Fn>
double first_difference(Fn&& fn, StripPoint pt, double dq, double dp) {
    auto at = [&](int m) { return fn(StripPoint{pt.q + m * dq, pt.p + m * dp}); };
    const double h = std::hypot(dq, dp);
    return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
}

// Interior grid points whose FD stencil of half-width 2h stays in the fluid and
// outside the exclusion.
template <class Fn>
void for_each_stencil_point(const FieldGrid& grid, double h, Fn&& fn) {
    const int sq = stride_for(grid.nq - 2, 32);
    const int sp = stride_for(grid.np - 1, 16);
    const CrestExclusion& ex = grid.exclusion;
    for (int ip = 0; ip < grid.np - 1; ip += sp) {
        for (int iq = 1; iq < grid.nq - 1; iq += sq) {
            const FieldSample& s = grid.at(iq, ip);
            StripPoint pt{s.q, s.p};
            if (pt.p + 2.0 * h > 0.0) continue;
            const bool near = ex.active && std::hypot(pt.q, pt.p) < ex.radius + 3.0 * h;
            fn(pt, near);
        }
    }
}

}  // namespace

std::vector<CheckResult> verify_theorem_Px(const ConformalSolution& sol, const FieldGrid& grid) {
    const double g = sol.gravity;
    Checker interior("Px_interior_negative", CheckKind::Negative, 0.0, "pressure/length");
    Checker crest("Px_crest_line_zero", CheckKind::AbsWithin, kLineTolerance * g, "pressure/length");
    Checker trough("Px_trough_line_zero", CheckKind::AbsWithin, kLineTolerance * g, "pressure/length");
    for_each_sample(grid, [&](const FieldSample& s, int iq, int) {
        Checker& target = column_of(grid, iq) == Column::Crest    ? crest
                          : column_of(grid, iq) == Column::Trough ? trough
                                                                  : interior;
        if (s.excluded) {
            target.skip();
            return;
        }
        target.add(s.P_x, {s.q, s.p});
    });
    return {interior.finish(), crest.finish(), trough.finish()};
}

double far_field_tolerance(const ConformalSolution& sol, double p) {
    const double decay = std::exp(p / sol.c);
    double bound = 0.0, ek = 1.0;
    for (int k = 1; k <= sol.modes(); ++k) {
        ek *= decay;
        bound += k * std::abs(sol.coeffs[static_cast<std::size_t>(k - 1)]) * ek;
    }
    return sol.gravity * (1e-8 + 2.0 * bound);
}

std::vector<CheckResult> verify_theorem_Py(const ConformalSolution& sol, const FieldGrid& grid) {
    const double g = sol.gravity;
    Checker neg("Py_negative", CheckKind::Negative, 0.0, "pressure/length");
    for_each_sample(grid, [&](const FieldSample& s, int, int) {
        if (s.excluded) {
            neg.skip();
            return;
        }
        neg.add(s.P_y, {s.q, s.p});
    });

    const double p_far = kFarFieldDepth * sol.c;
    Checker far("Py_far_field", CheckKind::AbsWithin, far_field_tolerance(sol, p_far), "pressure/length");
    for (int iq = 0; iq < grid.nq; ++iq) {
        const double q = sol.trough_q() * iq / (grid.nq - 1);
        const PressureGradient pg = pressure_gradient(sol, {q, p_far});
        far.add(pg.P_y + g, {q, p_far});
    }
    return {neg.finish(), far.finish()};
}

std::vector<CheckResult> verify_f_results(const ConformalSolution& sol, const FieldGrid& grid) {
    const double g = sol.gravity;
    Checker slope("f_surface_slope_nonpositive", CheckKind::NonPositive, kLineTolerance * g, "pressure/length");
    Checker value("f_surface_nonpositive", CheckKind::NonPositive, kLineTolerance * g, "pressure");
    Checker lines("f_line_values", CheckKind::AbsWithin, kLineTolerance * g, "pressure");
    const int top = grid.np - 1;
    for (int iq = 0; iq < grid.nq; ++iq) {
        const FieldSample& s = grid.at(iq, top);
        const Column col = column_of(grid, iq);
        if (s.excluded) {
            value.skip();
            if (col == Column::Interior) slope.skip();
            continue;
        }
        value.add(s.f, {s.q, s.p});
        if (col == Column::Interior) slope.add(surface_f_slope(sol, s.q), {s.q, s.p});
    }
    for_each_sample(grid, [&](const FieldSample& s, int iq, int) {
        const Column col = column_of(grid, iq);
        if (col == Column::Interior) return;
        if (s.excluded) {
            lines.skip();
            return;
        }
        lines.add(col == Column::Crest ? s.f : s.f + g * kPi, {s.q, s.p});
    });

    // Harmonicity in (x, y): Laplacian in (q, p) divided by the conformal factor.
    const double h = 2e-3 * sol.c;
    Checker harmonic("f_harmonic", CheckKind::AbsWithin, kFiniteDifferenceTolerance * g / (2.0 * kPi),
                     "pressure/length^2");
    auto f_at = [&](StripPoint pt) { return f_field(sol, pt); };
    for_each_stencil_point(grid, h, [&](StripPoint pt, bool near) {
        if (near) {
            harmonic.skip();
            return;
        }
        const double lap = second_difference(f_at, pt, h, 0.0) + second_difference(f_at, pt, 0.0, h);
        harmonic.add(lap / eval_conformal_jet(sol, pt).metric(), pt);
    });
    return {slope.finish(), value.finish(), lines.finish(), harmonic.finish()};
}

std::vector<CheckResult> verify_velocity_results(const ConformalSolution& sol, const FieldGrid& grid) {
    Checker v_pos("v_interior_positive", CheckKind::Positive, 0.0, "velocity");
    Checker v_lines("v_lines_zero", CheckKind::AbsWithin, kVelocityLineTolerance, "velocity");
    Checker rel("u_minus_c_negative", CheckKind::Negative, 0.0, "velocity");
    Checker uq("u_q_negative", CheckKind::Negative, 0.0, "velocity/length");
    for_each_sample(grid, [&](const FieldSample& s, int iq, int) {
        const bool interior = column_of(grid, iq) == Column::Interior;
        if (s.excluded) {
            (interior ? v_pos : v_lines).skip();
            rel.skip();
            if (interior) uq.skip();
            return;
        }
        const StripPoint pt{s.q, s.p};
        (interior ? v_pos : v_lines).add(s.v, pt);
        rel.add(s.u - sol.c, pt);
        if (interior) uq.add(velocity_gradient(sol, pt).u_q, pt);
    });
    return {v_pos.finish(), v_lines.finish(), rel.finish(), uq.finish()};
}

std::vector<CheckResult> verify_identities(const ConformalSolution& sol, const FieldGrid& grid,
                                           const WaveConfig& cfg) {
    const double g = sol.gravity;
    std::vector<CheckResult> out;

    Checker colloc("bernoulli_collocation", CheckKind::AbsWithin, cfg.newton_tol, "dimensionless");
    const Eigen::VectorXd r = residual(sol, steepness(sol));
    const double dq = sol.trough_q() / sol.modes();
    for (int j = 0; j <= sol.modes(); ++j) colloc.add(r[j], {j * dq, 0.0});
    out.push_back(colloc.finish());

    Checker surf("surface_pressure", CheckKind::AbsWithin, 10.0 * cfg.newton_tol, "pressure");
    Checker hodo("hodograph_consistency", CheckKind::AbsWithin, kHodographTolerance, "relative");
    Checker dual("dual_Px_agreement", CheckKind::AbsWithin, kIdentityTolerance, "relative");
    Checker lap_h("h_harmonic", CheckKind::AbsWithin, 1e-12, "relative");
    for_each_sample(grid, [&](const FieldSample& s, int, int ip) {
        if (s.excluded) {
            hodo.skip();
            dual.skip();
            lap_h.skip();
            if (ip == grid.np - 1) surf.skip();
            return;
        }
        const StripPoint pt{s.q, s.p};
        const ConformalJet j = eval_conformal_jet(sol, pt);
        const double w = sol.c - s.u;
        hodo.add((w * w + s.v * s.v) * j.metric() - 1.0, pt);
        const PressureGradient pg = pressure_gradient(sol, pt);
        dual.add((pg.P_x - pg.P_x_conformal) / (std::abs(pg.P_x) + g), pt);
        lap_h.add((j.h_qq + j.h_pp) / (std::abs(j.h_qq) + std::abs(j.h_pp) + 1.0), pt);
        if (ip == grid.np - 1) surf.add(s.P - sol.surface_pressure, pt);
    });
    out.push_back(surf.finish());
    out.push_back(hodo.finish());
    out.push_back(dual.finish());
    out.push_back(lap_h.finish());

    // Laplacian of P against -2 |grad u|^2, differencing the analytic gradient
    // in conformal coordinates and mapping with d/dx = w d/dq + v d/dp.
    const double h = 2e-3 * sol.c;
    Checker superh("superharmonic_identity", CheckKind::AbsWithin, kFiniteDifferenceTolerance, "relative");
    auto px_at = [&](StripPoint pt) { return pressure_gradient(sol, pt).P_x; };
    auto py_at = [&](StripPoint pt) { return pressure_gradient(sol, pt).P_y; };
    for_each_stencil_point(grid, h, [&](StripPoint pt, bool near) {
        if (near) {
            superh.skip();
            return;
        }
        const Velocity vel = velocity(sol, pt);
        const double w = sol.c - vel.u, v = vel.v;
        const double pxx = w * first_difference(px_at, pt, h, 0.0) + v * first_difference(px_at, pt, 0.0, h);
        const double pyy = -v * first_difference(py_at, pt, h, 0.0) + w * first_difference(py_at, pt, 0.0, h);
        const VelocityGradient vg = velocity_gradient(sol, pt);
        const double grad2 = 2.0 * (vg.u_x * vg.u_x + vg.u_y * vg.u_y);
        superh.add((pxx + pyy + grad2) / (grad2 + g / (2.0 * kPi)), pt);
    });
    out.push_back(superh.finish());
    return out;
}

double crest_angle(const ConformalSolution& sol, int samples) {
    const SurfaceProfile prof = surface(sol, samples);
    std::size_t best = 0;
    double peak = 0.0;
    for (std::size_t i = 0; i < prof.slope.size(); ++i) {
        const double s = std::abs(prof.slope[i]);
        if (s > peak) {
            peak = s;
            best = i;
        }
    }
    if (peak == 0.0) return 180.0;
    if (best > 0 && best + 1 < prof.slope.size()) {
        const double a = std::abs(prof.slope[best - 1]);
        const double b = peak;
        const double c = std::abs(prof.slope[best + 1]);
        const double curv = a - 2.0 * b + c;
        if (curv < 0.0) peak = b - (c - a) * (c - a) / (8.0 * curv);
    }
    return 180.0 - 2.0 * std::atan(peak) * 180.0 / kPi;
}

std::vector<CheckResult> verify_surface_shape(const ConformalSolution& sol, int samples) {
    const SurfaceProfile prof = surface(sol, samples);
    Checker steep("surface_slope_squared_below_one", CheckKind::Negative, 0.0, "dimensionless");
    Checker decreasing("surface_decreasing", CheckKind::Negative, 0.0, "dimensionless");
    Checker convex("surface_convex", CheckKind::NonPositive, 0.0, "1/length");
    const std::size_t n = prof.q.size();
    for (std::size_t i = 0; i < n; ++i) {
        const StripPoint pt{prof.q[i], 0.0};
        steep.add(prof.slope[i] * prof.slope[i] - 1.0, pt);
        if (i > 0 && i + 1 < n) decreasing.add(prof.slope[i], pt);
        if (i > 0) convex.add(-prof.curvature[i], pt);
    }
    return {steep.finish(), decreasing.finish(), convex.finish()};
}

VerificationReport verify_all(const ConformalSolution& sol, const WaveConfig& cfg) {
    cfg.validate();
    const FieldGrid grid = physical_grid(sol, cfg);

    VerificationReport rep;
    rep.steepness = steepness(sol);
    rep.c = sol.c;
    rep.E = sol.E;
    rep.crest_indicator = crest_indicator(sol);
    rep.modes = sol.modes();
    rep.grid_nq = grid.nq;
    rep.grid_np = grid.np;
    rep.grid_depth = grid.p_min;
    rep.exclusion_active = grid.exclusion.active;
    rep.excision_radius = grid.exclusion.radius;
    rep.crest_angle_deg = crest_angle(sol);

    auto append = [&](std::vector<CheckResult> v) {
        for (auto& c : v) rep.checks.push_back(std::move(c));
    };
    append(verify_theorem_Px(sol, grid));
    append(verify_theorem_Py(sol, grid));
    append(verify_f_results(sol, grid));
    append(verify_velocity_results(sol, grid));
    append(verify_identities(sol, grid, cfg));
    rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) { return c.passed; });
    return rep;
}

}  // namespace stokes
