#include "stokes/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "stokes/errors.hpp"

namespace stokes {

namespace {

// cos(pi m / (res N)) and sin(...) for m in [0, 2 res N), with exact zeros on
// the axes so that symmetric rows stay symmetric.
struct TrigTable {
    int period = 0;
    std::vector<double> cos_, sin_;

    explicit TrigTable(int n) : period(2 * n), cos_(2 * n), sin_(2 * n) {
        for (int m = 0; m < period; ++m) {
            const double t = kPi * m / n;
            cos_[m] = std::cos(t);
            sin_[m] = std::sin(t);
        }
        sin_[0] = 0.0;
        sin_[n] = 0.0;
        cos_[n] = -1.0;
        if (n % 2 == 0) {
            cos_[n / 2] = 0.0;
            cos_[3 * n / 2] = 0.0;
        }
    }
};

// Surface quantities at one angle: h, A = 1 + sum k a_k cos, B = sum k a_k sin.
struct SurfaceSums {
    double h = 0.0, A = 1.0, B = 0.0;
};

// Angles theta_m = pi m / n for the given row indices m (table of half-period n).
std::vector<SurfaceSums> surface_sums(std::span<const double> a, const TrigTable& tab,
                                      std::span<const int> rows) {
    std::vector<SurfaceSums> out(rows.size());
    const int n = static_cast<int>(a.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int m = rows[r];
        double h = 0.0, A = 1.0, B = 0.0;
        int idx = 0;
        for (int k = 1; k <= n; ++k) {
            idx += m;
            if (idx >= tab.period) idx -= tab.period;
            const double ak = a[static_cast<std::size_t>(k - 1)];
            const double co = tab.cos_[static_cast<std::size_t>(idx)];
            const double si = tab.sin_[static_cast<std::size_t>(idx)];
            h += ak * co;
            A += k * ak * co;
            B += k * ak * si;
        }
        out[r] = {h, A, B};
    }
    return out;
}

std::vector<int> collocation_rows(int n) {
    std::vector<int> rows(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) rows[static_cast<std::size_t>(j)] = j;
    return rows;
}

double bernoulli_residual(const ConformalSolution& sol, const SurfaceSums& s) {
    const double metric = (s.A * s.A + s.B * s.B) / (sol.c * sol.c);
    return 2.0 * (sol.E - sol.gravity * s.h) * metric - 1.0;
}

Eigen::VectorXd pack(const ConformalSolution& sol) {
    const int n = sol.modes();
    Eigen::VectorXd x(n + 2);
    for (int k = 0; k < n; ++k) x[k] = sol.coeffs[static_cast<std::size_t>(k)];
    x[n] = sol.c;
    x[n + 1] = sol.E;
    return x;
}

void unpack(const Eigen::VectorXd& x, ConformalSolution& sol) {
    const int n = sol.modes();
    for (int k = 0; k < n; ++k) sol.coeffs[static_cast<std::size_t>(k)] = x[k];
    sol.c = x[n];
    sol.E = x[n + 1];
}

bool all_finite(const ConformalSolution& sol) {
    if (!std::isfinite(sol.c) || !std::isfinite(sol.E)) return false;
    return std::all_of(sol.coeffs.begin(), sol.coeffs.end(),
                       [](double a) { return std::isfinite(a); });
}

[[noreturn]] void fail(SolverFailure kind, const std::string& msg, int iters, double res) {
    std::ostringstream os;
    os << to_string(kind) << ": " << msg << " (iterations " << iters << ", residual " << res
       << ")";
    throw SolverError(kind, os.str(), iters, res);
}

}  // namespace

ConformalSolution initial_guess(double s0, const WaveConfig& cfg) {
    if (!(s0 >= 0.0 && s0 <= 0.02))
        throw InvalidConfig("initial_guess: steepness must lie in [0, 0.02]");
    cfg.validate();
    ConformalSolution sol = ConformalSolution::flat(cfg.mode_count, cfg.gravity, cfg.surface_pressure);
    sol.coeffs[0] = kPi * s0;
    return sol;
}

Eigen::VectorXd residual(const ConformalSolution& sol, double s_target) {
    const int n = sol.modes();
    const TrigTable tab(n);
    const auto rows = collocation_rows(n);
    const auto sums = surface_sums(sol.coeffs, tab, rows);
    Eigen::VectorXd r(n + 2);
    for (int j = 0; j <= n; ++j) r[j] = bernoulli_residual(sol, sums[static_cast<std::size_t>(j)]);
    r[n + 1] = steepness(sol) - s_target;
    return r;
}

double midpoint_residual(const ConformalSolution& sol) {
    const int n = sol.modes();
    const TrigTable tab(2 * n);
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) rows[static_cast<std::size_t>(j)] = 2 * j + 1;
    const auto sums = surface_sums(sol.coeffs, tab, rows);
    double worst = 0.0;
    for (const auto& s : sums) worst = std::max(worst, std::abs(bernoulli_residual(sol, s)));
    return worst;
}

Eigen::MatrixXd jacobian(const ConformalSolution& sol, double /*s_target*/) {
    const int n = sol.modes();
    const TrigTable tab(n);
    const auto rows = collocation_rows(n);
    const auto sums = surface_sums(sol.coeffs, tab, rows);
    const double c = sol.c, g = sol.gravity;
    const double c2 = c * c;

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 2, n + 2);
    for (int j = 0; j <= n; ++j) {
        const SurfaceSums& s = sums[static_cast<std::size_t>(j)];
        const double m = s.A * s.A + s.B * s.B;
        const double head = sol.E - g * s.h;
        int idx = 0;
        for (int k = 1; k <= n; ++k) {
            idx += j;
            if (idx >= tab.period) idx -= tab.period;
            const double co = tab.cos_[static_cast<std::size_t>(idx)];
            const double si = tab.sin_[static_cast<std::size_t>(idx)];
            jac(j, k - 1) = (2.0 / c2) * (-g * co * m + head * 2.0 * k * (s.A * co + s.B * si));
        }
        jac(j, n) = -4.0 * head * m / (c2 * c);
        jac(j, n + 1) = 2.0 * m / c2;
    }
    for (int k = 1; k <= n; k += 2) jac(n + 1, k - 1) = 1.0 / kPi;
    return jac;
}

SolveResult newton_solve(const ConformalSolution& guess, double s_target, const WaveConfig& cfg) {
    cfg.validate();
    if (!(s_target >= 0.0)) throw InvalidConfig("newton_solve: s_target must be >= 0");
    if (guess.modes() < 1 || !all_finite(guess)) throw InvalidConfig("newton_solve: guess is not finite");

    if (s_target == 0.0) {
        // The trivial branch is a bifurcation point (c is undetermined there);
        // return the member continuously connected to the nontrivial waves.
        SolveResult out{ConformalSolution::flat(guess.modes(), guess.gravity, guess.surface_pressure), {}};
        out.info.newton_iters = 1;
        out.info.residual_norm = residual(out.solution, 0.0).cwiseAbs().maxCoeff();
        out.info.midpoint_residual = midpoint_residual(out.solution);
        out.info.crest_indicator = crest_indicator(out.solution);
        return out;
    }

    ConformalSolution sol = guess;
    Eigen::VectorXd r = residual(sol, s_target);
    double rmax = r.cwiseAbs().maxCoeff();
    int iters = 0;
    while (!(rmax <= cfg.newton_tol)) {
        if (iters >= cfg.newton_max_iter)
            fail(SolverFailure::NonConvergence, "iteration cap reached", iters, rmax);

        const Eigen::MatrixXd jac = jacobian(sol, s_target);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const double rcond = lu.rcond();
        if (!(rcond > 1.0 / kSingularConditionLimit))
            fail(SolverFailure::SingularJacobian, "Jacobian condition estimate exceeds 1e14", iters, rmax);
        const Eigen::VectorXd step = lu.solve(r);

        const Eigen::VectorXd x0 = pack(sol);
        const double norm0 = r.norm();
        double lambda = 1.0;
        bool accepted = false;
        for (int halvings = 0; halvings <= 8; ++halvings, lambda *= 0.5) {
            ConformalSolution trial = sol;
            unpack(x0 - lambda * step, trial);
            if (!all_finite(trial) || !(trial.c > 0.0)) continue;
            Eigen::VectorXd rt = residual(trial, s_target);
            if (rt.allFinite() && rt.norm() < norm0) {
                sol = std::move(trial);
                r = std::move(rt);
                accepted = true;
                break;
            }
        }
        ++iters;
        if (!accepted) {
            // Already at the rounding floor counts as converged only if within tolerance.
            fail(SolverFailure::NonConvergence, "no residual decrease after 8 step halvings", iters, rmax);
        }
        rmax = r.cwiseAbs().maxCoeff();
    }

    SolveResult out{std::move(sol), {}};
    out.info.newton_iters = iters;
    out.info.residual_norm = rmax;
    out.info.tail_ratio = tail_ratio(out.solution.coeffs);
    out.info.midpoint_residual = midpoint_residual(out.solution);
    out.info.crest_indicator = crest_indicator(out.solution);
    if (out.info.tail_ratio > kTailTolerance) {
        std::ostringstream os;
        os << "tail ratio " << out.info.tail_ratio << " exceeds " << kTailTolerance << " at N = "
           << out.solution.modes();
        fail(SolverFailure::TailNotResolved, os.str(), iters, rmax);
    }
    if (!(out.solution.c > 0.0 && out.solution.E > 0.0 && out.solution.coeffs[0] > 0.0))
        fail(SolverFailure::NonConvergence, "converged to an inadmissible wave", iters, rmax);
    return out;
}

namespace {

ConformalSolution secant_predict(const ConformalSolution& prev, double s_prev,
                                 const ConformalSolution& cur, double s_cur, double s_next) {
    const int n = cur.modes();
    ConformalSolution p = resized(prev, n);
    ConformalSolution out = cur;
    const double t = (s_next - s_cur) / (s_cur - s_prev);
    for (int k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        out.coeffs[i] = cur.coeffs[i] + t * (cur.coeffs[i] - p.coeffs[i]);
    }
    out.c = cur.c + t * (cur.c - p.c);
    out.E = cur.E + t * (cur.E - p.E);
    return out;
}

// Newton at s with mode doubling on an unresolved tail.
SolveResult solve_resolving(ConformalSolution guess, double s, const WaveConfig& cfg) {
    WaveConfig local = cfg;
    for (;;) {
        local.mode_count = guess.modes();
        try {
            return newton_solve(guess, s, local);
        } catch (const SolverError& e) {
            if (e.kind() != SolverFailure::TailNotResolved || 2 * guess.modes() > cfg.max_modes)
                throw;
            guess = resized(guess, 2 * guess.modes());
        }
    }
}

}  // namespace

ContinuationFamily continue_family(double s_start, double s_stop, const WaveConfig& cfg_in) {
    cfg_in.validate();
    if (!(s_start > 0.0 && s_start <= s_stop))
        throw InvalidConfig("continue_family: requires 0 < s_start <= s_stop");

    WaveConfig cfg = cfg_in;
    ContinuationFamily fam;

    const double s_boot = std::min(s_start, 0.01);
    SolveResult cur = solve_resolving(initial_guess(s_boot, cfg), s_boot, cfg);
    double s_cur = s_boot;
    std::optional<std::pair<double, ConformalSolution>> prev;

    auto record = [&](double s, const SolveResult& r) {
        if (s >= s_start) fam.members.push_back({s, r.solution, r.info});
    };
    record(s_cur, cur);

    double ds = cfg.max_step;
    std::string last_error;
    while (s_cur < s_stop) {
        double s_next = std::min(s_cur + ds, s_stop);
        if (s_stop - s_next < cfg.min_step) s_next = s_stop;
        if (s_cur < s_start && s_next > s_start) s_next = s_start;

        ConformalSolution guess = prev ? secant_predict(prev->second, prev->first, cur.solution, s_cur, s_next)
                                       : cur.solution;
        try {
            SolveResult next = solve_resolving(std::move(guess), s_next, cfg);
            prev.emplace(s_cur, cur.solution);
            cur = std::move(next);
            s_cur = s_next;
            record(s_cur, cur);
        } catch (const SolverError& e) {
            last_error = e.what();
            ds *= 0.5;
            if (ds < cfg.min_step) break;
        }
    }

    fam.final_step = ds;
    fam.reached_target = s_cur >= s_stop;
    if (!fam.reached_target) fam.stop_reason = "step fell below minimum; last failure: " + last_error;
    if (fam.members.empty())
        throw SolverError(SolverFailure::NonConvergence,
                          "continuation never reached s_start: " + last_error);
    return fam;
}

LimitEstimate estimate_limit(const WaveConfig& cfg) {
    LimitEstimate est;
    est.family = continue_family(0.01, 0.2, cfg);
    const FamilyMember& last = est.family.members.back();
    est.s_max = last.steepness;
    est.K_at_max = last.info.crest_indicator;
    est.N_used = last.solution.modes();
    return est;
}

SolveResult solve_steepness(double s_target, const WaveConfig& cfg) {
    cfg.validate();
    if (!(s_target >= 0.0)) throw InvalidConfig("steepness must be >= 0");
    if (s_target <= 0.02) {
        WaveConfig local = cfg;
        return solve_resolving(initial_guess(s_target, cfg), s_target, local);
    }
    ContinuationFamily fam = continue_family(s_target, s_target, cfg);
    if (!fam.reached_target)
        throw SolverError(SolverFailure::NonConvergence,
                          "NonConvergence: steepness " + std::to_string(s_target) +
                              " not reached; " + fam.stop_reason);
    const FamilyMember& m = fam.members.back();
    return {m.solution, m.info};
}

}  // namespace stokes
