#include "stokes/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace stokes::oracles {

ConformalJet naive_eval(const ConformalSolution& sol, StripPoint pt) {
    using ld = long double;
    const ld c = sol.c;
    const ld theta = static_cast<ld>(pt.q) / c;
    const ld sigma = static_cast<ld>(pt.p) / c;
    ld h = 0, hq = 0, hp = 0, hqq = 0, hqp = 0, hpp = 0, x = 0;
    for (int k = 1; k <= sol.modes(); ++k) {
        const ld a = sol.coeffs[static_cast<std::size_t>(k - 1)];
        const ld e = std::exp(k * sigma);
        const ld co = std::cos(k * theta);
        const ld si = std::sin(k * theta);
        const ld kk = static_cast<ld>(k) / c;
        h += a * e * co;
        x += a * e * si;
        hq += -a * e * kk * si;
        hp += a * e * kk * co;
        hqq += -a * e * kk * kk * co;
        hqp += -a * e * kk * kk * si;
        hpp += a * e * kk * kk * co;
    }
    ConformalJet j;
    j.h = static_cast<double>(sigma + h);
    j.x = static_cast<double>(theta + x);
    j.h_q = static_cast<double>(hq);
    j.h_p = static_cast<double>(1 / c + hp);
    j.h_qq = static_cast<double>(hqq);
    j.h_qp = static_cast<double>(hqp);
    j.h_pp = static_cast<double>(hpp);
    j.x_q = j.h_p;
    j.x_p = -j.h_q;
    return j;
}

double fd_derivative(const std::function<double(double)>& fn, double x, double step, bool richardson) {
    if (!(step > 0.0)) throw std::invalid_argument("fd_derivative: step must be positive");
    auto d4 = [&](double h) {
        return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h);
    };
    const double coarse = d4(step);
    if (!richardson) return coarse;
    const double fine = d4(0.5 * step);
    return fine + (fine - coarse) / 15.0;
}

double fd_derivative(const std::function<double(StripPoint)>& field, StripPoint pt, StripPoint direction,
                     double step, bool richardson) {
    const double len = std::hypot(direction.q, direction.p);
    if (!(len > 0.0)) throw std::invalid_argument("fd_derivative: zero direction");
    const double uq = direction.q / len, up = direction.p / len;
    return fd_derivative([&](double t) { return field({pt.q + t * uq, pt.p + t * up}); }, 0.0, step,
                         richardson);
}

double fd_laplacian(const std::function<double(StripPoint)>& field, StripPoint pt, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("fd_laplacian: step must be positive");
    auto axis = [&](double dq, double dp) {
        auto at = [&](int m) { return field({pt.q + m * dq, pt.p + m * dp}); };
        return (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) / (12 * step * step);
    };
    return axis(step, 0.0) + axis(0.0, step);
}

ConformalSolution linear_airy(double s0, double g, int modes) {
    ConformalSolution sol;
    sol.gravity = g;
    sol.c = std::sqrt(g);
    sol.E = 0.5 * g;
    sol.coeffs.assign(static_cast<std::size_t>(std::max(1, modes)), 0.0);
    sol.coeffs[0] = kPi * s0;
    return sol;
}

StripPoint locate(const ConformalSolution& sol, double x, double y, StripPoint start) {
    StripPoint pt = start;
    for (int it = 0; it < 50; ++it) {
        const ConformalJet j = naive_eval(sol, pt);
        const double rx = j.x - x, ry = j.h - y;
        // [x_q x_p; h_q h_p] [dq; dp] = [rx; ry]
        const double det = j.x_q * j.h_p - j.x_p * j.h_q;
        const double dq = (rx * j.h_p - j.x_p * ry) / det;
        const double dp = (j.x_q * ry - j.h_q * rx) / det;
        pt.q -= dq;
        pt.p = std::min(0.0, pt.p - dp);
        if (std::hypot(dq, dp) <= 1e-12 * (1.0 + std::hypot(pt.q, pt.p))) return pt;
    }
    throw std::runtime_error("locate: physical point inversion did not converge");
}

double physical_derivative(const ConformalSolution& sol, const std::function<double(StripPoint)>& field,
                           StripPoint base, double dx, double dy, double step) {
    const ConformalJet j0 = naive_eval(sol, base);
    const double len = std::hypot(dx, dy);
    const double ux = dx / len, uy = dy / len;
    auto at = [&](double t) {
        return field(locate(sol, j0.x + t * ux, j0.h + t * uy, base));
    };
    return fd_derivative(at, 0.0, step);
}

// ---------------------------------------------------------------------------
// Independent collocation solver for the steepness bracket. Unknowns are
// ordered (c, E, a_1..a_N); trig values come from a long double rotation
// recurrence rather than a lookup table.

namespace {

struct OracleWave {
    double c = 1.0, E = 0.5;
    std::vector<double> a;
};

struct Row {
    long double h = 0, wr = 1, wi = 0;  // h and W = 1 + sum k a_k e^{ik theta}
};

// cos and sin of k theta for k = 1..n by repeated rotation.
void phases(long double theta, int n, std::vector<long double>& co, std::vector<long double>& si) {
    co.resize(static_cast<std::size_t>(n));
    si.resize(static_cast<std::size_t>(n));
    const long double c1 = std::cos(theta), s1 = std::sin(theta);
    long double cr = 1, sr = 0;
    for (int k = 0; k < n; ++k) {
        const long double cn = cr * c1 - sr * s1;
        sr = sr * c1 + cr * s1;
        cr = cn;
        co[static_cast<std::size_t>(k)] = cr;
        si[static_cast<std::size_t>(k)] = sr;
    }
}

Row surface_row(const OracleWave& w, const std::vector<long double>& co, const std::vector<long double>& si) {
    Row r;
    for (std::size_t i = 0; i < w.a.size(); ++i) {
        const long double ak = w.a[i];
        const long double kak = static_cast<long double>(i + 1) * ak;
        r.h += ak * co[i];
        r.wr += kak * co[i];
        r.wi += kak * si[i];
    }
    return r;
}

Eigen::VectorXd oracle_residual(const OracleWave& w, double s) {
    const int n = static_cast<int>(w.a.size());
    Eigen::VectorXd r(n + 2);
    const long double c2 = static_cast<long double>(w.c) * w.c;
    std::vector<long double> co, si;
    for (int j = 0; j <= n; ++j) {
        phases(kPi * static_cast<long double>(j) / n, n, co, si);
        const Row row = surface_row(w, co, si);
        r[j] = static_cast<double>(2 * (w.E - row.h) * (row.wr * row.wr + row.wi * row.wi) / c2 - 1);
    }
    long double odd = 0;
    for (int k = 1; k <= n; k += 2) odd += w.a[static_cast<std::size_t>(k - 1)];
    r[n + 1] = static_cast<double>(odd / kPi) - s;
    return r;
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMatrix oracle_jacobian(const OracleWave& w) {
    const int n = static_cast<int>(w.a.size());
    RowMatrix jac = RowMatrix::Zero(n + 2, n + 2);
    const long double c = w.c, c2 = c * c;
    std::vector<long double> co, si;
    for (int j = 0; j <= n; ++j) {
        phases(kPi * static_cast<long double>(j) / n, n, co, si);
        const Row row = surface_row(w, co, si);
        const long double m = row.wr * row.wr + row.wi * row.wi;
        const long double head = w.E - row.h;
        jac(j, 0) = static_cast<double>(-4 * head * m / (c2 * c));
        jac(j, 1) = static_cast<double>(2 * m / c2);
        const long double gm = -2 * m / c2, hm = 4 * head / c2;
        double* out = &jac(j, 2);
        for (int k = 1; k <= n; ++k) {
            const std::size_t i = static_cast<std::size_t>(k - 1);
            out[i] = static_cast<double>(gm * co[i] + hm * k * (row.wr * co[i] + row.wi * si[i]));
        }
    }
    for (int k = 1; k <= n; k += 2) jac(n + 1, k + 1) = 1.0 / kPi;
    return jac;
}

double tail_of(const OracleWave& w) {
    double peak = 0.0;
    for (double v : w.a) peak = std::max(peak, std::abs(v));
    return peak > 0.0 ? std::abs(w.a.back()) / peak : 0.0;
}

enum class Outcome { Converged, Unresolved, Failed };

Outcome oracle_newton(OracleWave& w, double s, const BracketBudget& b) {
    const int n = static_cast<int>(w.a.size());
    Eigen::VectorXd r = oracle_residual(w, s);
    for (int it = 0; it < b.max_iter; ++it) {
        if (!r.allFinite()) return Outcome::Failed;
        if (r.lpNorm<Eigen::Infinity>() <= b.newton_tol) {
            if (!(w.c > 0.0 && w.E > 0.0 && w.a[0] > 0.0)) return Outcome::Failed;
            return tail_of(w) <= b.tail_tol ? Outcome::Converged : Outcome::Unresolved;
        }
        const Eigen::VectorXd dx = oracle_jacobian(w).partialPivLu().solve(r);
        if (!dx.allFinite()) return Outcome::Failed;
        // Newton from a continuation predictor converges in a handful of steps.
        if (it >= 5 && r.lpNorm<Eigen::Infinity>() > 1e-6) return Outcome::Failed;
        double lambda = 1.0;
        bool ok = false;
        for (int h = 0; h < 6 && !ok; ++h, lambda *= 0.5) {
            OracleWave t = w;
            t.c -= lambda * dx[0];
            t.E -= lambda * dx[1];
            for (int k = 0; k < n; ++k) t.a[static_cast<std::size_t>(k)] -= lambda * dx[k + 2];
            Eigen::VectorXd rt = oracle_residual(t, s);
            if (rt.allFinite() && rt.norm() < r.norm()) {
                w = std::move(t);
                r = std::move(rt);
                ok = true;
            }
        }
        if (!ok) return Outcome::Failed;
    }
    return Outcome::Failed;
}

// Newton at s with mode doubling. Unresolved means a converged truncated
// wave whose tail stayed above tolerance at the largest permitted N.
Outcome oracle_solve(OracleWave& w, double s, const BracketBudget& b) {
    std::size_t modes = w.a.size();
    for (;;) {
        OracleWave trial = w;
        trial.a.resize(modes, 0.0);
        const Outcome out = oracle_newton(trial, s, b);
        if (out == Outcome::Converged) w = std::move(trial);
        if (out != Outcome::Unresolved || 2 * static_cast<int>(modes) > b.max_modes) return out;
        modes *= 2;
    }
}

// Last two resolved waves on the branch; the pair supplies a secant predictor.
struct Branch {
    OracleWave prev, cur;
    double s_prev = 0.0, s = 0.0;

    OracleWave predict(double target) const {
        OracleWave w = cur;
        if (prev.a.empty() || s <= s_prev) return w;
        const double t = (target - s) / (s - s_prev);
        w.c += t * (cur.c - prev.c);
        w.E += t * (cur.E - prev.E);
        for (std::size_t k = 0; k < w.a.size(); ++k) {
            const double before = k < prev.a.size() ? prev.a[k] : 0.0;
            w.a[k] += t * (w.a[k] - before);
        }
        return w;
    }

    void accept(OracleWave w, double target) {
        prev = std::move(cur);
        s_prev = s;
        cur = std::move(w);
        s = target;
    }
};

struct Attempt {
    Outcome outcome = Outcome::Converged;
    double s = 0.0;  // steepness of the last failed attempt
};

// Steps of at most march_step toward target, halving down to min_step on failure.
Attempt reach(Branch& br, double target, double min_step, const BracketBudget& b) {
    double ds = b.march_step;
    Attempt last;
    while (br.s < target) {
        const double next = std::min(target, br.s + ds);
        OracleWave w = br.predict(next);
        const Outcome out = oracle_solve(w, next, b);
        if (out == Outcome::Converged) {
            br.accept(std::move(w), next);
            continue;
        }
        last = {out, next};
        ds *= 0.5;
        if (ds < min_step) return last;
    }
    return {Outcome::Converged, br.s};
}

}  // namespace

BracketBudget BracketBudget::doubled(const WaveConfig& primary) {
    BracketBudget b;
    b.max_modes = 2 * primary.max_modes;
    b.newton_tol = 0.5 * primary.newton_tol;
    b.tail_tol = 5e-9;
    return b;
}

LimitBracket limit_bracket(const BracketBudget& b) {
    LimitBracket out;
    const int start = std::min(b.start_modes, b.max_modes);
    out.modes_used = start;
    out.s_hi = b.s_high;
    Branch br;
    const double s0 = std::min(0.01, b.s_low);
    br.cur.a.assign(static_cast<std::size_t>(start), 0.0);
    br.cur.a[0] = kPi * s0;
    OracleWave first = br.cur;
    ++out.trials;
    if (oracle_solve(first, s0, b) != Outcome::Converged) return out;
    br.cur = std::move(first);
    br.s = s0;

    ++out.trials;
    const bool inside = reach(br, b.s_low, b.min_step, b).outcome == Outcome::Converged;
    double lo = br.s, hi = b.s_high;
    // Below s_low the budget is exhausted and nothing above br.s is excluded.
    while (inside && hi - lo > b.width) {
        const double mid = 0.5 * (lo + hi);
        ++out.trials;
        // Within one march step of the branch a single predictor-corrector attempt decides.
        const double floor = mid - br.s > b.march_step ? b.min_step : b.march_step;
        const Attempt at = reach(br, mid, floor, b);
        if (at.outcome != Outcome::Converged) hi = at.s;
        lo = br.s;
    }
    out.s_lo = lo;
    out.s_hi = hi;
    out.modes_used = static_cast<int>(br.cur.a.size());
    out.width_reached = hi - lo <= b.width;
    return out;
}

}  // namespace stokes::oracles
