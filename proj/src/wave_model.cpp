#include "stokes/wave_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "stokes/errors.hpp"

namespace stokes {

const char* to_string(SolverFailure kind) {
    switch (kind) {
        case SolverFailure::NonConvergence: return "NonConvergence";
        case SolverFailure::SingularJacobian: return "SingularJacobian";
        case SolverFailure::TailNotResolved: return "TailNotResolved";
    }
    return "Unknown";
}

void WaveConfig::validate() const {
    auto fail = [](const std::string& msg) { throw InvalidConfig("invalid config: " + msg); };
    if (!(gravity > 0.0)) fail("gravity must be positive");
    if (!(newton_tol > 0.0)) fail("newton_tol must be positive");
    if (newton_max_iter < 1) fail("newton_max_iter must be >= 1");
    if (mode_count < 4) fail("mode_count must be >= 4");
    if (max_modes < mode_count) fail("max_modes must be >= mode_count");
    if (grid_nq < 2 || grid_np < 2) fail("grid must be at least 2x2");
    if (grid_depth && !(*grid_depth < 0.0)) fail("grid_depth must be negative");
    if (!(excision_radius >= 0.0)) fail("excision_radius must be nonnegative");
    if (!(crest_indicator_threshold > 0.0 && crest_indicator_threshold < 1.0))
        fail("crest_indicator_threshold must lie in (0, 1)");
    if (!(max_step > 0.0) || !(min_step > 0.0) || min_step > max_step)
        fail("continuation steps must satisfy 0 < min_step <= max_step");
}

ConformalSolution ConformalSolution::flat(int modes, double gravity, double surface_pressure) {
    ConformalSolution sol;
    sol.c = std::sqrt(gravity);
    sol.E = 0.5 * gravity;
    sol.coeffs.assign(static_cast<std::size_t>(modes), 0.0);
    sol.gravity = gravity;
    sol.surface_pressure = surface_pressure;
    return sol;
}

namespace {

// cos/sin of theta with the symmetry lines theta = 0, pi (mod 2 pi) snapped so
// that odd quantities vanish exactly there.
std::complex<double> unit_phase(double theta) {
    const double turns = theta / kPi;
    const double nearest = std::nearbyint(turns);
    if (std::abs(turns - nearest) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                         std::max(1.0, std::abs(turns))) {
        const bool odd = std::fmod(std::abs(nearest), 2.0) == 1.0;
        return {odd ? -1.0 : 1.0, 0.0};
    }
    return {std::cos(theta), std::sin(theta)};
}

}  // namespace

ConformalJet eval_conformal_jet(const ConformalSolution& sol, StripPoint pt) {
    if (pt.p > 0.0) throw InvalidConfig("conformal point lies above the surface (p > 0)");

    const double c = sol.c;
    const double theta = pt.q / c;
    const double sigma = pt.p / c;

    // z^k = e^{k sigma} e^{i k theta}, built by repeated multiplication.
    const std::complex<double> z = std::exp(sigma) * unit_phase(theta);
    std::complex<double> zk{1.0, 0.0};
    std::complex<double> F{}, G{}, H{};
    const int n = sol.modes();
    for (int k = 1; k <= n; ++k) {
        zk *= z;
        if (zk == std::complex<double>{}) break;
        const double a = sol.coeffs[static_cast<std::size_t>(k - 1)];
        const double ka = k * a;
        F += a * zk;
        G += ka * zk;
        H += (k * ka) * zk;
    }

    ConformalJet j;
    const double c2 = c * c;
    j.h = sigma + F.real();
    j.x = theta + F.imag();
    j.h_q = -G.imag() / c;
    j.h_p = (1.0 + G.real()) / c;
    j.h_qq = -H.real() / c2;
    j.h_qp = -H.imag() / c2;
    j.h_pp = H.real() / c2;
    j.x_q = j.h_p;
    j.x_p = -j.h_q;
    return j;
}

double steepness(std::span<const double> coeffs) {
    // h(0,0) - h(c pi, 0) = sum_k a_k (1 - (-1)^k) = 2 * sum over odd k.
    double odd = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); i += 2) odd += coeffs[i];
    return 2.0 * odd / (2.0 * kPi);
}

double steepness(const ConformalSolution& sol) { return steepness(sol.coeffs); }

double crest_indicator(const ConformalSolution& sol) {
    const ConformalJet j = eval_conformal_jet(sol, {0.0, 0.0});
    const double metric = j.metric();
    if (!(metric > std::numeric_limits<double>::min()) || !std::isfinite(metric)) return 0.0;
    return j.h_p / (metric * sol.c);
}

double tail_ratio(std::span<const double> coeffs) {
    double peak = 0.0;
    for (double a : coeffs) peak = std::max(peak, std::abs(a));
    if (peak == 0.0) return 0.0;
    return std::abs(coeffs.back()) / peak;
}

ConformalSolution resized(const ConformalSolution& sol, int modes) {
    ConformalSolution out = sol;
    out.coeffs.resize(static_cast<std::size_t>(modes), 0.0);
    return out;
}

}  // namespace stokes
