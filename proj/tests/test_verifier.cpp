#include <gtest/gtest.h>

#include <cmath>

#include "stokes/verifier.hpp"
#include "test_support.hpp"

using namespace stokes;

namespace {

WaveConfig small_grid() {
    WaveConfig cfg;
    cfg.grid_nq = 64;
    cfg.grid_np = 32;
    return cfg;
}

const CheckResult& named(const std::vector<CheckResult>& checks, const std::string& name) {
    for (const CheckResult& c : checks)
        if (c.name == name) return c;
    throw std::runtime_error("no check named " + name);
}

}  // namespace

TEST(Verifier, FlatWaveDegeneratePasses) {
    const ConformalSolution sol = ConformalSolution::flat(16);
    const VerificationReport rep = verify_all(sol, small_grid());
    EXPECT_TRUE(rep.passed);
    const CheckResult* px = rep.find("Px_interior_negative");
    ASSERT_NE(px, nullptr);
    EXPECT_TRUE(px->passed);
    EXPECT_TRUE(px->degenerate);
    EXPECT_EQ(px->flag, "zero-amplitude");
    EXPECT_EQ(px->worst_margin, 0.0);
    const CheckResult* v = rep.find("v_interior_positive");
    ASSERT_NE(v, nullptr);
    EXPECT_TRUE(v->degenerate);
    EXPECT_TRUE(rep.find("v_lines_zero")->passed);
    EXPECT_FALSE(rep.find("v_lines_zero")->degenerate);
    EXPECT_TRUE(rep.find("Py_negative")->passed);
    EXPECT_TRUE(rep.find("f_surface_slope_nonpositive")->passed);
    EXPECT_DOUBLE_EQ(rep.crest_angle_deg, 180.0);
}

TEST(Verifier, PxSignsAtFivePercent) {
    const ConformalSolution& sol = fixtures::wave(0.05);
    const WaveConfig cfg;
    const auto checks = verify_theorem_Px(sol, physical_grid(sol, cfg));
    ASSERT_EQ(checks.size(), 3u);
    for (const CheckResult& c : checks) EXPECT_TRUE(c.passed) << c.name << " " << c.worst_margin;
    const CheckResult& interior = named(checks, "Px_interior_negative");
    EXPECT_LT(interior.worst_margin, 0.0);
    EXPECT_GT(interior.samples_checked, 0);
    EXPECT_EQ(named(checks, "Px_crest_line_zero").tolerance, kLineTolerance * sol.gravity);
}

TEST(Verifier, PxSignsWithExclusion) {
    const ConformalSolution& sol = fixtures::wave(0.13, 512);
    WaveConfig cfg;
    cfg.crest_indicator_threshold = 0.99;
    const FieldGrid grid = physical_grid(sol, cfg);
    ASSERT_TRUE(grid.exclusion.active);
    for (const CheckResult& c : verify_theorem_Px(sol, grid)) {
        EXPECT_TRUE(c.passed) << c.name;
        if (c.name == "Px_interior_negative") {
            EXPECT_GT(c.samples_excluded, 0);
        }
    }
}

TEST(Verifier, PyNegativeIncludingSurfaceRow) {
    for (double s : {0.10, 0.13}) {
        const ConformalSolution& sol = fixtures::wave(s, 512);
        const CheckResult& neg = named(verify_theorem_Py(sol, physical_grid(sol, small_grid())), "Py_negative");
        EXPECT_TRUE(neg.passed) << "s=" << s;
        EXPECT_LT(neg.worst_margin, 0.0);
    }
}

TEST(Verifier, FarFieldPressureGradientDecaysWithDepth) {
    const ConformalSolution& sol = fixtures::wave(0.10);
    const CheckResult& far = named(verify_theorem_Py(sol, physical_grid(sol, small_grid())), "Py_far_field");
    EXPECT_TRUE(far.passed);
    EXPECT_LE(far.tolerance, far_field_tolerance(sol, kFarFieldDepth * sol.c));
    EXPECT_LT(far_field_tolerance(sol, -20.0 * sol.c), far_field_tolerance(sol, -10.0 * sol.c));
}

TEST(Verifier, FResults) {
    const ConformalSolution& sol = fixtures::wave(0.10);
    const auto checks = verify_f_results(sol, physical_grid(sol, WaveConfig{}));
    for (const CheckResult& c : checks) EXPECT_TRUE(c.passed) << c.name << " " << c.worst_margin;
    EXPECT_NO_THROW(named(checks, "f_harmonic"));
    EXPECT_NO_THROW(named(checks, "f_line_values"));
}

TEST(Verifier, VelocityResults) {
    const ConformalSolution& sol = fixtures::wave(0.10);
    for (const CheckResult& c : verify_velocity_results(sol, physical_grid(sol, WaveConfig{})))
        EXPECT_TRUE(c.passed) << c.name << " " << c.worst_margin;
}

TEST(Verifier, FullReportAtTenPercent) {
    const ConformalSolution& sol = fixtures::wave(0.10);
    const VerificationReport rep = verify_all(sol, WaveConfig{});
    for (const CheckResult& c : rep.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.worst_margin;
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.grid_nq, 256);
    EXPECT_EQ(rep.grid_np, 128);
    EXPECT_NEAR(rep.grid_depth, -2.0 * kPi * sol.c, 1e-12);
}

TEST(Verifier, CorruptedSolutionFails) {
    ConformalSolution sol = fixtures::wave(0.10);
    sol.coeffs[0] = -sol.coeffs[0];
    const VerificationReport rep = verify_all(sol, small_grid());
    EXPECT_FALSE(rep.find("bernoulli_collocation")->passed);
    EXPECT_FALSE(rep.passed);
}

TEST(Verifier, EmptySampleSetIsFlaggedNotPassed) {
    const ConformalSolution& sol = fixtures::wave(0.10);
    FieldGrid grid = physical_grid(sol, small_grid());
    for (FieldSample& s : grid.samples) s.excluded = true;
    const CheckResult& c = named(verify_theorem_Px(sol, grid), "Px_interior_negative");
    EXPECT_FALSE(c.passed);
    EXPECT_EQ(c.flag, "no-samples");
    EXPECT_EQ(c.samples_checked, 0);
}

TEST(Verifier, DeterministicReports) {
    const ConformalSolution& sol = fixtures::wave(0.05);
    const VerificationReport a = verify_all(sol, small_grid());
    const VerificationReport b = verify_all(sol, small_grid());
    ASSERT_EQ(a.checks.size(), b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        EXPECT_EQ(a.checks[i].worst_margin, b.checks[i].worst_margin);
        EXPECT_EQ(a.checks[i].worst_location.q, b.checks[i].worst_location.q);
    }
}

TEST(CrestAngle, FlatAndDecreasingAlongFamily) {
    EXPECT_DOUBLE_EQ(crest_angle(ConformalSolution::flat(8)), 180.0);
    WaveConfig cfg;
    cfg.max_modes = 512;
    const LimitEstimate best = estimate_limit(cfg);
    const double a05 = crest_angle(fixtures::wave(0.05));
    const double a09 = crest_angle(fixtures::wave(0.09));
    const double a12 = crest_angle(fixtures::wave(0.12, 512));
    const double amax = crest_angle(best.family.members.back().solution);
    EXPECT_GT(a05, a09);
    EXPECT_GT(a09, a12);
    EXPECT_GT(a12, amax);
    EXPECT_GT(amax, 120.0);
}

TEST(Verifier, NearExtremeSpeedMarginSmallButNegative) {
    WaveConfig cfg;
    cfg.max_modes = 1024;
    const LimitEstimate est = estimate_limit(cfg);
    const ConformalSolution& sol = est.family.members.back().solution;
    const auto checks = verify_velocity_results(sol, physical_grid(sol, small_grid()));
    const CheckResult& um = named(checks, "u_minus_c_negative");
    EXPECT_TRUE(um.passed);
    EXPECT_LT(um.worst_margin, 0.0);
    EXPECT_GT(um.worst_margin, -0.2 * sol.c);
}

TEST(SurfaceShape, SlopeAndMonotonicityAtTenPercent) {
    const auto checks = verify_surface_shape(fixtures::wave(0.10));
    EXPECT_TRUE(named(checks, "surface_slope_squared_below_one").passed);
    EXPECT_TRUE(named(checks, "surface_decreasing").passed);
}
