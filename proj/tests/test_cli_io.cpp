#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "stokes/cli_io.hpp"
#include "test_support.hpp"

using namespace stokes;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("stokeswave_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "stokeswave");
        std::vector<char*> argv;
        for (std::string& a : args) argv.push_back(a.data());
        return io::run_cli(static_cast<int>(argv.size()), argv.data());
    }

    fs::path path(const std::string& name) const { return dir_ / name; }
    std::string out() const { return dir_.string(); }

    static std::string read(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static std::vector<std::string> lines(const std::string& text) {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) out.push_back(line);
        return out;
    }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
    }

    fs::path dir_;
};

std::vector<double> split(const std::string& line) {
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::strtod(cell.c_str(), nullptr));
    return v;
}

}  // namespace

TEST_F(CliTest, SolveFlatWave) {
    ASSERT_EQ(run({"solve", "--steepness", "0", "--out", out()}), io::kOk);
    const io::SolutionFile f = io::load_solution(path("solution.json"));
    EXPECT_EQ(f.solution.c, 1.0);
    for (double a : f.solution.coeffs) EXPECT_EQ(a, 0.0);
    EXPECT_TRUE(fs::exists(path("manifest.json")));
}

TEST_F(CliTest, SolveReloadReproducesFieldsBitwise) {
    ASSERT_EQ(run({"solve", "--steepness", "0.10", "--modes", "256", "--out", out()}), io::kOk);
    const io::SolutionFile f = io::load_solution(path("solution.json"));
    ASSERT_TRUE(f.info.has_value());
    EXPECT_LE(f.info->residual_norm, 1e-12);
    WaveConfig cfg;
    cfg.mode_count = 256;
    const ConformalSolution direct = solve_steepness(0.10, cfg).solution;
    cfg.grid_nq = 32;
    cfg.grid_np = 16;
    const FieldGrid a = physical_grid(direct, cfg);
    const FieldGrid b = physical_grid(f.solution, cfg);
    EXPECT_EQ(io::fields_csv(a.samples), io::fields_csv(b.samples));
}

TEST_F(CliTest, SaveLoadSaveIsByteIdentical) {
    const ConformalSolution& sol = fixtures::wave(0.10);
    io::SolutionFile f{sol, SolveInfo{4, 3e-13, 2e-9, 1e-10, 0.57}};
    io::save_solution(path("a.json"), f);
    io::save_solution(path("b.json"), io::load_solution(path("a.json")));
    EXPECT_EQ(read(path("a.json")), read(path("b.json")));
    const io::SolutionFile back = io::load_solution(path("b.json"));
    EXPECT_EQ(back.solution.coeffs, sol.coeffs);
    EXPECT_EQ(back.solution.c, sol.c);
}

TEST_F(CliTest, BeyondLimitExitsWithSolverFailure) {
    write("cfg.json", R"({"mode_count": 64, "max_modes": 256})");
    EXPECT_EQ(run({"solve", "--config", path("cfg.json").string(), "--steepness", "0.20", "--out", out()}),
              io::kSolverFailed);
    const json diag = json::parse(read(path("diagnostics.json")));
    EXPECT_EQ(diag["reason"], "NonConvergence");
    const json manifest = json::parse(read(path("manifest.json")));
    EXPECT_EQ(manifest["status"], "solver_failure");
}

TEST_F(CliTest, VerifyFlatAndTenPercent) {
    ASSERT_EQ(run({"solve", "--steepness", "0", "--out", out()}), io::kOk);
    EXPECT_EQ(run({"verify", path("solution.json").string(), "--grid", "32x16", "--out", out()}), io::kOk);
    const json flat = json::parse(read(path("report.json")));
    EXPECT_TRUE(flat["passed"].get<bool>());
    bool flagged = false;
    for (const json& c : flat["checks"]) flagged |= c["flag"] == "zero-amplitude";
    EXPECT_TRUE(flagged);

    ASSERT_EQ(run({"solve", "--steepness", "0.10", "--modes", "256", "--out", out()}), io::kOk);
    EXPECT_EQ(run({"verify", path("solution.json").string(), "--out", out()}), io::kOk);
}

TEST_F(CliTest, VerifyFailureExitCode) {
    ConformalSolution sol = fixtures::wave(0.10);
    sol.coeffs[0] = -sol.coeffs[0];
    io::save_solution(path("bad.json"), {sol, std::nullopt});
    EXPECT_EQ(run({"verify", path("bad.json").string(), "--grid", "32x16", "--out", out()}), io::kVerifyFailed);
}

TEST_F(CliTest, TruncatedCoefficientsAreInputErrors) {
    json j = io::solution_to_json({fixtures::wave(0.05), std::nullopt});
    j["coeffs"].erase(j["coeffs"].size() - 1);
    write("trunc.json", j.dump());
    EXPECT_EQ(run({"verify", path("trunc.json").string(), "--out", out()}), io::kInputError);
    write("garbage.json", "{\"schema\": \"stokeswave.solution\", \"coeffs\": [1");
    EXPECT_EQ(run({"verify", path("garbage.json").string(), "--out", out()}), io::kInputError);
    EXPECT_EQ(run({"verify", path("missing.json").string(), "--out", out()}), io::kInputError);
}

TEST_F(CliTest, FieldsFlatFourByFour) {
    ASSERT_EQ(run({"solve", "--steepness", "0", "--out", out()}), io::kOk);
    ASSERT_EQ(run({"fields", path("solution.json").string(), "--grid", "4x4", "--out", out()}), io::kOk);
    const auto rows = lines(read(path("fields.csv")));
    ASSERT_EQ(rows.size(), 17u);
    EXPECT_EQ(rows[0], "q,p,x,y,u,v,P,f,Px,Py,excluded");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto v = split(rows[i]);
        ASSERT_EQ(v.size(), 11u);
        EXPECT_NEAR(v[6], -v[3], 1e-14);
        EXPECT_EQ(v[10], 0.0);
    }
}

TEST_F(CliTest, FieldsSurfaceExportReproducesProfile) {
    ASSERT_EQ(run({"solve", "--steepness", "0.10", "--modes", "256", "--out", out()}), io::kOk);
    ASSERT_EQ(run({"fields", path("solution.json").string(), "--surface", "--grid", "33x2", "--out", out()}),
              io::kOk);
    const auto rows = lines(read(path("fields.csv")));
    ASSERT_EQ(rows.size(), 34u);
    const ConformalSolution sol = io::load_solution(path("solution.json")).solution;
    const SurfaceProfile prof = surface(sol, 32);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto v = split(rows[i]);
        EXPECT_EQ(v[1], 0.0);
        EXPECT_NEAR(v[3], prof.eta[i - 1], 1e-15);
        // The surface is a streamline: its slope is v / (u - c).
        EXPECT_NEAR(v[5] / (v[4] - sol.c), prof.slope[i - 1], 1e-12);
    }
}

TEST_F(CliTest, FieldsFlagExcludedRows) {
    write("cfg.json", R"({"crest_indicator_threshold": 0.99, "mode_count": 512})");
    ASSERT_EQ(run({"solve", "--config", path("cfg.json").string(), "--steepness", "0.13", "--out", out()}), io::kOk);
    ASSERT_EQ(run({"fields", path("solution.json").string(), "--config", path("cfg.json").string(), "--grid",
                   "64x32", "--out", out()}),
              io::kOk);
    const auto rows = lines(read(path("fields.csv")));
    int excluded = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto v = split(rows[i]);
        if (v[10] == 1.0) {
            ++excluded;
            EXPECT_LT(std::hypot(v[0], v[1]), 0.1);
        }
    }
    EXPECT_GT(excluded, 0);
}

TEST_F(CliTest, InvalidGridSpec) {
    ASSERT_EQ(run({"solve", "--steepness", "0", "--out", out()}), io::kOk);
    EXPECT_EQ(run({"fields", path("solution.json").string(), "--grid", "4by4", "--out", out()}), io::kInputError);
    EXPECT_EQ(run({"fields", path("solution.json").string(), "--grid", "1x4", "--out", out()}), io::kInputError);
    EXPECT_EQ(run({"fields", path("solution.json").string(), "--depth", "1", "--out", out()}), io::kInputError);
}

TEST_F(CliTest, UnknownConfigKeyIsRejected) {
    write("cfg.json", R"({"modes": 64})");
    EXPECT_EQ(run({"solve", "--config", path("cfg.json").string(), "--out", out()}), io::kInputError);
    EXPECT_EQ(run({"solve", "--bogus"}), io::kInputError);
}

TEST_F(CliTest, SweepSummaryTable) {
    ASSERT_EQ(run({"sweep", "--from", "0.01", "--to", "0.10", "--out", out()}), io::kOk);
    const auto rows = lines(read(path("summary.csv")));
    EXPECT_EQ(rows[0], "s,c,E,K,N,newton_iters,crest_angle,max_Bernoulli_residual");
    ASSERT_GE(rows.size(), 11u);
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_LT(split(rows[i])[3], split(rows[i - 1])[3]);
    EXPECT_TRUE(fs::exists(path("family/member_000.json")));
}

TEST_F(CliTest, SingleTargetSweep) {
    ASSERT_EQ(run({"sweep", "--from", "0.05", "--to", "0.05", "--format", "json", "--out", out()}), io::kOk);
    const json rows = json::parse(read(path("summary.json")));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_DOUBLE_EQ(rows[0]["s"].get<double>(), 0.05);
    EXPECT_TRUE(rows[0]["profile_change"].is_null());
}

TEST_F(CliTest, SweepIntoTheLimit) {
    write("cfg.json", R"({"max_modes": 256})");
    ASSERT_EQ(run({"sweep", "--config", path("cfg.json").string(), "--from", "0.05", "--to", "0.20", "--out", out()}),
              io::kOk);
    const auto rows = lines(read(path("summary.csv")));
    ASSERT_GE(rows.size(), 3u);
    const auto last = split(rows.back());
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const auto v = split(rows[i]);
        EXPECT_GT(v[3], last[3]);
        EXPECT_GT(v[6], last[6]);
    }
    const json manifest = json::parse(read(path("manifest.json")));
    EXPECT_EQ(manifest["status"], "partial");
}

TEST_F(CliTest, ManifestListsEveryOutput) {
    ASSERT_EQ(run({"solve", "--steepness", "0.05", "--out", out()}), io::kOk);
    ASSERT_EQ(run({"verify", path("solution.json").string(), "--grid", "32x16", "--fields", "--out", out()}),
              io::kOk);
    const json m = json::parse(read(path("manifest.json")));
    EXPECT_EQ(m["command"], "verify");
    std::vector<std::string> listed;
    for (const json& o : m["outputs"]) listed.push_back(o["path"]);
    EXPECT_EQ(listed, (std::vector<std::string>{"report.json", "fields.csv"}));
    EXPECT_EQ(m["outputs"][0]["sha256"], io::sha256_file(path("report.json")));
    EXPECT_EQ(m["inputs"][0]["sha256"], io::sha256_file(path("solution.json")));
    EXPECT_TRUE(m.contains("finished_utc"));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
    ::setenv(io::kOutputDirEnv, out().c_str(), 1);
    const int code = run({"solve", "--steepness", "0"});
    ::unsetenv(io::kOutputDirEnv);
    ASSERT_EQ(code, io::kOk);
    EXPECT_TRUE(fs::exists(path("solution.json")));
}

TEST(Io, Sha256KnownVector) {
    EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Io, ConfigRoundTrip) {
    io::RunConfig cfg;
    cfg.wave.mode_count = 128;
    cfg.wave.grid_depth = -3.0;
    cfg.steepness = 0.07;
    const io::RunConfig back = io::run_config_from_json(io::to_json(cfg));
    EXPECT_EQ(back.wave.mode_count, 128);
    EXPECT_EQ(back.wave.grid_depth, -3.0);
    EXPECT_EQ(back.steepness, 0.07);
    EXPECT_EQ(io::to_json(back), io::to_json(cfg));
}

TEST(Io, FieldCsvUsesFullPrecision) {
    FieldSample s;
    s.q = 0.1;
    s.P = 1.0 / 3.0;
    const auto text = io::fields_csv({s});
    EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
    EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
}

TEST_F(CliTest, LimitWithSmallBudget) {
    write("cfg.json", R"({"max_modes": 128})");
    ASSERT_EQ(run({"limit", "--config", path("cfg.json").string(), "--out", out()}), io::kOk);
    const json lim = json::parse(read(path("limit.json")));
    EXPECT_LE(lim["N_used"].get<int>(), 128);
    EXPECT_GT(lim["s_max"].get<double>(), 0.10);
    EXPECT_LT(lim["s_max"].get<double>(), 0.14);
    const io::SolutionFile f = io::load_solution(path("limit_solution.json"));
    EXPECT_NEAR(steepness(f.solution), lim["s_max"].get<double>(), 1e-12);
}
