#pragma once

// Persistence and the command-line front end: JSON solution and report files,
// CSV field tables, run manifests and the solve | sweep | verify | fields |
// limit subcommands.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "stokes/hodograph_fields.hpp"
#include "stokes/spectral_solver.hpp"
#include "stokes/verifier.hpp"
#include "stokes/wave_model.hpp"

namespace stokes::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "STOKESWAVE_OUTPUT_DIR";
inline constexpr const char* kFieldHeader = "q,p,x,y,u,v,P,f,Px,Py,excluded";
inline constexpr const char* kSummaryHeader = "s,c,E,K,N,newton_iters,crest_angle,max_Bernoulli_residual";

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInputError = 2, kSolverFailed = 3 };

/// Malformed or unreadable input files and arguments.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// WaveConfig plus the run parameters that only the front end needs.
struct RunConfig {
    WaveConfig wave;
    double steepness = 0.0;
    double sweep_from = 0.01;
    double sweep_to = 0.10;
};

nlohmann::json to_json(const WaveConfig& cfg);
nlohmann::json to_json(const RunConfig& cfg);
/// Unknown keys are rejected; missing keys keep their defaults.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// A solution as stored on disk, with the solver diagnostics when known.
struct SolutionFile {
    ConformalSolution solution;
    std::optional<SolveInfo> info;
};

nlohmann::json solution_to_json(const SolutionFile& file);
/// Throws InputError on schema mismatch, missing fields or inconsistent sizes.
SolutionFile solution_from_json(const nlohmann::json& j);
SolutionFile load_solution(const std::filesystem::path& path);
void save_solution(const std::filesystem::path& path, const SolutionFile& file);

nlohmann::json report_to_json(const VerificationReport& report);

/// One CSV line per sample in the stored order, 17 significant digits.
std::string fields_csv(const std::vector<FieldSample>& samples);
std::string summary_csv(const std::vector<FamilyMember>& members);
nlohmann::json summary_json(const std::vector<FamilyMember>& members);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& text);
/// Canonical text form used for every JSON artifact.
std::string dump(const nlohmann::json& j);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

class RunManifest {
public:
    RunManifest(std::string command, nlohmann::json config);
    void add_input(const std::filesystem::path& path);
    void add_output(const std::filesystem::path& path);
    void set(const std::string& key, nlohmann::json value);
    /// Stamps the finish time and writes manifest.json into `dir` last.
    std::filesystem::path write(const std::filesystem::path& dir);

private:
    nlohmann::json doc_;
    std::vector<std::filesystem::path> outputs_;
};

/// Output directory: explicit flag, then the environment override, then ".".
std::filesystem::path output_dir(const std::optional<std::string>& flag);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace stokes::io
