#include "stokes/cli_io.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "stokes/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace stokes::io {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_file(const fs::path& path) {
    const std::string text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

template <typename T>
void take(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError(std::string("config key '") + key + "' has the wrong type");
    }
}

template <typename T>
T need(const json& j, const char* key) {
    if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError(std::string("field '") + key + "' has the wrong type");
    }
}

json info_to_json(const SolveInfo& info) {
    return {{"newton_iters", info.newton_iters},
            {"residual_norm", info.residual_norm},
            {"midpoint_residual", info.midpoint_residual},
            {"tail_ratio", info.tail_ratio},
            {"crest_indicator", info.crest_indicator}};
}

SolveInfo info_from_json(const json& j) {
    SolveInfo info;
    info.newton_iters = need<int>(j, "newton_iters");
    info.residual_norm = need<double>(j, "residual_norm");
    info.midpoint_residual = need<double>(j, "midpoint_residual");
    info.tail_ratio = need<double>(j, "tail_ratio");
    info.crest_indicator = need<double>(j, "crest_indicator");
    return info;
}

json solver_error_json(const SolverError& e) {
    return {{"reason", to_string(e.kind())},
            {"message", e.what()},
            {"iterations", e.iterations()},
            {"residual", e.residual()}};
}

}  // namespace

json to_json(const WaveConfig& cfg) {
    json j = {{"gravity", cfg.gravity},
              {"surface_pressure", cfg.surface_pressure},
              {"mode_count", cfg.mode_count},
              {"newton_tol", cfg.newton_tol},
              {"newton_max_iter", cfg.newton_max_iter},
              {"grid_nq", cfg.grid_nq},
              {"grid_np", cfg.grid_np},
              {"grid_depth", nullptr},
              {"excision_radius", cfg.excision_radius},
              {"crest_indicator_threshold", cfg.crest_indicator_threshold},
              {"max_modes", cfg.max_modes},
              {"max_step", cfg.max_step},
              {"min_step", cfg.min_step}};
    if (cfg.grid_depth) j["grid_depth"] = *cfg.grid_depth;
    return j;
}

json to_json(const RunConfig& cfg) {
    json j = to_json(cfg.wave);
    j["steepness"] = cfg.steepness;
    j["sweep_from"] = cfg.sweep_from;
    j["sweep_to"] = cfg.sweep_to;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    static const char* known[] = {"gravity",   "surface_pressure", "mode_count",      "newton_tol",
                                  "newton_max_iter", "grid_nq",    "grid_np",         "grid_depth",
                                  "excision_radius", "crest_indicator_threshold", "max_modes",
                                  "max_step",  "min_step",         "steepness",       "sweep_from",
                                  "sweep_to"};
    for (const auto& item : j.items()) {
        if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known))
            throw InputError("unknown config key '" + item.key() + "'");
    }
    RunConfig cfg;
    WaveConfig& w = cfg.wave;
    take(j, "gravity", w.gravity);
    take(j, "surface_pressure", w.surface_pressure);
    take(j, "mode_count", w.mode_count);
    take(j, "newton_tol", w.newton_tol);
    take(j, "newton_max_iter", w.newton_max_iter);
    take(j, "grid_nq", w.grid_nq);
    take(j, "grid_np", w.grid_np);
    if (j.contains("grid_depth") && !j.at("grid_depth").is_null()) {
        double d = 0.0;
        take(j, "grid_depth", d);
        w.grid_depth = d;
    }
    take(j, "excision_radius", w.excision_radius);
    take(j, "crest_indicator_threshold", w.crest_indicator_threshold);
    take(j, "max_modes", w.max_modes);
    take(j, "max_step", w.max_step);
    take(j, "min_step", w.min_step);
    take(j, "steepness", cfg.steepness);
    take(j, "sweep_from", cfg.sweep_from);
    take(j, "sweep_to", cfg.sweep_to);
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    return run_config_from_json(parse_file(path));
}

json solution_to_json(const SolutionFile& file) {
    const ConformalSolution& sol = file.solution;
    json j = {{"schema", "stokeswave.solution"},
              {"schema_version", kSchemaVersion},
              {"gravity", sol.gravity},
              {"surface_pressure", sol.surface_pressure},
              {"c", sol.c},
              {"E", sol.E},
              {"modes", sol.modes()},
              {"steepness", steepness(sol)},
              {"coeffs", sol.coeffs}};
    if (file.info) j["diagnostics"] = info_to_json(*file.info);
    return j;
}

SolutionFile solution_from_json(const json& j) {
    if (!j.is_object()) throw InputError("solution must be a JSON object");
    if (need<std::string>(j, "schema") != "stokeswave.solution")
        throw InputError("not a stokeswave solution file");
    if (need<int>(j, "schema_version") != kSchemaVersion)
        throw InputError("unsupported solution schema version");
    SolutionFile file;
    ConformalSolution& sol = file.solution;
    sol.gravity = need<double>(j, "gravity");
    sol.surface_pressure = need<double>(j, "surface_pressure");
    sol.c = need<double>(j, "c");
    sol.E = need<double>(j, "E");
    sol.coeffs = need<std::vector<double>>(j, "coeffs");
    const int modes = need<int>(j, "modes");
    if (modes < 1 || static_cast<std::size_t>(modes) != sol.coeffs.size())
        throw InputError("coefficient count does not match 'modes'");
    if (!(sol.c > 0.0) || !(sol.gravity > 0.0) || !std::isfinite(sol.E) ||
        !std::isfinite(sol.surface_pressure))
        throw InputError("solution has non-physical c, E or gravity");
    for (double a : sol.coeffs)
        if (!std::isfinite(a)) throw InputError("solution coefficients must be finite");
    if (j.contains("diagnostics")) file.info = info_from_json(j.at("diagnostics"));
    return file;
}

SolutionFile load_solution(const fs::path& path) {
    return solution_from_json(parse_file(path));
}

void save_solution(const fs::path& path, const SolutionFile& file) {
    write_atomic(path, dump(solution_to_json(file)));
}

json report_to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const CheckResult& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"kind", to_string(c.kind)},
                          {"passed", c.passed},
                          {"degenerate", c.degenerate},
                          {"flag", c.flag},
                          {"worst_margin", c.worst_margin},
                          {"units", c.units},
                          {"worst_location", {c.worst_location.q, c.worst_location.p}},
                          {"samples_checked", c.samples_checked},
                          {"samples_excluded", c.samples_excluded},
                          {"tolerance", c.tolerance}});
    }
    return {{"schema", "stokeswave.report"},
            {"schema_version", kSchemaVersion},
            {"steepness", r.steepness},
            {"c", r.c},
            {"E", r.E},
            {"crest_indicator", r.crest_indicator},
            {"crest_angle_deg", r.crest_angle_deg},
            {"modes", r.modes},
            {"grid", {{"nq", r.grid_nq}, {"np", r.grid_np}, {"depth", r.grid_depth}}},
            {"exclusion", {{"active", r.exclusion_active}, {"radius", r.excision_radius}}},
            {"checks", checks},
            {"passed", r.passed}};
}

std::string fields_csv(const std::vector<FieldSample>& samples) {
    std::string out = std::string(kFieldHeader) + "\n";
    for (const FieldSample& s : samples) {
        for (double v : {s.q, s.p, s.x, s.y, s.u, s.v, s.P, s.f, s.P_x, s.P_y}) {
            out += g17(v);
            out += ',';
        }
        out += s.excluded ? "1\n" : "0\n";
    }
    return out;
}

std::string summary_csv(const std::vector<FamilyMember>& members) {
    std::string out = std::string(kSummaryHeader) + "\n";
    for (const FamilyMember& m : members) {
        out += g17(m.steepness) + "," + g17(m.solution.c) + "," + g17(m.solution.E) + "," +
               g17(m.info.crest_indicator) + "," + std::to_string(m.solution.modes()) + "," +
               std::to_string(m.info.newton_iters) + "," + g17(crest_angle(m.solution)) + "," +
               g17(m.info.residual_norm) + "\n";
    }
    return out;
}

json summary_json(const std::vector<FamilyMember>& members) {
    json rows = json::array();
    for (std::size_t i = 0; i < members.size(); ++i) {
        const FamilyMember& m = members[i];
        rows.push_back({{"s", m.steepness},
                        {"c", m.solution.c},
                        {"E", m.solution.E},
                        {"K", m.info.crest_indicator},
                        {"N", m.solution.modes()},
                        {"newton_iters", m.info.newton_iters},
                        {"crest_angle", crest_angle(m.solution)},
                        {"max_Bernoulli_residual", m.info.residual_norm}});
        rows.back()["profile_change"] =
            i == 0 ? json(nullptr) : json(profile_distance(m.solution, members[i - 1].solution));
    }
    return rows;
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

void write_atomic(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw InputError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string sha256_file(const fs::path& path) {
    return sha256_hex(read_text(path));
}

RunManifest::RunManifest(std::string command, json config) {
    doc_ = {{"tool", "stokeswave"},
            {"tool_version", kToolVersion},
            {"schema_version", kSchemaVersion},
            {"command", std::move(command)},
            {"config", std::move(config)},
            {"started_utc", utc_now()},
            {"inputs", json::array()},
            {"outputs", json::array()}};
}

void RunManifest::add_input(const fs::path& path) {
    doc_["inputs"].push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
}

void RunManifest::add_output(const fs::path& path) {
    outputs_.push_back(path);
}

void RunManifest::set(const std::string& key, json value) {
    doc_[key] = std::move(value);
}

fs::path RunManifest::write(const fs::path& dir) {
    for (const fs::path& p : outputs_)
        doc_["outputs"].push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}});
    doc_["finished_utc"] = utc_now();
    const fs::path path = dir / "manifest.json";
    write_atomic(path, dump(doc_));
    return path;
}

fs::path output_dir(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return ".";
}

// ---------------------------------------------------------------------------

namespace {

struct Options {
    std::string config_path;
    std::optional<double> steepness, gravity, tol, depth, from, to;
    std::optional<int> modes;
    std::string grid;
    std::optional<std::string> out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "JSON config; keys mirror WaveConfig");
    cmd->add_option("--modes", o.modes, "Fourier modes N");
    cmd->add_option("--gravity", o.gravity, "gravitational acceleration g");
    cmd->add_option("--tol", o.tol, "Newton residual tolerance");
    cmd->add_option("--grid", o.grid, "verification grid NQxNP");
    cmd->add_option("--depth", o.depth, "lower grid edge p_min (< 0)");
    cmd->add_option("--out", o.out, std::string("output directory (default $") + kOutputDirEnv + " or .)");
    cmd->add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig resolve(const Options& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.steepness) cfg.steepness = *o.steepness;
    if (o.modes) cfg.wave.mode_count = *o.modes;
    if (o.gravity) cfg.wave.gravity = *o.gravity;
    if (o.tol) cfg.wave.newton_tol = *o.tol;
    if (o.depth) cfg.wave.grid_depth = *o.depth;
    if (o.from) cfg.sweep_from = *o.from;
    if (o.to) cfg.sweep_to = *o.to;
    if (!o.grid.empty()) {
        static const std::regex spec(R"((\d+)[xX](\d+))");
        std::smatch m;
        if (!std::regex_match(o.grid, m, spec)) throw InputError("grid must look like NQxNP, got '" + o.grid + "'");
        cfg.wave.grid_nq = std::stoi(m[1]);
        cfg.wave.grid_np = std::stoi(m[2]);
    }
    cfg.wave.validate();
    return cfg;
}

int cmd_solve(const Options& o) {
    const RunConfig cfg = resolve(o);
    const fs::path dir = output_dir(o.out);
    RunManifest manifest("solve", to_json(cfg));
    if (!o.config_path.empty()) manifest.add_input(o.config_path);
    try {
        const SolveResult res = solve_steepness(cfg.steepness, cfg.wave);
        const fs::path path = dir / "solution.json";
        save_solution(path, {res.solution, res.info});
        manifest.add_output(path);
        manifest.set("status", "ok");
        manifest.write(dir);
        return kOk;
    } catch (const SolverError& e) {
        const fs::path path = dir / "diagnostics.json";
        write_atomic(path, dump(solver_error_json(e)));
        manifest.add_output(path);
        manifest.set("status", "solver_failure");
        manifest.set("failure", to_string(e.kind()));
        manifest.write(dir);
        std::cerr << "solver failure (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return kSolverFailed;
    }
}

void write_table(const fs::path& dir, const std::string& stem, const std::vector<FamilyMember>& members,
                 const std::string& format, RunManifest& manifest) {
    const fs::path path = dir / (stem + "." + format);
    write_atomic(path, format == "json" ? dump(summary_json(members)) : summary_csv(members));
    manifest.add_output(path);
}

int cmd_sweep(const Options& o) {
    const RunConfig cfg = resolve(o);
    const fs::path dir = output_dir(o.out);
    RunManifest manifest("sweep", to_json(cfg));
    if (!o.config_path.empty()) manifest.add_input(o.config_path);
    ContinuationFamily fam;
    try {
        fam = continue_family(cfg.sweep_from, cfg.sweep_to, cfg.wave);
    } catch (const SolverError& e) {
        const fs::path path = dir / "diagnostics.json";
        write_atomic(path, dump(solver_error_json(e)));
        manifest.add_output(path);
        manifest.set("status", "solver_failure");
        manifest.write(dir);
        std::cerr << "solver failure (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return kSolverFailed;
    }
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "member_%03zu.json", i);
        const fs::path path = dir / "family" / name;
        save_solution(path, {fam.members[i].solution, fam.members[i].info});
        manifest.add_output(path);
    }
    write_table(dir, "summary", fam.members, o.format, manifest);
    manifest.set("status", fam.reached_target ? "ok" : "partial");
    manifest.set("reached_target", fam.reached_target);
    manifest.set("stop_reason", fam.stop_reason);
    manifest.write(dir);
    return kOk;
}

int cmd_verify(const Options& o, const std::string& solution_path, bool dump_fields) {
    SolutionFile file = load_solution(solution_path);
    const RunConfig cfg = resolve(o);
    const fs::path dir = output_dir(o.out);
    RunManifest manifest("verify", to_json(cfg));
    manifest.add_input(solution_path);
    if (!o.config_path.empty()) manifest.add_input(o.config_path);
    const VerificationReport report = verify_all(file.solution, cfg.wave);
    const fs::path path = dir / "report.json";
    write_atomic(path, dump(report_to_json(report)));
    manifest.add_output(path);
    if (dump_fields) {
        const fs::path fpath = dir / "fields.csv";
        write_atomic(fpath, fields_csv(physical_grid(file.solution, cfg.wave).samples));
        manifest.add_output(fpath);
    }
    manifest.set("passed", report.passed);
    manifest.write(dir);
    for (const CheckResult& c : report.checks) {
        if (!c.passed) std::cerr << "FAIL " << c.name << " worst margin " << g17(c.worst_margin) << "\n";
    }
    return report.passed ? kOk : kVerifyFailed;
}

int cmd_fields(const Options& o, const std::string& solution_path, bool surface_only) {
    SolutionFile file = load_solution(solution_path);
    const RunConfig cfg = resolve(o);
    const fs::path dir = output_dir(o.out);
    RunManifest manifest("fields", to_json(cfg));
    manifest.add_input(solution_path);
    std::vector<FieldSample> samples;
    if (surface_only) {
        const CrestExclusion excl = crest_exclusion(file.solution, cfg.wave);
        const int nq = cfg.wave.grid_nq;
        for (int i = 0; i < nq; ++i) {
            const double q = file.solution.trough_q() * i / (nq - 1);
            samples.push_back(sample(file.solution, {q, 0.0}, excl));
        }
    } else {
        samples = physical_grid(file.solution, cfg.wave).samples;
    }
    fs::path path;
    if (o.format == "json") {
        json rows = json::array();
        for (const FieldSample& s : samples) {
            rows.push_back({{"q", s.q}, {"p", s.p}, {"x", s.x}, {"y", s.y}, {"u", s.u}, {"v", s.v},
                            {"P", s.P}, {"f", s.f}, {"Px", s.P_x}, {"Py", s.P_y},
                            {"excluded", s.excluded}});
        }
        path = dir / "fields.json";
        write_atomic(path, dump(rows));
    } else {
        path = dir / "fields.csv";
        write_atomic(path, fields_csv(samples));
    }
    manifest.add_output(path);
    manifest.write(dir);
    return kOk;
}

int cmd_limit(const Options& o) {
    const RunConfig cfg = resolve(o);
    const fs::path dir = output_dir(o.out);
    RunManifest manifest("limit", to_json(cfg));
    if (!o.config_path.empty()) manifest.add_input(o.config_path);
    LimitEstimate est;
    try {
        est = estimate_limit(cfg.wave);
    } catch (const SolverError& e) {
        const fs::path path = dir / "diagnostics.json";
        write_atomic(path, dump(solver_error_json(e)));
        manifest.add_output(path);
        manifest.set("status", "solver_failure");
        manifest.write(dir);
        std::cerr << "solver failure (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return kSolverFailed;
    }
    const FamilyMember& best = est.family.members.back();
    const fs::path sol_path = dir / "limit_solution.json";
    save_solution(sol_path, {best.solution, best.info});
    manifest.add_output(sol_path);
    const fs::path path = dir / "limit.json";
    write_atomic(path, dump({{"s_max", est.s_max},
                             {"K_at_max", est.K_at_max},
                             {"N_used", est.N_used},
                             {"crest_angle_deg", crest_angle(best.solution)},
                             {"stop_reason", est.family.stop_reason},
                             {"members", est.family.members.size()}}));
    manifest.add_output(path);
    write_table(dir, "summary", est.family.members, o.format, manifest);
    manifest.write(dir);
    std::cout << "s_max " << g17(est.s_max) << " K " << g17(est.K_at_max) << " N " << est.N_used << "\n";
    return kOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Steady Stokes waves on deep water: solve, continue, verify and export fields"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    Options o;
    std::string solution_path;
    bool dump_fields = false, surface_only = false;

    auto* solve = app.add_subcommand("solve", "solve one wave at a prescribed steepness");
    add_common(solve, o);
    solve->add_option("--steepness", o.steepness, "crest-to-trough height over wavelength");

    auto* sweep = app.add_subcommand("sweep", "continue a family of waves in steepness");
    add_common(sweep, o);
    sweep->add_option("--from", o.from, "first steepness");
    sweep->add_option("--to", o.to, "last steepness");

    auto* verify = app.add_subcommand("verify", "check sign and identity properties of a solution");
    add_common(verify, o);
    verify->add_option("solution", solution_path, "solution JSON")->required();
    verify->add_flag("--fields", dump_fields, "also write fields.csv");

    auto* fields = app.add_subcommand("fields", "export field samples on a grid");
    add_common(fields, o);
    fields->add_option("solution", solution_path, "solution JSON")->required();
    fields->add_flag("--surface", surface_only, "only the free surface p = 0");

    auto* limit = app.add_subcommand("limit", "push the family toward the extreme wave");
    add_common(limit, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*solve) return cmd_solve(o);
        if (*sweep) return cmd_sweep(o);
        if (*verify) return cmd_verify(o, solution_path, dump_fields);
        if (*fields) return cmd_fields(o, solution_path, surface_only);
        if (*limit) return cmd_limit(o);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const InvalidConfig& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace stokes::io
