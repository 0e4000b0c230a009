#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stokes/cli_io.hpp"
#include "stokes/errors.hpp"
#include "stokes/hodograph_fields.hpp"
#include "stokes/spectral_solver.hpp"
#include "stokes/verifier.hpp"

namespace py = pybind11;
using namespace stokes;

namespace {

WaveConfig make_config(int modes, int max_modes, double gravity, double tol) {
    WaveConfig cfg;
    cfg.mode_count = modes;
    cfg.max_modes = max_modes;
    cfg.gravity = gravity;
    cfg.newton_tol = tol;
    return cfg;
}

py::dict sample_dict(const FieldSample& s) {
    py::dict d;
    d["q"] = s.q, d["p"] = s.p, d["x"] = s.x, d["y"] = s.y;
    d["u"] = s.u, d["v"] = s.v, d["P"] = s.P, d["f"] = s.f;
    d["Px"] = s.P_x, d["Py"] = s.P_y, d["excluded"] = s.excluded;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stokes wave solver and pressure-field verifier";
    m.attr("__version__") = io::kToolVersion;

    py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<io::InputError>(m, "InputError", PyExc_ValueError);

    py::class_<ConformalSolution>(m, "Solution")
        .def_readonly("c", &ConformalSolution::c)
        .def_readonly("E", &ConformalSolution::E)
        .def_readonly("coeffs", &ConformalSolution::coeffs)
        .def_readonly("gravity", &ConformalSolution::gravity)
        .def_property_readonly("modes", &ConformalSolution::modes)
        .def_property_readonly("steepness", [](const ConformalSolution& s) { return steepness(s); })
        .def_property_readonly("crest_indicator", [](const ConformalSolution& s) { return crest_indicator(s); })
        .def("sample", [](const ConformalSolution& s, double q, double p) { return sample_dict(sample(s, {q, p})); },
             py::arg("q"), py::arg("p"))
        .def("crest_angle", [](const ConformalSolution& s) { return crest_angle(s); })
        .def("to_json", [](const ConformalSolution& s) { return io::dump(io::solution_to_json({s, std::nullopt})); })
        .def("save", [](const ConformalSolution& s, const std::string& path) { io::save_solution(path, {s, std::nullopt}); })
        .def_static("flat", &ConformalSolution::flat, py::arg("modes"), py::arg("gravity") = 1.0,
                    py::arg("surface_pressure") = 0.0);

    m.def("load", [](const std::string& path) { return io::load_solution(path).solution; }, py::arg("path"));

    m.def(
        "solve",
        [](double s, int modes, int max_modes, double gravity, double tol) {
            return solve_steepness(s, make_config(modes, max_modes, gravity, tol)).solution;
        },
        py::arg("steepness"), py::arg("modes") = 64, py::arg("max_modes") = 2048, py::arg("gravity") = 1.0,
        py::arg("tol") = 1e-12);

    m.def(
        "estimate_limit",
        [](int max_modes) {
            const LimitEstimate est = estimate_limit(make_config(64, max_modes, 1.0, 1e-12));
            py::dict d;
            d["s_max"] = est.s_max;
            d["K"] = est.K_at_max;
            d["modes"] = est.N_used;
            d["solution"] = est.family.members.back().solution;
            return d;
        },
        py::arg("max_modes") = 2048);

    m.def(
        "verify",
        [](const ConformalSolution& sol, int nq, int np) {
            WaveConfig cfg;
            cfg.grid_nq = nq;
            cfg.grid_np = np;
            return io::dump(io::report_to_json(verify_all(sol, cfg)));
        },
        py::arg("solution"), py::arg("nq") = 256, py::arg("np") = 128,
        "Verification report as a JSON string.");

    m.def(
        "surface",
        [](const ConformalSolution& sol, int samples) {
            const SurfaceProfile prof = surface(sol, samples);
            py::dict d;
            d["x"] = prof.x, d["eta"] = prof.eta, d["slope"] = prof.slope;
            return d;
        },
        py::arg("solution"), py::arg("samples") = 256);
}
