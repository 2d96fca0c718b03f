#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mhdsim/diagnostics.hpp"
#include "mhdsim/errors.hpp"
#include "mhdsim/io.hpp"
#include "mhdsim/iteration.hpp"
#include "mhdsim/run.hpp"

namespace py = pybind11;
using namespace mhdsim;

namespace {

InterfaceField interface_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw GridMismatch("expected a square 2d array");
    const int n = static_cast<int>(a.shape(0));
    InterfaceField g(n);
    // numpy axis 0 is x2 (rows), matching the row-major storage
    std::copy(a.data(), a.data() + g.size(), g.values().begin());
    return g;
}

py::array_t<double> interface_to_array(const InterfaceField& g) {
    const int n = g.grid_size();
    py::array_t<double> a({n, n});
    std::copy(g.values().begin(), g.values().end(), a.mutable_data());
    return a;
}

BulkField bulk_from_array(Side side,
                          py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 3 || a.shape(1) != a.shape(2))
        throw GridMismatch("expected an array of shape (m+1, n, n)");
    const int m = static_cast<int>(a.shape(0)) - 1;
    const int n = static_cast<int>(a.shape(1));
    BulkField v(side, n, m);
    std::copy(a.data(), a.data() + v.size(), v.values().begin());
    return v;
}

py::array_t<double> bulk_to_array(const BulkField& v) {
    py::array_t<double> a({v.levels() + 1, v.grid_size(), v.grid_size()});
    std::copy(v.values().begin(), v.values().end(), a.mutable_data());
    return a;
}

} // namespace

PYBIND11_MODULE(_mhdsim, mod) {
    mod.doc() = "plasma-vacuum interface simulator core";
    mod.attr("__version__") = "0.1.0";

    py::register_exception<GridMismatch>(mod, "GridMismatch");
    py::register_exception<GapViolation>(mod, "GapViolation");
    py::register_exception<CompatibilityError>(mod, "CompatibilityError");
    py::register_exception<StabilityError>(mod, "StabilityError");
    py::register_exception<NoContraction>(mod, "NoContraction");
    py::register_exception<InsufficientHistory>(mod, "InsufficientHistory");
    py::register_exception<ParseError>(mod, "ParseError");
    py::register_exception<ValidationError>(mod, "ValidationError");

    py::enum_<Side>(mod, "Side")
        .value("plasma", Side::plasma)
        .value("vacuum", Side::vacuum);

    py::class_<InterfaceField>(mod, "InterfaceField")
        .def(py::init<int, double>(), py::arg("n"), py::arg("fill") = 0.0)
        .def(py::init(&interface_from_array), py::arg("array"))
        .def_property_readonly("n", &InterfaceField::grid_size)
        .def("array", &interface_to_array)
        .def("__add__", [](const InterfaceField& a, const InterfaceField& b) { return a + b; })
        .def("__sub__", [](const InterfaceField& a, const InterfaceField& b) { return a - b; })
        .def("__mul__", [](const InterfaceField& a, double s) { return s * a; })
        .def("__rmul__", [](const InterfaceField& a, double s) { return s * a; });

    py::class_<BulkField>(mod, "BulkField")
        .def(py::init<Side, int, int, double>(), py::arg("side"), py::arg("n"), py::arg("m"),
             py::arg("fill") = 0.0)
        .def(py::init(&bulk_from_array), py::arg("side"), py::arg("array"))
        .def_property_readonly("side", &BulkField::side)
        .def_property_readonly("n", &BulkField::grid_size)
        .def_property_readonly("m", &BulkField::levels)
        .def("array", &bulk_to_array)
        .def("level", &BulkField::level)
        .def("set_level", &BulkField::set_level);

    py::class_<BulkVector>(mod, "BulkVector")
        .def(py::init<Side, int, int>(), py::arg("side"), py::arg("n"), py::arg("m"))
        .def("__getitem__",
             [](const BulkVector& v, int i) {
                 if (i < 0 || i > 2) throw py::index_error();
                 return v[i];
             })
        .def("__setitem__", [](BulkVector& v, int i, const BulkField& c) {
            if (i < 0 || i > 2) throw py::index_error();
            v[i] = c;
        });

    // pointwise spectral utilities
    mod.def("fourier_derivative", &spectral::fourier_derivative, py::arg("g"), py::arg("axis"),
            py::arg("order"));
    mod.def("sobolev_weight", &spectral::sobolev_weight, py::arg("g"), py::arg("sigma"));
    mod.def("hs_norm", &spectral::hs_norm, py::arg("g"), py::arg("sigma"));
    mod.def("mean", &spectral::mean);
    mod.def("mean_project", &spectral::mean_project);
    mod.def("max_abs", &spectral::max_abs);
    mod.def("multiply",
            [](const InterfaceField& a, const InterfaceField& b) { return spectral::multiply(a, b); });
    mod.def("bulk_hs_proxy", &bulk_hs_proxy, py::arg("v"), py::arg("sigma"));
    mod.def("bulk_max", py::overload_cast<const BulkField&>(&ops::bulk_max));
    mod.def("trace_on_interface", &ops::trace_on_interface);
    mod.def("wall_trace", &ops::wall_trace);
    mod.def("wall_mean_integral", &ops::wall_mean_integral);

    py::class_<CoordinateMap>(mod, "CoordinateMap")
        .def_readonly("side", &CoordinateMap::side)
        .def_readonly("n", &CoordinateMap::n)
        .def_readonly("m", &CoordinateMap::m)
        .def_readonly("x3", &CoordinateMap::x3);

    py::class_<MapPair>(mod, "MapPair")
        .def_readonly("minus", &MapPair::minus)
        .def_readonly("plus", &MapPair::plus);

    mod.def("build_maps", &build_maps, py::arg("f"), py::arg("fstar"), py::arg("c0"),
            py::arg("m"));
    mod.def("gradient", &ops::gradient, py::arg("v"), py::arg("map"));
    mod.def("divergence", &ops::divergence, py::arg("v"), py::arg("map"));
    mod.def("curl", &ops::curl, py::arg("v"), py::arg("map"));
    mod.def("normal_component", &ops::normal_component, py::arg("v"), py::arg("map"));

    py::class_<SurfaceCurrent>(mod, "SurfaceCurrent")
        .def_static("constant", &SurfaceCurrent::constant, py::arg("j1"), py::arg("j2"));

    py::class_<PlasmaVacuumState>(mod, "State")
        .def(py::init<>())
        .def_readwrite("f", &PlasmaVacuumState::f)
        .def_readwrite("theta", &PlasmaVacuumState::theta)
        .def_readwrite("omega_star", &PlasmaVacuumState::omega_star)
        .def_readwrite("j_star", &PlasmaVacuumState::j_star)
        .def_readwrite("beta", &PlasmaVacuumState::beta)
        .def_readwrite("gamma", &PlasmaVacuumState::gamma)
        .def_readwrite("time", &PlasmaVacuumState::time)
        .def_readwrite("c0", &PlasmaVacuumState::c0)
        .def("validate", &PlasmaVacuumState::validate, py::arg("tol") = 1e-7);

    py::class_<InitParams>(mod, "InitParams")
        .def(py::init<>())
        .def_readwrite("c0", &InitParams::c0)
        .def_readwrite("c1", &InitParams::c1)
        .def_readwrite("m", &InitParams::m)
        .def_readwrite("tol", &InitParams::tol);

    mod.def("init_state", &init_state, py::arg("f0"), py::arg("u0"), py::arg("h0"),
            py::arg("current"), py::arg("params"));

    py::class_<RecoveredFields>(mod, "RecoveredFields")
        .def_readonly("u", &RecoveredFields::u)
        .def_readonly("h", &RecoveredFields::h)
        .def_readonly("hhat", &RecoveredFields::hhat)
        .def_readonly("p", &RecoveredFields::p);

    mod.def("recover_all", &recover_all, py::arg("state"), py::arg("maps"), py::arg("current"),
            py::arg("tol") = 1e-10);
    mod.def("stability_lambda",
            py::overload_cast<const InterfaceField&, const InterfaceField&, const InterfaceField&,
                              const InterfaceField&>(&stability_lambda),
            py::arg("h1"), py::arg("h2"), py::arg("hh1"), py::arg("hh2"));

    py::class_<DynamicsContext>(mod, "DynamicsContext")
        .def(py::init([](const SurfaceCurrent& current, const InterfaceField& fstar, double c0,
                         double c1, int m) {
                 DynamicsContext ctx;
                 ctx.current = current;
                 ctx.fstar = fstar;
                 ctx.c0 = c0;
                 ctx.c1 = c1;
                 ctx.m = m;
                 return ctx;
             }),
             py::arg("current"), py::arg("fstar"), py::arg("c0") = 0.05, py::arg("c1") = 0.01,
             py::arg("m") = 16)
        .def_readwrite("c0", &DynamicsContext::c0)
        .def_readwrite("c1", &DynamicsContext::c1)
        .def_readwrite("m", &DynamicsContext::m)
        .def_readwrite("monitor", &DynamicsContext::monitor);

    mod.def(
        "rk4_step",
        [](const PlasmaVacuumState& s, double dt, const DynamicsContext& ctx) {
            return rk4_step(s, dt, ctx);
        },
        py::arg("state"), py::arg("dt"), py::arg("ctx"));

    py::class_<CoefficientFreeze>(mod, "CoefficientFreeze")
        .def_readonly("u1", &CoefficientFreeze::u1)
        .def_readonly("u2", &CoefficientFreeze::u2)
        .def_readonly("h1", &CoefficientFreeze::h1)
        .def_readonly("h2", &CoefficientFreeze::h2)
        .def_readonly("hh1", &CoefficientFreeze::hh1)
        .def_readonly("hh2", &CoefficientFreeze::hh2)
        .def_readonly("g", &CoefficientFreeze::g)
        .def("lambda_min", &CoefficientFreeze::lambda_min);

    mod.def("freeze_coefficients", &freeze_coefficients, py::arg("rec"), py::arg("maps"),
            py::arg("tol") = 1e-10);
    mod.def("linearized_rhs", &linearized_rhs, py::arg("fbar"), py::arg("thetabar"),
            py::arg("frozen"), py::arg("c1") = -1.0);
    mod.def("energy_Es", &energy_Es, py::arg("fbar"), py::arg("dtfbar"), py::arg("frozen"),
            py::arg("s"));
    mod.def("energy_calEs", &energy_calEs, py::arg("fbar"), py::arg("dtfbar"), py::arg("s"));

    py::class_<DiagnosticsRecord>(mod, "DiagnosticsRecord")
        .def_readonly("t", &DiagnosticsRecord::t)
        .def_readonly("lambda_min", &DiagnosticsRecord::lambda_min)
        .def_readonly("e_s", &DiagnosticsRecord::e_s)
        .def_readonly("cal_e_s", &DiagnosticsRecord::cal_e_s)
        .def_readonly("mean_f_drift", &DiagnosticsRecord::mean_f_drift)
        .def_readonly("mean_theta", &DiagnosticsRecord::mean_theta)
        .def_readonly("hn_residual", &DiagnosticsRecord::hn_residual)
        .def_readonly("hhatn_residual", &DiagnosticsRecord::hhatn_residual)
        .def_readonly("pressure_balance_residual",
                      &DiagnosticsRecord::pressure_balance_residual)
        .def_readonly("kinematic_residual", &DiagnosticsRecord::kinematic_residual)
        .def_readonly("div_omega", &DiagnosticsRecord::div_omega)
        .def_readonly("div_j", &DiagnosticsRecord::div_j);

    mod.def("make_record", &make_record, py::arg("state"), py::arg("rec"), py::arg("maps"),
            py::arg("s"), py::arg("f_mean0"), py::arg("fstar"));
    mod.def("record_json", &record_json);

    py::class_<InterfaceResiduals>(mod, "InterfaceResiduals")
        .def_readonly("pressure_balance", &InterfaceResiduals::pressure_balance)
        .def_readonly("h_normal", &InterfaceResiduals::h_normal)
        .def_readonly("hhat_normal", &InterfaceResiduals::hhat_normal)
        .def_readonly("kinematic", &InterfaceResiduals::kinematic);

    mod.def("interface_residuals", &interface_residuals, py::arg("state"), py::arg("rec"),
            py::arg("maps"));

    py::class_<IterationConfig>(mod, "IterationConfig")
        .def(py::init<>())
        .def_readwrite("M1", &IterationConfig::M1)
        .def_readwrite("M2", &IterationConfig::M2)
        .def_readwrite("delta0", &IterationConfig::delta0)
        .def_readwrite("T", &IterationConfig::T)
        .def_readwrite("samples", &IterationConfig::samples)
        .def_readwrite("max_iters", &IterationConfig::max_iters)
        .def_readwrite("contraction_tol", &IterationConfig::contraction_tol)
        .def_readwrite("s", &IterationConfig::s)
        .def_readwrite("fstar", &IterationConfig::fstar);

    py::class_<TrajectoryCandidate>(mod, "TrajectoryCandidate")
        .def_readonly("states", &TrajectoryCandidate::states)
        .def_readonly("dt", &TrajectoryCandidate::dt);

    py::class_<MembershipReport>(mod, "MembershipReport")
        .def_readonly("mean_theta_ok", &MembershipReport::mean_theta_ok)
        .def_readonly("drift_ok", &MembershipReport::drift_ok)
        .def_readonly("ceiling_ok", &MembershipReport::ceiling_ok)
        .def_readonly("max_mean_theta", &MembershipReport::max_mean_theta)
        .def_readonly("max_drift", &MembershipReport::max_drift)
        .def_readonly("measured_m1", &MembershipReport::measured_m1)
        .def_readonly("measured_m2", &MembershipReport::measured_m2)
        .def("passed", &MembershipReport::pass);

    py::class_<ContractionReport>(mod, "ContractionReport")
        .def_readonly("distances", &ContractionReport::distances)
        .def_readonly("ratios", &ContractionReport::ratios)
        .def_readonly("converged", &ContractionReport::converged)
        .def_readonly("iterations", &ContractionReport::iterations)
        .def_readonly("T", &ContractionReport::T);

    mod.def("constant_candidate", &constant_candidate, py::arg("init"), py::arg("cfg"));
    mod.def("membership_check", &membership_check, py::arg("candidate"), py::arg("cfg"));
    mod.def("iterate_once", &iterate_once, py::arg("background"), py::arg("cfg"),
            py::arg("ctx"));
    mod.def("iterate_distance", &iterate_distance, py::arg("a"), py::arg("b"), py::arg("s"));
    mod.def("picard_solve", &picard_solve, py::arg("init"), py::arg("cfg"), py::arg("ctx"));

    mod.def("write_snapshot", &write_snapshot, py::arg("path"), py::arg("state"));
    mod.def("read_snapshot", &read_snapshot, py::arg("path"));

    py::class_<RunConfig>(mod, "RunConfig")
        .def_readwrite("output_dir", &RunConfig::output_dir)
        .def_readwrite("t_end", &RunConfig::t_end)
        .def_readwrite("dt", &RunConfig::dt)
        .def_readwrite("max_steps", &RunConfig::max_steps);

    mod.def("parse_config", &parse_config, py::arg("text"));
    mod.def(
        "run", [](const RunConfig& cfg) { return run(cfg); }, py::arg("cfg"),
        "executes the configured mode and returns the process exit code");

    py::dict codes;
    codes["ok"] = exit_code::ok;
    codes["stability"] = exit_code::stability;
    codes["gap"] = exit_code::gap;
    codes["no_contraction"] = exit_code::no_contraction;
    codes["solver"] = exit_code::solver;
    codes["config"] = exit_code::config;
    mod.attr("exit_codes") = codes;
}
