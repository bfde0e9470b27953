// Python bindings for the main operations.
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "duffing/energy.hpp"
#include "duffing/errors.hpp"
#include "duffing/flow.hpp"
#include "duffing/model_config.hpp"
#include "duffing/orbits.hpp"
#include "duffing/poincare.hpp"
#include "duffing/twist.hpp"

namespace py = pybind11;
using namespace duffing;

namespace {

using Pair = std::pair<double, double>;
using MatRows = std::array<std::array<double, 2>, 2>;

MatRows mat_rows(const Mat2& m) {
    return {{{m.a11, m.a12}, {m.a21, m.a22}}};
}

}  // namespace

PYBIND11_MODULE(duffing_lab, mod) {
    mod.doc() = "Impulsive Duffing oscillator laboratory: Poincare maps, twist annuli, "
                "periodic orbits";

    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(mod, "NumericalError", PyExc_RuntimeError);

    py::class_<GField>(mod, "GField")
        .def("eval", [](const GField& g, double x) { return g.eval(x); })
        .def("deriv", [](const GField& g, double x) { return g.deriv(x); })
        .def("antideriv", [](const GField& g, double x) { return g.antideriv(x); })
        .def_readonly("K", &GField::K)
        .def_readonly("A0", &GField::A0)
        .def_readonly("M0", &GField::M0);

    py::class_<Forcing>(mod, "Forcing")
        .def(py::init([](double constant, std::vector<double> cos, std::vector<double> sin) {
                 Forcing f;
                 f.constant = constant;
                 f.cos_coeffs = std::move(cos);
                 f.sin_coeffs = std::move(sin);
                 return f;
             }),
             py::arg("constant") = 0.0, py::arg("cos") = std::vector<double>{},
             py::arg("sin") = std::vector<double>{})
        .def_readonly("constant", &Forcing::constant)
        .def_readonly("cos_coeffs", &Forcing::cos_coeffs)
        .def_readonly("sin_coeffs", &Forcing::sin_coeffs)
        .def("bound", &Forcing::bound)
        .def("__call__", [](const Forcing& f, double t) { return eval_forcing(f, t); });

    py::class_<ImpulseSchedule>(mod, "ImpulseSchedule")
        .def(py::init([](double t1, bool enabled) {
                 ImpulseSchedule s;
                 s.t1 = t1;
                 s.enabled = enabled;
                 return s;
             }),
             py::arg("t1"), py::arg("enabled") = true)
        .def_readonly("t1", &ImpulseSchedule::t1)
        .def_readonly("enabled", &ImpulseSchedule::enabled)
        .def("times_in", &ImpulseSchedule::times_in, py::arg("t_begin"), py::arg("t_end"));

    py::class_<ImpulsiveSystem>(mod, "ImpulsiveSystem")
        .def(py::init([](GField g, Forcing p, ImpulseSchedule imp) {
                 return ImpulsiveSystem{std::move(g), std::move(p), imp};
             }),
             py::arg("g"), py::arg("forcing") = Forcing{},
             py::arg("impulse") = ImpulseSchedule{0.0, true})
        .def_readonly("g", &ImpulsiveSystem::g)
        .def_readonly("forcing", &ImpulsiveSystem::forcing)
        .def_readonly("impulse", &ImpulsiveSystem::impulse);

    mod.def("make_linear", &make_linear);
    mod.def("make_semilinear", &make_semilinear, py::arg("lambda_lo"), py::arg("lambda_hi"),
            py::arg("growth") = 4.0, py::arg("smoothing") = 0.05);
    mod.def("eval_forcing", &eval_forcing, py::arg("forcing"), py::arg("t"));

    py::class_<FlowSettings>(mod, "FlowSettings")
        .def(py::init<>())
        .def_readwrite("rel_tol", &FlowSettings::rel_tol)
        .def_readwrite("abs_tol", &FlowSettings::abs_tol)
        .def_readwrite("max_step", &FlowSettings::max_step);

    py::class_<LiftedState>(mod, "LiftedState")
        .def_readonly("t", &LiftedState::t)
        .def_readonly("x", &LiftedState::x)
        .def_readonly("y", &LiftedState::y)
        .def_readonly("rho", &LiftedState::rho)
        .def_readonly("phi", &LiftedState::phi);

    py::class_<EvolveDiagnostics>(mod, "EvolveDiagnostics")
        .def_readonly("winding", &EvolveDiagnostics::winding)
        .def_readonly("energy_drift", &EvolveDiagnostics::energy_drift)
        .def_readonly("accepted_steps", &EvolveDiagnostics::accepted_steps)
        .def_readonly("rejected_steps", &EvolveDiagnostics::rejected_steps)
        .def_readonly("impulses", &EvolveDiagnostics::impulses)
        .def_readonly("impulse_deltas", &EvolveDiagnostics::impulse_deltas)
        .def_readonly("impulse_jumped", &EvolveDiagnostics::impulse_jumped);

    mod.def("make_lifted", &make_lifted, py::arg("t"), py::arg("x"), py::arg("y"));
    mod.def("apply_impulse", &apply_impulse, py::arg("state"));
    mod.def("impulse_angle_jump", &impulse_angle_jump, py::arg("phi_minus"), py::arg("y"));
    mod.def(
        "evolve",
        [](const ImpulsiveSystem& sys, const LiftedState& s0, double t_end,
           const FlowSettings& st) { return evolve(sys, s0, t_end, st); },
        py::arg("sys"), py::arg("s0"), py::arg("t_end"), py::arg("settings") = FlowSettings{});

    py::class_<EnergyCurve>(mod, "EnergyCurve")
        .def_readonly("c", &EnergyCurve::c)
        .def_readonly("h", &EnergyCurve::h)
        .def_readonly("h1", &EnergyCurve::h1)
        .def_readonly("tau", &EnergyCurve::tau)
        .def_readonly("c0_floor", &EnergyCurve::c0_floor);

    mod.def("energy_curve", &energy_curve, py::arg("g"), py::arg("c"),
            py::arg("c0_floor") = 1.0);
    mod.def("min_level", &min_level, py::arg("g"), py::arg("floor") = 1.0,
            py::arg("n_angles") = 720, py::arg("cap") = 1e9);
    mod.def("intercepts", &intercepts, py::arg("g"), py::arg("c"));
    mod.def("tau", &tau, py::arg("g"), py::arg("c"), py::arg("rel_tol") = 1e-9);
    mod.def("tau_flow_oracle", &tau_flow_oracle, py::arg("g"), py::arg("c"));
    mod.def(
        "sample_curve",
        [](const GField& g, double c, int n) {
            std::vector<Pair> out;
            for (const auto& p : sample_curve(g, c, n)) out.emplace_back(p.x, p.y);
            return out;
        },
        py::arg("g"), py::arg("c"), py::arg("n"));

    py::class_<PoincareOutcome>(mod, "PoincareOutcome")
        .def_property_readonly("start",
                               [](const PoincareOutcome& o) { return Pair{o.start.x, o.start.y}; })
        .def_property_readonly("end",
                               [](const PoincareOutcome& o) { return Pair{o.end.x, o.end.y}; })
        .def_readonly("winding", &PoincareOutcome::winding)
        .def_property_readonly("jacobian",
                               [](const PoincareOutcome& o) { return mat_rows(o.jacobian); })
        .def_readonly("det", &PoincareOutcome::det)
        .def_readonly("energy_drift", &PoincareOutcome::energy_drift);

    mod.def(
        "poincare_map",
        [](const ImpulsiveSystem& sys, Pair z, const FlowSettings& st) {
            return poincare_map(sys, {z.first, z.second}, st);
        },
        py::arg("sys"), py::arg("z"), py::arg("settings") = FlowSettings{});
    mod.def(
        "jacobian",
        [](const ImpulsiveSystem& sys, Pair z, const FlowSettings& st) {
            return mat_rows(jacobian(sys, {z.first, z.second}, st));
        },
        py::arg("sys"), py::arg("z"), py::arg("settings") = FlowSettings{});
    mod.def(
        "area_defect",
        [](const ImpulsiveSystem& sys, Pair z, const FlowSettings& st) {
            return area_defect(sys, {z.first, z.second}, st);
        },
        py::arg("sys"), py::arg("z"), py::arg("settings") = FlowSettings{});

    py::class_<AnnulusSpec> annulus(mod, "AnnulusSpec");
    py::enum_<AnnulusSpec::Kind>(annulus, "Kind")
        .value("A", AnnulusSpec::Kind::A)
        .value("B", AnnulusSpec::Kind::B);
    annulus.def(py::init<>())
        .def_readwrite("a", &AnnulusSpec::a)
        .def_readwrite("b", &AnnulusSpec::b)
        .def_readwrite("tau_a", &AnnulusSpec::tau_a)
        .def_readwrite("tau_b", &AnnulusSpec::tau_b)
        .def_readwrite("m", &AnnulusSpec::m)
        .def_readwrite("alpha", &AnnulusSpec::alpha)
        .def_readwrite("beta1", &AnnulusSpec::beta1)
        .def_readwrite("beta2", &AnnulusSpec::beta2)
        .def_readwrite("boundary_samples", &AnnulusSpec::boundary_samples)
        .def_readwrite("kind", &AnnulusSpec::kind);

    py::class_<CurveWinding>(mod, "CurveWinding")
        .def_readonly("phi0", &CurveWinding::phi0)
        .def_readonly("winding", &CurveWinding::winding)
        .def_readonly("impulse_jumped", &CurveWinding::impulse_jumped);

    py::class_<TwistReport>(mod, "TwistReport")
        .def_readonly("passed", &TwistReport::pass)
        .def_readonly("beta1", &TwistReport::beta1)
        .def_readonly("beta2", &TwistReport::beta2)
        .def_readonly("boundary_samples", &TwistReport::boundary_samples)
        .def_readonly("offending_angles", &TwistReport::offending_angles)
        .def_readonly("note", &TwistReport::note);

    py::class_<GapPoint>(mod, "GapPoint")
        .def_readonly("gamma", &GapPoint::gamma)
        .def_readonly("max_gap", &GapPoint::max_gap);

    mod.def("winding_on_curve", &winding_on_curve, py::arg("sys"), py::arg("c"), py::arg("n"),
            py::arg("settings") = FlowSettings{});
    mod.def("tau_scan", &tau_scan, py::arg("g"), py::arg("c_lo"), py::arg("c_hi"),
            py::arg("points"), py::arg("m_candidates"), py::arg("min_margin") = 0.05);
    mod.def("twist_check", &twist_check, py::arg("sys"), py::arg("annulus"),
            py::arg("boundary_samples") = 64, py::arg("settings") = FlowSettings{});
    mod.def("gap_profile", &gap_profile, py::arg("sys_forced"), py::arg("sys_autonomous"),
            py::arg("gammas"), py::arg("n_angles"), py::arg("settings") = FlowSettings{});

    py::class_<OrbitRecord>(mod, "OrbitRecord")
        .def_property_readonly("point",
                               [](const OrbitRecord& r) { return Pair{r.point.x, r.point.y}; })
        .def_readonly("residual", &OrbitRecord::residual)
        .def_readonly("annulus_id", &OrbitRecord::annulus_id)
        .def_readonly("multiplier_pair", &OrbitRecord::multiplier_pair)
        .def_readonly("min_period_factor", &OrbitRecord::min_period_factor)
        .def_readonly("degenerate", &OrbitRecord::degenerate)
        .def_readonly("det_jacobian", &OrbitRecord::det_jacobian)
        .def_readonly("v_level", &OrbitRecord::v_level);

    py::class_<GridSpec>(mod, "GridSpec")
        .def(py::init([](int radial, int angular, std::uint64_t seed) {
                 return GridSpec{radial, angular, seed};
             }),
             py::arg("radial") = 6, py::arg("angular") = 12, py::arg("seed") = 0)
        .def_readwrite("radial", &GridSpec::radial)
        .def_readwrite("angular", &GridSpec::angular)
        .def_readwrite("seed", &GridSpec::seed);

    mod.def("find_fixed_points", &find_fixed_points, py::arg("sys"), py::arg("annulus"),
            py::arg("grid") = GridSpec{}, py::arg("settings") = FlowSettings{},
            py::arg("annulus_id") = -1);
    mod.def("verify_orbit", &verify_orbit, py::arg("sys"), py::arg("record"), py::arg("n_max"),
            py::arg("settings") = FlowSettings{});
    mod.def(
        "displacement_winding",
        [](const ImpulsiveSystem& sys, const AnnulusSpec& an, int n_angles,
           const FlowSettings& st) { return displacement_winding(sys, an, n_angles, st); },
        py::arg("sys"), py::arg("annulus"), py::arg("n_angles"),
        py::arg("settings") = FlowSettings{});
    mod.def(
        "displacement_degree_on_curve",
        [](const std::function<Pair(Pair)>& map, const GField& g, double c, int n_angles,
           double vanish_tol) {
            PlanarMap planar = [&map](const Vec2& z) {
                const auto out = map({z.x, z.y});
                return Vec2{out.first, out.second};
            };
            return displacement_degree_on_curve(planar, g, c, n_angles, vanish_tol);
        },
        py::arg("map"), py::arg("g"), py::arg("c"), py::arg("n_angles"),
        py::arg("vanish_tol") = 1e-12);

    mod.def("load_model_config", [](const std::string& path) {
        return ModelConfig::from_file(path).build();
    });
}
