#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "powerdual/cli.hpp"
#include "powerdual/core.hpp"
#include "powerdual/eigensolver.hpp"
#include "powerdual/errors.hpp"
#include "powerdual/orbits.hpp"
#include "powerdual/specfun.hpp"
#include "powerdual/susy.hpp"
#include "powerdual/verify.hpp"
#include "powerdual/wkb.hpp"

namespace py = pybind11;
using namespace powerdual;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Power-law duality: radial spectra, semiclassical actions, orbits and SUSY partners.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<PoleError>(m, "PoleError", domain.ptr());
    py::register_exception<NoClassicalRegionError>(m, "NoClassicalRegionError", domain.ptr());
    py::register_exception<NonConvergenceError>(m, "NonConvergenceError", base.ptr());
    py::register_exception<BracketError>(m, "BracketError", base.ptr());
    py::register_exception<NoBoundStateError>(m, "NoBoundStateError", base.ptr());
    py::register_exception<GridCoverageError>(m, "GridCoverageError", base.ptr());
    py::register_exception<OrthonormalityError>(m, "OrthonormalityError", base.ptr());
    py::register_exception<InsufficientStatesError>(m, "InsufficientStatesError", base.ptr());
    py::register_exception<FitQualityError>(m, "FitQualityError", base.ptr());

    // core
    py::enum_<Convention>(m, "Convention")
        .value("quantum", Convention::quantum)
        .value("langer", Convention::langer)
        .value("classical", Convention::classical);
    py::class_<Centrifugal>(m, "Centrifugal")
        .def(py::init<double, Convention>(), py::arg("l"), py::arg("convention") = Convention::quantum)
        .def_readwrite("l", &Centrifugal::l)
        .def_readwrite("convention", &Centrifugal::convention)
        .def("coefficient", &Centrifugal::coefficient);

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def_static("confining", &PotentialSpec::confining, py::arg("nu"))
        .def_static("singular", &PotentialSpec::singular, py::arg("nu"))
        .def_static("hard_sphere", &PotentialSpec::hard_sphere)
        .def_static("tabulated", &PotentialSpec::tabulated, py::arg("rho"), py::arg("values"))
        .def_static("callable", &PotentialSpec::callable, py::arg("fn"), py::arg("name") = "callable")
        .def("with_inverse_square", &PotentialSpec::with_inverse_square, py::arg("c"))
        .def("__call__", &PotentialSpec::operator(), py::arg("rho"))
        .def("describe", &PotentialSpec::describe)
        .def("exponent", &PotentialSpec::exponent)
        .def("__repr__", [](const PotentialSpec& p) { return "<PotentialSpec " + p.describe() + ">"; });

    py::enum_<AngularMap>(m, "AngularMap")
        .value("quantum", AngularMap::quantum)
        .value("classical", AngularMap::classical);
    py::class_<DualPair>(m, "DualPair")
        .def_readonly("nu1", &DualPair::nu1)
        .def_readonly("nu2", &DualPair::nu2)
        .def_readonly("l1", &DualPair::l1)
        .def_readonly("l2", &DualPair::l2)
        .def("map_energy", &DualPair::map_energy, py::arg("eps1"))
        .def("__repr__", [](const DualPair& p) {
            std::ostringstream os;
            os << "DualPair(nu1=" << p.nu1 << ", nu2=" << p.nu2 << ", l1=" << p.l1 << ", l2=" << p.l2 << ")";
            return os.str();
        });

    m.def("exponent_dual", &core::exponent_dual, py::arg("nu1"));
    m.def("angular_dual", &core::angular_dual, py::arg("l1"), py::arg("nu1"), py::arg("convention") = AngularMap::quantum);
    m.def("energy_dual", &core::energy_dual, py::arg("eps1"), py::arg("nu1"));
    m.def("energy_dual_inverse", &core::energy_dual_inverse, py::arg("eps2"), py::arg("nu2"));
    m.def("spectral_residual", &core::spectral_residual, py::arg("eps1"), py::arg("eps2"), py::arg("nu1"), py::arg("nu2"));
    m.def("make_pair", &core::make_pair, py::arg("nu1"), py::arg("l1"), py::arg("convention") = AngularMap::quantum);
    m.def("integer_pair", &core::integer_pair, py::arg("l1"), py::arg("l2"));
    m.def("enumerate_integer_pairs", &core::enumerate_integer_pairs, py::arg("l1_max"));

    // specfun
    m.def("gamma", &specfun::gamma, py::arg("x"));
    m.def("kummer_m", [](double a, double b, double z) { return specfun::kummer_m({a, b, z}); },
          py::arg("a"), py::arg("b"), py::arg("z"));
    m.def("sph_bessel_j", &specfun::sph_bessel_j, py::arg("l"), py::arg("x"));
    m.def("sph_bessel_zero", &specfun::sph_bessel_zero, py::arg("l"), py::arg("n"));
    m.def("mcmahon_zero", &specfun::mcmahon_zero, py::arg("l"), py::arg("n"));

    // eigensolver
    py::class_<eigen::SolverOptions>(m, "SolverOptions")
        .def(py::init<>())
        .def_readwrite("tol", &eigen::SolverOptions::tol)
        .def_readwrite("rho_min", &eigen::SolverOptions::rho_min)
        .def_readwrite("rho_max", &eigen::SolverOptions::rho_max)
        .def_readwrite("step", &eigen::SolverOptions::step)
        .def_readwrite("tail_action", &eigen::SolverOptions::tail_action)
        .def_readwrite("richardson", &eigen::SolverOptions::richardson)
        .def_readwrite("max_iterations", &eigen::SolverOptions::max_iterations);
    py::class_<eigen::RadialSolution>(m, "RadialSolution")
        .def_readonly("eps", &eigen::RadialSolution::eps)
        .def_readonly("nodes", &eigen::RadialSolution::nodes)
        .def_readonly("l", &eigen::RadialSolution::l)
        .def_readonly("u", &eigen::RadialSolution::u)
        .def_readonly("matching_defect", &eigen::RadialSolution::matching_defect)
        .def_readonly("potential", &eigen::RadialSolution::potential)
        .def_property_readonly("rho", [](const eigen::RadialSolution& s) {
            return std::vector<double>(s.grid.points().begin(), s.grid.points().end());
        });
    py::class_<eigen::WavefunctionSamples>(m, "WavefunctionSamples")
        .def_readonly("rho", &eigen::WavefunctionSamples::rho)
        .def_readonly("u", &eigen::WavefunctionSamples::u);

    m.def("solve_radial", &eigen::solve_radial, py::arg("pot"), py::arg("l"), py::arg("nodes"),
          py::arg("opts") = eigen::SolverOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("spectrum", &eigen::spectrum, py::arg("pot"), py::arg("l"), py::arg("n_max"),
          py::arg("opts") = eigen::SolverOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("transform_wavefunction",
          py::overload_cast<const eigen::RadialSolution&, double>(&eigen::transform_wavefunction),
          py::arg("sol"), py::arg("nu1"));
    m.def("normalized", &eigen::normalized, py::arg("w"));
    m.def("max_deviation", &eigen::max_deviation, py::arg("w"), py::arg("direct"));
    m.def("box_spectrum", &eigen::box_spectrum, py::arg("l"), py::arg("n_max"));

    // wkb
    py::enum_<wkb::QuantizationRule>(m, "QuantizationRule")
        .value("langer", wkb::QuantizationRule::langer)
        .value("hard_wall", wkb::QuantizationRule::hard_wall);
    py::enum_<wkb::Branch>(m, "Branch")
        .value("confining", wkb::Branch::confining)
        .value("singular", wkb::Branch::singular);
    m.def("action", [](const PotentialSpec& p, double eps, const Centrifugal& cf) { return wkb::action(p, eps, cf).S; },
          py::arg("pot"), py::arg("eps"), py::arg("cf"));
    m.def("turning_points", [](const PotentialSpec& p, double eps, const Centrifugal& cf) {
        const auto t = wkb::turning_points(p, eps, cf);
        return py::make_tuple(t.t1, t.t2);
    }, py::arg("pot"), py::arg("eps"), py::arg("cf"));
    m.def("quantize", &wkb::quantize, py::arg("pot"), py::arg("cf"), py::arg("n"),
          py::arg("rule") = wkb::QuantizationRule::langer);
    m.def("a1", &wkb::a1, py::arg("nu"));
    m.def("a2", &wkb::a2, py::arg("nu"));
    m.def("wkb_energy_closed_form", &wkb::wkb_energy_closed_form, py::arg("branch"), py::arg("n"), py::arg("l"), py::arg("nu"));
    m.def("verify_action_equality", &wkb::verify_action_equality, py::arg("nu2"), py::arg("eps2"), py::arg("cf2"));

    // orbits
    py::class_<orbits::OrbitTrace>(m, "OrbitTrace")
        .def_readonly("eps", &orbits::OrbitTrace::eps)
        .def_readonly("l", &orbits::OrbitTrace::l)
        .def_readonly("periapsis", &orbits::OrbitTrace::periapsis)
        .def_readonly("apoapsis", &orbits::OrbitTrace::apoapsis)
        .def_property_readonly("rho", [](const orbits::OrbitTrace& t) {
            std::vector<double> v;
            for (const auto& p : t.samples) v.push_back(p.rho);
            return v;
        })
        .def_property_readonly("theta", [](const orbits::OrbitTrace& t) {
            std::vector<double> v;
            for (const auto& p : t.samples) v.push_back(p.theta);
            return v;
        });
    py::enum_<orbits::ClosedKind>(m, "ClosedKind")
        .value("oscillator", orbits::ClosedKind::oscillator)
        .value("coulomb", orbits::ClosedKind::coulomb);
    m.def("trace", &orbits::trace, py::arg("pot"), py::arg("eps"), py::arg("l"),
          py::arg("samples") = orbits::kDefaultTraceSamples);
    m.def("map_trace", &orbits::map_trace, py::arg("trace"));
    m.def("inverse_map_trace", &orbits::inverse_map_trace, py::arg("trace"));
    m.def("closed_orbit_residual", &orbits::closed_orbit_residual, py::arg("trace"), py::arg("kind"));
    m.def("apsidal_angle", &orbits::apsidal_angle, py::arg("pot"), py::arg("eps"), py::arg("l"));
    m.def("apsidal_ratio", [](double nu1, double eps1, double l1) { return orbits::apsidal_check(nu1, eps1, l1).ratio; },
          py::arg("nu1"), py::arg("eps1"), py::arg("l1"));

    // susy
    py::class_<susy::ShallowPotential>(m, "ShallowPotential")
        .def_readonly("values", &susy::ShallowPotential::values)
        .def_readonly("deep_values", &susy::ShallowPotential::deep_values)
        .def_readonly("removed", &susy::ShallowPotential::removed)
        .def_readonly("removed_energies", &susy::ShallowPotential::removed_energies)
        .def_readonly("spec", &susy::ShallowPotential::spec)
        .def_property_readonly("rho", [](const susy::ShallowPotential& s) {
            return std::vector<double>(s.grid.points().begin(), s.grid.points().end());
        });
    py::class_<susy::DegeneracyRow>(m, "DegeneracyRow")
        .def_readonly("n", &susy::DegeneracyRow::n)
        .def_readonly("l", &susy::DegeneracyRow::l)
        .def_readonly("delta", &susy::DegeneracyRow::delta)
        .def_readonly("spacing", &susy::DegeneracyRow::spacing)
        .def_readonly("measure", &susy::DegeneracyRow::measure);
    m.def("shallow_potential", [](const PotentialSpec& deep, int N, double l) { return susy::shallow_potential(deep, N, l); },
          py::arg("deep"), py::arg("N"), py::arg("l"), py::call_guard<py::gil_scoped_release>());
    m.def("shallow_spectrum", [](const susy::ShallowPotential& sp, int count) {
        std::vector<double> out;
        for (const auto& s : susy::shallow_spectrum(sp, count)) out.push_back(s.eps);
        return out;
    }, py::arg("sp"), py::arg("count"));
    m.def("near_origin_exponent", &susy::near_origin_exponent, py::arg("sp"));
    m.def("barrier_prediction", &susy::barrier_prediction, py::arg("l"), py::arg("N"));
    m.def("tail_gap", &susy::tail_gap, py::arg("sp"));
    m.def("gaussian_well", &susy::gaussian_well, py::arg("depth"), py::arg("range"), py::arg("samples") = 4001);
    m.def("degeneracy_report",
          [](const PotentialSpec& p, int l_max, int n_max) { return susy::degeneracy_report(p, l_max, n_max); },
          py::arg("pot"), py::arg("l_max"), py::arg("n_max"));

    // verify and cli
    m.def("verify", [](const std::string& suite, double scale) {
        const auto r = verify::run(verify::parse_suite(suite), scale);
        py::list out;
        for (const auto& c : r.checks)
            out.append(py::dict(py::arg("suite") = c.suite, py::arg("name") = c.name, py::arg("measured") = c.measured,
                                py::arg("tolerance") = c.tolerance, py::arg("passed") = c.passed,
                                py::arg("detail") = c.detail));
        return out;
    }, py::arg("suite") = "all", py::arg("tolerance_scale") = 1.0);
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
