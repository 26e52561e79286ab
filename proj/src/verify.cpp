#include "powerdual/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <tuple>

#include "powerdual/core.hpp"
#include "powerdual/eigensolver.hpp"
#include "powerdual/errors.hpp"
#include "powerdual/orbits.hpp"
#include "powerdual/specfun.hpp"
#include "powerdual/susy.hpp"
#include "powerdual/wkb.hpp"

namespace powerdual::verify {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Check run_check(const std::string& suite, const std::string& name, double tol,
                const std::function<double(std::string&)>& body) {
    Check c;
    c.suite = suite;
    c.name = name;
    c.tolerance = tol;
    try {
        c.measured = body(c.detail);
        c.passed = std::isfinite(c.measured) && c.measured < tol;
    } catch (const std::exception& e) {
        c.measured = std::numeric_limits<double>::quiet_NaN();
        c.passed = false;
        c.detail = e.what();
    }
    return c;
}

}  // namespace

Suite parse_suite(const std::string& name) {
    if (name == "all") return Suite::all;
    if (name == "quantum") return Suite::quantum;
    if (name == "wkb") return Suite::wkb;
    if (name == "orbits") return Suite::orbits;
    if (name == "susy") return Suite::susy;
    throw ArgumentError("unknown suite '" + name + "' (all|quantum|wkb|orbits|susy)");
}

std::string to_string(Suite s) {
    switch (s) {
        case Suite::all: return "all";
        case Suite::quantum: return "quantum";
        case Suite::wkb: return "wkb";
        case Suite::orbits: return "orbits";
        case Suite::susy: return "susy";
    }
    return "all";
}

bool Report::passed() const { return failures() == 0; }

int Report::failures() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

std::vector<Check> quantum_checks() {
    const std::string s = "quantum";
    std::vector<Check> out;

    out.push_back(run_check(s, "oscillator_levels", 1e-8, [](std::string& d) {
        double worst = 0.0;
        for (int l = 0; l <= 2; ++l)
            for (int n = 0; n <= 2; ++n)
                worst = std::max(worst, rel(eigen::solve_radial(PotentialSpec::confining(2.0), l, n).eps,
                                            4.0 * n + 2.0 * l + 3.0));
        d = "nu=2, l=0..2, nodes=0..2 vs 4n+2l+3";
        return worst;
    }));
    out.push_back(run_check(s, "coulomb_levels", 1e-8, [](std::string& d) {
        double worst = 0.0;
        for (int l = 0; l <= 1; ++l)
            for (int n = 0; n <= 1; ++n)
                worst = std::max(worst, rel(eigen::solve_radial(PotentialSpec::singular(-1.0), l, n).eps,
                                            -0.25 / ((n + l + 1.0) * (n + l + 1.0))));
        d = "nu=-1, l=0..1, nodes=0..1 vs -1/(4(n+l+1)^2)";
        return worst;
    }));

    for (auto [l1, l2] : {std::pair{1, 0}, std::pair{2, 0}, std::pair{2, 1}, std::pair{3, 1}}) {
        std::ostringstream name;
        name << "duality_pair_" << l1 << "_" << l2;
        out.push_back(run_check(s, name.str(), 1e-6, [l1, l2](std::string& d) {
            const DualPair p = core::integer_pair(l1, l2);
            double worst = 0.0;
            double spectral = 0.0;
            for (int n = 0; n <= 2; ++n) {
                const double e1 = eigen::solve_radial(PotentialSpec::confining(p.nu1), l1, n).eps;
                const double e2 = eigen::solve_radial(PotentialSpec::singular(p.nu2), l2, n).eps;
                worst = std::max(worst, rel(core::energy_dual(e1, p.nu1), e2));
                spectral = std::max(spectral, std::abs(core::spectral_residual(e1, e2, p.nu1, p.nu2)));
            }
            std::ostringstream os;
            os.precision(6);
            os << "nu1=" << p.nu1 << " nu2=" << p.nu2 << " nodes=0..2, max spectral residual " << spectral;
            d = os.str();
            return std::max(worst, spectral);
        }));
    }
    out.push_back(run_check(s, "explicit_map_nu4", 1e-12, [](std::string& d) {
        double worst = 0.0;
        for (double e1 : {3.0, 7.1, 20.0}) worst = std::max(worst, rel(core::energy_dual(e1, 4.0), -81.0 / (e1 * e1 * e1)));
        d = "eps2 = -3^4/eps1^3";
        return worst;
    }));
    out.push_back(run_check(s, "explicit_map_nu8", 1e-12, [](std::string& d) {
        double worst = 0.0;
        for (double e1 : {3.0, 9.5, 40.0}) worst = std::max(worst, rel(core::energy_dual(e1, 8.0), -std::pow(5.0, 8) / std::pow(e1, 5)));
        d = "eps2 = -5^8/eps1^5";
        return worst;
    }));
    out.push_back(run_check(s, "wavefunction_quartic", 1e-5, [](std::string& d) {
        const auto a = eigen::solve_radial(PotentialSpec::confining(4.0), 1.0, 0);
        const auto b = eigen::solve_radial(PotentialSpec::singular(-4.0 / 3.0), 0.0, 0);
        d = "nu1=4 l1=1 -> nu2=-4/3 l2=0, ground states, max-norm";
        return eigen::max_deviation(eigen::normalized(eigen::transform_wavefunction(a, 4.0)), b);
    }));
    out.push_back(run_check(s, "wavefunction_oscillator", 1e-5, [](std::string& d) {
        const auto a = eigen::solve_radial(PotentialSpec::confining(2.0), 0.5, 0);
        const auto b = eigen::solve_radial(PotentialSpec::singular(-1.0), 0.0, 0);
        d = "nu1=2 l1=1/2 -> coulomb l2=0, ground states, max-norm";
        return eigen::max_deviation(eigen::normalized(eigen::transform_wavefunction(a, 2.0)), b);
    }));
    out.push_back(run_check(s, "box_mcmahon", 1e-3, [](std::string& d) {
        double worst = 0.0;
        for (int l = 0; l <= 2; ++l) {
            const double z = specfun::mcmahon_zero(l, 50);
            worst = std::max(worst, std::abs(eigen::box_spectrum(l, 50).back() - z * z));
        }
        d = "|eps(n=50) - mcmahon^2|, l=0..2";
        return worst;
    }));
    out.push_back(run_check(s, "box_2n_plus_l", 1e-4, [](std::string& d) {
        const double e = std::pow(100.0 * kPi / 2.0, 2);
        d = "n=50 l=0 vs ((2n+l) pi/2)^2";
        return rel(eigen::box_spectrum(0, 50).back(), e);
    }));
    return out;
}

std::vector<Check> wkb_checks() {
    const std::string s = "wkb";
    std::vector<Check> out;
    out.push_back(run_check(s, "a1_oscillator", 1e-12, [](std::string& d) {
        d = "A1(nu=2) = 4";
        return std::abs(wkb::a1(2.0) - 4.0);
    }));
    out.push_back(run_check(s, "a2_coulomb", 1e-12, [](std::string& d) {
        d = "A2(nu=-1) = 2";
        return std::abs(wkb::a2(-1.0) - 2.0);
    }));
    out.push_back(run_check(s, "action_equality_grid", 1e-8, [](std::string& d) {
        double worst = 0.0;
        int evaluated = 0;
        int empty = 0;
        for (double nu2 : {-1.0, -4.0 / 3.0, -8.0 / 5.0})
            for (double e2 : {-0.1, -0.5, -2.0})
                for (double l2 : {0.0, 1.0, 2.0}) {
                    try {
                        worst = std::max(worst, wkb::verify_action_equality(nu2, e2, langer(l2)));
                        ++evaluated;
                    } catch (const NoClassicalRegionError&) {
                        const auto m = wkb::map_action_parameters(nu2, e2, langer(l2));
                        try {
                            wkb::turning_points(PotentialSpec::confining(m.nu1), m.eps1, classical(std::sqrt(m.coef1)));
                            return std::numeric_limits<double>::infinity();
                        } catch (const NoClassicalRegionError&) {
                            ++empty;
                        }
                    }
                }
        std::ostringstream os;
        os << evaluated << " evaluated, " << empty << " without a classical region on either side";
        d = os.str();
        return worst;
    }));
    out.push_back(run_check(s, "quantize_exact_cases", 1e-8, [](std::string& d) {
        double worst = 0.0;
        for (int n = 1; n <= 3; ++n)
            for (int l = 0; l <= 2; ++l) {
                worst = std::max(worst, rel(wkb::quantize(PotentialSpec::confining(2.0), langer(l), n),
                                            4.0 * (n - 1) + 2.0 * l + 3.0));
                worst = std::max(worst, rel(wkb::quantize(PotentialSpec::singular(-1.0), langer(l), n),
                                            -0.25 / ((n + l) * double(n + l))));
            }
        d = "Langer WKB vs exact levels, nu=2 and nu=-1, n=1..3, l=0..2";
        return worst;
    }));
    out.push_back(run_check(s, "quantize_vs_closed_form", 1e-7, [](std::string& d) {
        double worst = 0.0;
        for (int n = 1; n <= 3; ++n) {
            for (int l = 0; l <= 2; ++l) {
                worst = std::max(worst, rel(wkb::quantize(PotentialSpec::confining(2.0), langer(l), n),
                                            wkb::wkb_energy_closed_form(wkb::Branch::confining, n, l, 2.0)));
                worst = std::max(worst, rel(wkb::quantize(PotentialSpec::singular(-1.0), langer(l), n),
                                            wkb::wkb_energy_closed_form(wkb::Branch::singular, n, l, -1.0)));
            }
            for (double nu2 : {-1.0, -4.0 / 3.0, -8.0 / 5.0}) {
                const double nu1 = core::exponent_dual(nu2);
                worst = std::max(worst, rel(wkb::quantize(PotentialSpec::singular(nu2), langer(-0.5), n),
                                            wkb::wkb_energy_closed_form(wkb::Branch::singular, n, -0.5, nu2)));
                worst = std::max(worst, rel(wkb::quantize(PotentialSpec::confining(nu1), langer(-0.5), n),
                                            wkb::wkb_energy_closed_form(wkb::Branch::confining, n, -0.5, nu1)));
            }
        }
        d = "nu in {2,-1} at l=0..2; nu2 grid and duals at zero centrifugal coefficient; n=1..3";
        return worst;
    }));
    return out;
}

std::vector<Check> orbit_checks() {
    const std::string s = "orbits";
    std::vector<Check> out;
    for (double nu1 : {2.0, 4.0, 8.0}) {
        std::ostringstream name;
        name << "apsidal_ratio_nu" << nu1;
        out.push_back(run_check(s, name.str(), 1e-7, [nu1](std::string& d) {
            const auto c = orbits::apsidal_check(nu1, 5.0, 1.0);
            std::ostringstream os;
            os.precision(12);
            os << "theta2/theta1=" << c.ratio << " expected " << c.expected;
            d = os.str();
            return std::abs(c.ratio - c.expected);
        }));
    }
    const auto osc = orbits::trace(PotentialSpec::confining(2.0), 4.0, 1.0);
    out.push_back(run_check(s, "oscillator_orbit_equation", 1e-9, [&osc](std::string& d) {
        d = "trace nu=2 eps=4 l=1 vs closed ellipse";
        return orbits::closed_orbit_residual(osc, orbits::ClosedKind::oscillator);
    }));
    out.push_back(run_check(s, "mapped_coulomb_orbit_equation", 1e-9, [&osc](std::string& d) {
        const auto m = orbits::map_trace(osc);
        d = "mapped oscillator trace vs Coulomb conic";
        return orbits::closed_orbit_residual(m, orbits::ClosedKind::coulomb);
    }));
    out.push_back(run_check(s, "orbit_map_round_trip", 1e-12, [&osc](std::string& d) {
        const auto back = orbits::inverse_map_trace(orbits::map_trace(osc));
        double worst = 0.0;
        for (std::size_t i = 0; i < osc.samples.size(); ++i) {
            worst = std::max(worst, rel(back.samples[i].rho, osc.samples[i].rho));
            worst = std::max(worst, std::abs(back.samples[i].theta - osc.samples[i].theta));
        }
        worst = std::max({worst, rel(back.eps, osc.eps), rel(back.l, osc.l)});
        d = "inverse map after forward map, all samples";
        return worst;
    }));
    out.push_back(run_check(s, "classical_action_equality", 1e-8, [](std::string& d) {
        double worst = 0.0;
        for (auto [nu1, e1, l1] : {std::tuple{2.0, 4.0, 1.0}, std::tuple{4.0, 6.0, 1.5}, std::tuple{8.0, 3.0, 0.5}}) {
            const double s1 = orbits::classical_action(PotentialSpec::confining(nu1), e1, l1);
            const double s2 = orbits::classical_action(PotentialSpec::singular(core::exponent_dual(nu1)),
                                                       orbits::classical_energy_dual(e1, nu1),
                                                       orbits::classical_angular_dual(l1, nu1));
            worst = std::max(worst, rel(s2, s1));
        }
        d = "S2 = S1 with l^2 terms, (nu1, eps1, l1) in {(2,4,1), (4,6,1.5), (8,3,0.5)}";
        return worst;
    }));
    return out;
}

std::vector<Check> susy_checks() {
    const std::string s = "susy";
    std::vector<Check> out;
    std::optional<susy::ShallowPotential> sp;
    std::string build_error;
    try {
        sp = susy::shallow_potential(PotentialSpec::confining(2.0), 1, 0.0);
    } catch (const std::exception& e) {
        build_error = e.what();
    }
    auto need = [&]() -> const susy::ShallowPotential& {
        if (!sp) throw Error("shallow potential unavailable: " + build_error);
        return *sp;
    };
    out.push_back(run_check(s, "shallow_spectrum", 1e-5, [&](std::string& d) {
        const auto levels = susy::shallow_spectrum(need(), 3);
        const double expect[3] = {7.0, 11.0, 15.0};
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, rel(levels[i].eps, expect[i]));
        d = "nu=2 N=1 l=0 vs {7, 11, 15}";
        return worst;
    }));
    out.push_back(run_check(s, "barrier_coefficient", 0.02, [&](std::string& d) {
        const double c = susy::near_origin_exponent(need());
        std::ostringstream os;
        os.precision(8);
        os << "c=" << c << " vs (l+2N)(l+2N+1)=6";
        d = os.str();
        return rel(c, susy::barrier_prediction(0.0, 1));
    }));
    out.push_back(run_check(s, "tail_gap", 1e-4, [&](std::string& d) {
        d = "|V_shallow - V_deep|/|V_deep| at rho_max";
        return susy::tail_gap(need());
    }));
    out.push_back(run_check(s, "quasi_degeneracy_quartic", 0.05, [](std::string& d) {
        double worst = 0.0;
        for (const auto& r : susy::degeneracy_report(4.0, 1, 9))
            if (r.n >= 4) worst = std::max(worst, r.measure);
        d = "nu=4, l=0..1, n=4..8";
        return worst;
    }));
    out.push_back(run_check(s, "quasi_degeneracy_gaussian", 0.05, [](std::string& d) {
        double worst = 0.0;
        for (const auto& r : susy::degeneracy_report(susy::gaussian_well(500.0, 1.0), 0, 6))
            if (r.n >= 1) worst = std::max(worst, r.measure);
        d = "-500 exp(-rho^2), l=0, n=1..5";
        return worst;
    }));
    return out;
}

Report run(Suite suite, double tolerance_scale) {
    if (!(tolerance_scale >= 0.0)) throw ArgumentError("verify: tolerance scale must be >= 0");
    Report r;
    r.suite = to_string(suite);
    auto add = [&](std::vector<Check> v) { r.checks.insert(r.checks.end(), v.begin(), v.end()); };
    if (suite == Suite::all || suite == Suite::quantum) add(quantum_checks());
    if (suite == Suite::all || suite == Suite::wkb) add(wkb_checks());
    if (suite == Suite::all || suite == Suite::orbits) add(orbit_checks());
    if (suite == Suite::all || suite == Suite::susy) add(susy_checks());
    if (tolerance_scale != 1.0) {
        for (auto& c : r.checks) {
            c.tolerance *= tolerance_scale;
            c.passed = c.passed && c.measured < c.tolerance;
        }
    }
    return r;
}

}  // namespace powerdual::verify
