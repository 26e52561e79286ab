// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "powerdual/core.hpp"
#include "powerdual/eigensolver.hpp"
#include "powerdual/errors.hpp"
#include "powerdual/orbits.hpp"
#include "powerdual/specfun.hpp"
#include "powerdual/susy.hpp"
#include "powerdual/wkb.hpp"

using namespace powerdual;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// A criterion is a conjunction of measured < tolerance clauses plus an optional runtime limit.
struct Clause {
    std::string what;
    double measured;
    double tolerance;
    bool ok() const { return std::isfinite(measured) && measured < tolerance; }
};

struct Outcome {
    std::vector<Clause> clauses;
    void add(std::string what, double measured, double tolerance) {
        clauses.push_back({std::move(what), measured, tolerance});
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double time_limit, const std::function<void(Outcome&)>& body) {
    Outcome o;
    std::string error;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = error.empty() && !o.clauses.empty();
    for (const auto& c : o.clauses) ok = ok && c.ok();
    if (time_limit > 0 && secs >= time_limit) ok = false;
    std::printf("%s %2d %s  time=%.2fs", ok ? "PASS" : "FAIL", id, title.c_str(), secs);
    if (time_limit > 0) std::printf(" (limit %.0fs)", time_limit);
    std::printf("\n");
    for (const auto& c : o.clauses)
        std::printf("       %s %s  measured=%.3e  tol=%.1e\n", c.ok() ? "ok " : "BAD", c.what.c_str(), c.measured,
                    c.tolerance);
    if (!error.empty()) std::printf("       error: %s\n", error.c_str());
    if (!ok) ++failures;
}

std::string run_cli_verify() {
    const std::string cmd = std::string(POWERDUAL_CLI_PATH) + " verify --suite all 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw Error("popen failed");
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
    const int status = pclose(p);
    if (status != 0) throw Error("verify exited with status " + std::to_string(status));
    return out;
}

}  // namespace

int main() {
    criterion(1, "exact-case solver calibration", 10.0, [](Outcome& o) {
        double osc = 0.0, coul = 0.0;
        for (int l = 0; l <= 2; ++l)
            for (int n = 0; n <= 2; ++n)
                osc = std::max(osc, rel(eigen::solve_radial(PotentialSpec::confining(2.0), l, n).eps, 4.0 * n + 2.0 * l + 3.0));
        for (int l = 0; l <= 1; ++l)
            for (int n = 0; n <= 1; ++n)
                coul = std::max(coul, rel(eigen::solve_radial(PotentialSpec::singular(-1.0), l, n).eps,
                                          -0.25 / ((n + l + 1.0) * (n + l + 1.0))));
        o.add("nu=2 l=0..2 n=0..2 vs 4n+2l+3", osc, 1e-8);
        o.add("nu=-1 l=0..1 n=0..1 vs -1/(4(n+l+1)^2)", coul, 1e-8);
    });

    criterion(2, "quantum duality reproduction", 60.0, [](Outcome& o) {
        for (auto [l1, l2] : {std::pair{1, 0}, std::pair{2, 0}, std::pair{2, 1}, std::pair{3, 1}}) {
            const DualPair p = core::integer_pair(l1, l2);
            double map = 0.0, spectral = 0.0;
            for (int n = 0; n <= 2; ++n) {
                const double e1 = eigen::solve_radial(PotentialSpec::confining(p.nu1), l1, n).eps;
                const double e2 = eigen::solve_radial(PotentialSpec::singular(p.nu2), l2, n).eps;
                map = std::max(map, rel(core::energy_dual(e1, p.nu1), e2));
                spectral = std::max(spectral, std::abs(core::spectral_residual(e1, e2, p.nu1, p.nu2)));
            }
            std::ostringstream os;
            os << "pair (" << l1 << "," << l2 << ") nodes 0..2";
            o.add(os.str() + " energy_dual", map, 1e-6);
            o.add(os.str() + " spectral_residual", spectral, 1e-6);
        }
        double e4 = 0.0, e8 = 0.0;
        for (int n = 0; n <= 2; ++n) {
            const double a = eigen::solve_radial(PotentialSpec::confining(4.0), 1.0, n).eps;
            e4 = std::max(e4, rel(-81.0 / (a * a * a), eigen::solve_radial(PotentialSpec::singular(-4.0 / 3.0), 0.0, n).eps));
            const double b = eigen::solve_radial(PotentialSpec::confining(8.0), 2.0, n).eps;
            e8 = std::max(e8, rel(-std::pow(5.0, 8) / std::pow(b, 5), eigen::solve_radial(PotentialSpec::singular(-1.6), 0.0, n).eps));
        }
        o.add("eps2 = -3^4/eps1^3", e4, 1e-6);
        o.add("eps2 = -5^8/eps1^5", e8, 1e-6);
    });

    criterion(3, "wavefunction transform", 0.0, [](Outcome& o) {
        const auto q = eigen::solve_radial(PotentialSpec::confining(4.0), 1.0, 0);
        const auto c = eigen::solve_radial(PotentialSpec::singular(-4.0 / 3.0), 0.0, 0);
        o.add("quartic l1=1 -> -rho^(-4/3) l2=0", eigen::max_deviation(eigen::normalized(eigen::transform_wavefunction(q, 4.0)), c), 1e-5);
        const auto s = eigen::solve_radial(PotentialSpec::confining(2.0), 0.5, 0);
        const auto h = eigen::solve_radial(PotentialSpec::singular(-1.0), 0.0, 0);
        o.add("oscillator l1=1/2 -> Coulomb l2=0", eigen::max_deviation(eigen::normalized(eigen::transform_wavefunction(s, 2.0)), h), 1e-5);
        // The oscillator case uses rho2 = eps1 rho1^2 / 4.
        const auto mapped = eigen::transform_wavefunction(s, 2.0);
        double grid = 0.0;
        for (std::size_t i = 0; i < s.grid.size(); i += 97)
            grid = std::max(grid, rel(mapped.rho[i], s.eps * s.grid[i] * s.grid[i] / 4.0));
        o.add("rho2 = eps1 rho1^2 / 4", grid, 1e-12);
    });

    criterion(4, "action-integral equality", 10.0, [](Outcome& o) {
        double worst = 0.0;
        int evaluated = 0, empty = 0, inconsistent = 0;
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
                            ++inconsistent;
                        } catch (const NoClassicalRegionError&) {
                            ++empty;
                        }
                    }
                }
        o.add("max residual over " + std::to_string(evaluated) + " points with turning points", worst, 1e-8);
        o.add(std::to_string(empty) + " empty points; count empty on one side only", inconsistent, 0.5);
        o.add("grid size 27 minus evaluated/empty", std::abs(27.0 - evaluated - empty), 0.5);
    });

    criterion(5, "WKB closed forms", 0.0, [](Outcome& o) {
        o.add("A1(2) = 4", std::abs(wkb::a1(2.0) - 4.0), 1e-12);
        o.add("A2(-1) = 2", std::abs(wkb::a2(-1.0) - 2.0), 1e-12);
        double cf = 0.0, exact = 0.0;
        for (int n = 1; n <= 3; ++n) {
            for (int l = 0; l <= 2; ++l) {
                const double a = wkb::quantize(PotentialSpec::confining(2.0), langer(l), n);
                const double b = wkb::quantize(PotentialSpec::singular(-1.0), langer(l), n);
                cf = std::max({cf, rel(a, wkb::wkb_energy_closed_form(wkb::Branch::confining, n, l, 2.0)),
                               rel(b, wkb::wkb_energy_closed_form(wkb::Branch::singular, n, l, -1.0))});
                exact = std::max({exact, rel(a, 4.0 * (n - 1) + 2.0 * l + 3.0), rel(b, -0.25 / double((n + l) * (n + l)))});
            }
            for (double nu2 : {-4.0 / 3.0, -8.0 / 5.0}) {
                const double nu1 = core::exponent_dual(nu2);
                cf = std::max({cf,
                               rel(wkb::quantize(PotentialSpec::singular(nu2), langer(-0.5), n),
                                   wkb::wkb_energy_closed_form(wkb::Branch::singular, n, -0.5, nu2)),
                               rel(wkb::quantize(PotentialSpec::confining(nu1), langer(-0.5), n),
                                   wkb::wkb_energy_closed_form(wkb::Branch::confining, n, -0.5, nu1))});
            }
        }
        o.add("quantize vs closed form, both branches", cf, 1e-7);
        o.add("Langer WKB exact for nu=2 and nu=-1", exact, 1e-8);
    });

    criterion(6, "spherical-box limit", 0.0, [](Outcome& o) {
        double at50 = 0.0;
        bool shrinking = true;
        for (int l = 0; l <= 2; ++l) {
            const auto levels = eigen::box_spectrum(l, 50);
            double prev = INFINITY;
            for (int n : {5, 10, 20, 50}) {
                const double z = specfun::mcmahon_zero(l, n);
                const double d = std::abs(levels[n - 1] - z * z);
                shrinking = shrinking && d <= prev;
                prev = d;
            }
            at50 = std::max(at50, prev);
        }
        o.add("|eps(n=50) - mcmahon^2|, l=0..2", at50, 1e-3);
        o.add("difference shrinks over n=5,10,20,50", shrinking ? 0.0 : 1.0, 0.5);
        o.add("n=50 l=0 vs ((2n+l) pi/2)^2", rel(eigen::box_spectrum(0, 50).back(), std::pow(100.0 * kPi / 2.0, 2)), 1e-4);
    });

    criterion(7, "classical orbit correspondence", 0.0, [](Outcome& o) {
        const auto osc = orbits::trace(PotentialSpec::confining(2.0), 4.0, 1.0);
        const auto mapped = orbits::map_trace(osc);
        o.add("mapped trace vs Coulomb orbit equation", orbits::closed_orbit_residual(mapped, orbits::ClosedKind::coulomb), 1e-9);
        const auto back = orbits::inverse_map_trace(mapped);
        double rt = std::max(rel(back.eps, osc.eps), rel(back.l, osc.l));
        for (std::size_t i = 0; i < osc.samples.size(); ++i)
            rt = std::max({rt, rel(back.samples[i].rho, osc.samples[i].rho), std::abs(back.samples[i].theta - osc.samples[i].theta)});
        o.add("inverse map after forward map", rt, 1e-12);
        for (double nu1 : {2.0, 4.0, 8.0}) {
            const auto c = orbits::apsidal_check(nu1, 5.0, 1.0);
            std::ostringstream os;
            os << "apsidal ratio nu1=" << nu1 << " vs -nu1/nu2";
            o.add(os.str(), std::abs(c.ratio + nu1 / core::exponent_dual(nu1)), 1e-7);
        }
    });

    criterion(8, "SUSY shallow potential", 0.0, [](Outcome& o) {
        const auto sp = susy::shallow_potential(PotentialSpec::confining(2.0), 1, 0.0);
        const auto levels = susy::shallow_spectrum(sp, 3);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, rel(levels[i].eps, 7.0 + 4.0 * i));
        o.add("shallow spectrum vs {7, 11, 15}", worst, 1e-5);
        o.add("barrier coefficient vs 6", rel(susy::near_origin_exponent(sp), 6.0), 0.02);
        o.add("tail gap at rho_max", susy::tail_gap(sp), 1e-4);
    });

    criterion(9, "quasi-degeneracy", 0.0, [](Outcome& o) {
        double quartic = 0.0, gauss = 0.0;
        for (const auto& r : susy::degeneracy_report(4.0, 1, 9))
            if (r.n >= 4) quartic = std::max(quartic, r.measure);
        for (const auto& r : susy::degeneracy_report(susy::gaussian_well(500.0, 1.0), 0, 6))
            if (r.n >= 1) gauss = std::max(gauss, r.measure);
        o.add("nu=4 l=0..1 n=4..8", quartic, 0.05);
        o.add("-500 exp(-rho^2) l=0 n=1..5", gauss, 0.05);
    });

    criterion(10, "determinism of verify --suite all", 0.0, [](Outcome& o) {
        const auto a = run_cli_verify();
        const auto b = run_cli_verify();
        o.add("reports differ (bytes " + std::to_string(a.size()) + ")", a == b ? 0.0 : 1.0, 0.5);
        o.add("report ends in OK", a.find("\nOK ") != std::string::npos ? 0.0 : 1.0, 0.5);
    });

    std::printf("%s %d failing criteria\n", failures ? "FAILED" : "OK", failures);
    return failures;
}
