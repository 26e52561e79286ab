#include "powerdual/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "powerdual/errors.hpp"
#include "powerdual/numerics.hpp"
#include "powerdual/specfun.hpp"

namespace powerdual::wkb {

namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Gauss-Legendre with panel splitting when a single rule stalls.
numerics::QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol, int depth = 0) {
    try {
        return numerics::integrate_gl(f, a, b, rel_tol);
    } catch (const NonConvergenceError&) {
        if (depth >= 10) throw;
    }
    const double m = 0.5 * (a + b);
    const auto left = integrate(f, a, m, rel_tol, depth + 1);
    const auto right = integrate(f, m, b, rel_tol, depth + 1);
    return {left.value + right.value, left.error + right.error, std::max(left.order, right.order)};
}

double bisect_to_precision(const std::function<double(double)>& f, double lo, double hi) {
    return numerics::bisect(f, lo, hi, 0.0, 2000).x;
}

// Smooth quotient G = g / ((rho - t1)(t2 - rho)), using the endpoint slopes
// where the direct ratio loses precision.
struct Quotient {
    const PotentialSpec& pot;
    double eps;
    double coef;
    double t1;
    double t2;
    double slope1;
    double slope2;

    Quotient(const PotentialSpec& p, double e, double c, double a, double b)
        : pot(p), eps(e), coef(c), t1(a), t2(b) {
        slope1 = radial_g_derivative(pot, eps, coef, t1);
        slope2 = radial_g_derivative(pot, eps, coef, t2);
    }

    double operator()(double rho) const {
        const double d = t2 - t1;
        const double a = rho - t1;
        const double b = t2 - rho;
        if (a < 1e-14 * d) return slope1 / d;
        if (b < 1e-14 * d) return -slope2 / d;
        const double g = a <= b ? radial_g_increment(pot, eps, t1, a) : radial_g_increment(pot, eps, t2, -b);
        return g / (a * b);
    }
};

double log_sin(double phi) {
    if (phi < 0.25 * kPi) return std::log(std::sin(phi));
    const double c = std::cos(phi);
    return 0.5 * std::log1p(-c * c);
}

}  // namespace

double quantum_phase(QuantizationRule rule, int n) {
    if (n < 1) throw DomainError("quantisation index n must be >= 1");
    return (n - (rule == QuantizationRule::langer ? 0.5 : 0.25)) * kPi;
}

double radial_g(const PotentialSpec& pot, double eps, double coef, double rho) {
    return eps * rho * rho - pot.rho2_value(rho) - coef;
}

double radial_g_increment(const PotentialSpec& pot, double eps, double base, double delta) {
    if (pot.is_power_law() && base > 0.0) {
        const double k = pot.exponent() + 2.0;
        const double s = pot.is_confining_power() ? 1.0 : -1.0;
        const double dpow = std::pow(base, k) * std::expm1(k * std::log1p(delta / base));
        return eps * delta * (2.0 * base + delta) - s * dpow;
    }
    return radial_g(pot, eps, 0.0, base + delta) - radial_g(pot, eps, 0.0, base);
}

double radial_g_derivative(const PotentialSpec& pot, double eps, double coef, double rho) {
    (void)coef;
    if (pot.is_power_law()) {
        const double nu = pot.exponent();
        const double s = pot.is_confining_power() ? 1.0 : -1.0;
        return 2.0 * eps * rho - s * (nu + 2.0) * std::pow(rho, nu + 1.0);
    }
    const double h = 1e-5 * rho;
    return (radial_g(pot, eps, 0.0, rho + h) - radial_g(pot, eps, 0.0, rho - h)) / (2.0 * h);
}

TurningPoints turning_points(const PotentialSpec& pot, double eps, const Centrifugal& cf) {
    const double coef = cf.coefficient();
    if (!(coef >= 0.0)) throw DomainError("turning_points: centrifugal coefficient must be >= 0");
    if (pot.is_hard_sphere()) throw ArgumentError("turning_points: hard sphere has no smooth turning point");
    auto g = [&](double r) { return radial_g(pot, eps, coef, r); };
    auto no_region = [&]() {
        std::ostringstream os;
        os << "no classical region for " << pot.describe() << " at eps=" << eps << ", "
           << to_string(cf.convention) << " l=" << cf.l;
        return NoClassicalRegionError(os.str());
    };

    if (pot.is_power_law()) {
        const double nu = pot.exponent();
        const double k = nu + 2.0;
        const double leff = coef + pot.inverse_square();
        if (leff < 0.0) throw DomainError("turning_points: attractive inverse-square term");
        double rstar = 0.0;
        if (pot.is_confining_power()) {
            if (!(eps > 0.0)) throw no_region();
            rstar = std::pow(2.0 * eps / k, 1.0 / nu);
        } else {
            if (!(eps < 0.0)) throw DomainError("turning_points: eps >= 0 gives an unbounded orbit on the singular branch");
            rstar = std::pow(-2.0 * eps / k, 1.0 / nu);
        }
        if (leff == 0.0) {
            const double t2 = std::pow(std::abs(eps), 1.0 / nu);
            return {0.0, t2};
        }
        const double gmax = g(rstar);
        const double scale = std::abs(eps) * rstar * rstar + std::pow(rstar, k) + leff;
        if (gmax < -1e-14 * scale) throw no_region();
        if (gmax <= 1e-14 * scale) return {rstar, rstar};
        double lo = 0.5 * rstar;
        for (int it = 0; g(lo) >= 0.0; ++it) {
            if (it > 3000) throw BracketError("turning_points: inner bracket");
            lo *= 0.5;
        }
        double hi = 2.0 * rstar;
        for (int it = 0; g(hi) >= 0.0; ++it) {
            if (it > 3000) throw BracketError("turning_points: outer bracket");
            hi *= 2.0;
        }
        return {bisect_to_precision(g, lo, std::min(2.0 * lo, rstar)),
                bisect_to_precision(g, std::max(0.5 * hi, rstar), hi)};
    }

    // tabulated or callable: scan ln(rho)
    double r_hi = 1e4;
    if (pot.is_tabulated()) r_hi = std::get<Tabulated>(pot.shape()).rho.back();
    constexpr int kScan = 4000;
    const double x0 = std::log(1e-8);
    const double x1 = std::log(r_hi);
    std::vector<double> gs(kScan);
    int imax = 0;
    for (int i = 0; i < kScan; ++i) {
        gs[i] = g(std::exp(x0 + (x1 - x0) * i / (kScan - 1.0)));
        if (gs[i] > gs[imax]) imax = i;
    }
    if (!(gs[imax] > 0.0)) throw no_region();
    auto at = [&](int i) { return std::exp(x0 + (x1 - x0) * i / (kScan - 1.0)); };
    int il = imax;
    while (il > 0 && gs[il] > 0.0) --il;
    int ir = imax;
    while (ir < kScan - 1 && gs[ir] > 0.0) ++ir;
    if (gs[ir] > 0.0) throw DomainError("turning_points: classical region is unbounded");
    TurningPoints tp;
    if (gs[il] > 0.0) {
        if (coef > 0.0) throw DomainError("turning_points: classical region reaches the origin");
        tp.t1 = 0.0;
    } else {
        tp.t1 = bisect_to_precision(g, at(il), at(il + 1));
    }
    tp.t2 = bisect_to_precision(g, at(ir - 1), at(ir));
    return tp;
}

ActionResult action(const PotentialSpec& pot, double eps, const Centrifugal& cf, double rel_tol) {
    const TurningPoints tp = turning_points(pot, eps, cf);
    ActionResult res;
    res.t1 = tp.t1;
    res.t2 = tp.t2;
    if (tp.t1 == tp.t2) return res;
    const double coef = cf.coefficient();
    const double d = tp.t2 - tp.t1;

    std::function<double(double)> f;
    if (tp.t1 > 0.0) {
        f = [&, d](double phi) {
            const double s = std::sin(phi);
            const double c = std::cos(phi);
            const double rho = tp.t1 + d * s * s;
            return std::sqrt(std::max(radial_g(pot, eps, coef, rho), 0.0)) / rho * 2.0 * d * s * c;
        };
    } else {
        // rho = t2 sin^(2m) phi absorbs the rho^(nu/2) behaviour at the origin
        const double m = pot.is_singular_power() ? 2.0 / (pot.exponent() + 2.0) : 1.0;
        f = [&, m](double phi) {
            const double ls = log_sin(phi);
            const double rho = tp.t2 * std::exp(2.0 * m * ls);
            if (rho == 0.0) return 0.0;
            const double drho = 2.0 * m * rho / std::tan(phi);
            const double p2 = eps - pot.rho2_value(rho) / (rho * rho);
            return std::sqrt(std::max(p2, 0.0)) * drho;
        };
    }
    const auto q = integrate(f, 0.0, 0.5 * kPi, rel_tol);
    res.S = q.value;
    res.quad_error = q.error;
    return res;
}

double action_derivative(const PotentialSpec& pot, double eps, const Centrifugal& cf) {
    const TurningPoints tp = turning_points(pot, eps, cf);
    if (tp.t1 == tp.t2) throw DomainError("action_derivative: zero-width classical region");
    const double coef = cf.coefficient();
    if (tp.t1 > 0.0) {
        const Quotient G(pot, eps, coef, tp.t1, tp.t2);
        const double d = tp.t2 - tp.t1;
        auto f = [&](double phi) {
            const double s = std::sin(phi);
            const double rho = tp.t1 + d * s * s;
            return rho / std::sqrt(G(rho));
        };
        return integrate(f, 0.0, 0.5 * kPi, 1e-12).value;
    }
    const double m = pot.is_singular_power() ? 2.0 / (pot.exponent() + 2.0) : 1.0;
    const double slope2 = radial_g_derivative(pot, eps, coef, tp.t2);
    auto f = [&](double phi) {
        const double ls = log_sin(phi);
        const double rho = tp.t2 * std::exp(2.0 * m * ls);
        if (rho == 0.0) return 0.0;
        const double c = std::cos(phi);
        const double one_minus = -std::expm1(m * std::log1p(-c * c));  // 1 - sin^(2m)
        const double b = tp.t2 - rho;
        const double G = b < 1e-7 * tp.t2 ? -slope2 / tp.t2 : (eps * rho - pot.rho2_value(rho) / rho) / b;
        return m * rho * std::exp((m - 1.0) * ls) * c / (std::sqrt(G) * std::sqrt(one_minus));
    };
    return integrate(f, 0.0, 0.5 * kPi, 1e-12).value;
}

namespace {

double minimum_veff(const PotentialSpec& pot, double coef) {
    if (pot.is_power_law()) {
        const double nu = pot.exponent();
        const double leff = coef + pot.inverse_square();
        if (leff == 0.0) return pot.is_confining_power() ? 0.0 : -std::numeric_limits<double>::infinity();
        const double rm = std::pow(2.0 * leff / std::abs(nu), 1.0 / (nu + 2.0));
        return (pot.rho2_value(rm) + coef) / (rm * rm);
    }
    double r_hi = pot.is_tabulated() ? std::get<Tabulated>(pot.shape()).rho.back() : 1e4;
    double vmin = std::numeric_limits<double>::infinity();
    constexpr int kScan = 4000;
    const double x0 = std::log(1e-8);
    const double x1 = std::log(r_hi);
    for (int i = 0; i < kScan; ++i) {
        const double r = std::exp(x0 + (x1 - x0) * i / (kScan - 1.0));
        vmin = std::min(vmin, (pot.rho2_value(r) + coef) / (r * r));
    }
    return vmin;
}

}  // namespace

double quantize(const PotentialSpec& pot, const Centrifugal& cf, int n, QuantizationRule rule) {
    const double target = quantum_phase(rule, n);
    auto h = [&](double e) {
        try {
            return action(pot, e, cf).S - target;
        } catch (const NoClassicalRegionError&) {
            return -target;
        }
    };
    const double coef = cf.coefficient();
    const double emin = minimum_veff(pot, coef);
    const bool singular = pot.is_singular_power();
    double lo = emin;
    double hi = 0.0;
    if (singular) {
        if (!std::isfinite(lo)) {
            lo = -1.0;
            for (int it = 0; h(lo) >= 0.0; ++it) {
                if (it > 200) throw BracketError("quantize: lower bracket");
                lo *= 2.0;
            }
        }
        hi = 0.5 * lo;
        for (int it = 0; h(hi) <= 0.0; ++it) {
            if (it > 1000) throw BracketError("quantize: no level below the continuum");
            hi *= 0.5;
        }
    } else {
        const double width0 = std::max(1.0, std::abs(emin));
        hi = emin + width0;
        for (int it = 0; h(hi) <= 0.0; ++it) {
            if (it > 200) throw BracketError("quantize: upper bracket");
            hi = emin + 2.0 * (hi - emin);
        }
    }
    const auto r = numerics::secant_bracketed(
        h, lo, hi, 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)),
        1e-12 * target, 400);
    if (!(std::abs(r.fx) < 1e-9)) {
        std::ostringstream os;
        os << "quantize: |S - target| = " << std::abs(r.fx) << " at eps=" << r.x;
        throw NonConvergenceError(os.str());
    }
    return r.x;
}

double a1(double nu) {
    if (!(nu > 0.0)) throw DomainError("a1: requires nu > 0");
    return std::sqrt(kPi) * (2.0 + nu) * specfun::gamma(0.5 + 1.0 / nu) / specfun::gamma(1.0 / nu);
}

double a2(double nu) {
    if (!(nu > -2.0 && nu < 0.0)) throw DomainError("a2: requires -2 < nu < 0");
    return 2.0 * std::sqrt(kPi) * specfun::gamma(-1.0 / nu) / specfun::gamma(-0.5 - 1.0 / nu);
}

double wkb_energy_closed_form(Branch branch, int n, double l, double nu) {
    if (n < 1) throw DomainError("wkb_energy_closed_form: n must be >= 1");
    const double p = 2.0 * nu / (2.0 + nu);
    if (branch == Branch::confining) {
        const double base = a1(nu) * (n + 0.5 * l - 0.25);
        if (!(base > 0.0)) throw DomainError("wkb_energy_closed_form: non-positive base");
        return std::pow(base, p);
    }
    const double base = a2(nu) * (n - 0.5 * (1.0 + nu - 2.0 * l) / (2.0 + nu));
    if (!(base > 0.0)) throw DomainError("wkb_energy_closed_form: non-positive base");
    return -std::pow(base, p);
}

ActionMap map_action_parameters(double nu2, double eps2, const Centrifugal& cf2) {
    if (!(nu2 > -2.0 && nu2 < 0.0)) throw DomainError("action_equality: requires -2 < nu2 < 0");
    if (!(eps2 < 0.0)) throw DomainError("action_equality: requires eps2 < 0");
    ActionMap m;
    m.nu1 = -2.0 * nu2 / (2.0 + nu2);
    m.eps1 = std::pow(-1.0 / eps2, 0.5 * (2.0 + nu2)) * std::pow(0.5 * (2.0 + nu2), nu2);
    m.coef1 = 4.0 * cf2.coefficient() / ((2.0 + nu2) * (2.0 + nu2));
    return m;
}

ActionEquality action_equality(double nu2, double eps2, const Centrifugal& cf2) {
    const ActionMap m = map_action_parameters(nu2, eps2, cf2);
    ActionEquality out;
    out.s_singular = action(PotentialSpec::singular(nu2), eps2, cf2).S;
    out.nu1 = m.nu1;
    out.eps1 = m.eps1;
    out.coef1 = m.coef1;
    out.s_confining = action(PotentialSpec::confining(m.nu1), m.eps1, classical(std::sqrt(m.coef1))).S;
    out.residual = std::abs(out.s_confining - out.s_singular) / out.s_singular;
    return out;
}

double verify_action_equality(double nu2, double eps2, const Centrifugal& cf2) {
    return action_equality(nu2, eps2, cf2).residual;
}

}  // namespace powerdual::wkb
