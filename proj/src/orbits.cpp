#include "powerdual/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "powerdual/errors.hpp"
#include "powerdual/numerics.hpp"
#include "powerdual/wkb.hpp"

namespace powerdual::orbits {

namespace {

constexpr double kPi = std::numbers::pi;

// dtheta/dphi under rho = t1 + (t2 - t1) sin^2 phi.
class AngleIntegrand {
public:
    AngleIntegrand(const PotentialSpec& pot, double eps, double l, const wkb::TurningPoints& tp)
        : pot_(pot), eps_(eps), l_(l), t1_(tp.t1), t2_(tp.t2) {
        const double coef = l * l;
        slope1_ = wkb::radial_g_derivative(pot, eps, coef, t1_);
        slope2_ = wkb::radial_g_derivative(pot, eps, coef, t2_);
    }

    double rho(double phi) const {
        const double s = std::sin(phi);
        return t1_ + (t2_ - t1_) * s * s;
    }

    double operator()(double phi) const {
        const double d = t2_ - t1_;
        const double r = rho(phi);
        const double s = std::sin(phi);
        const double c = std::cos(phi);
        const double a = d * s * s;
        const double b = d * c * c;
        double G = 0.0;
        if (a < 1e-14 * d)
            G = slope1_ / d;
        else if (b < 1e-14 * d)
            G = -slope2_ / d;
        else
            G = (a <= b ? wkb::radial_g_increment(pot_, eps_, t1_, a) : wkb::radial_g_increment(pot_, eps_, t2_, -b)) /
                (a * b);
        return 2.0 * l_ / (r * std::sqrt(G));
    }

    double angle(double phi) const {
        if (phi <= 0.0) return 0.0;
        return numerics::integrate_gl(*this, 0.0, phi, 1e-14, 1e-15).value;
    }

private:
    const PotentialSpec& pot_;
    double eps_;
    double l_;
    double t1_;
    double t2_;
    double slope1_ = 0.0;
    double slope2_ = 0.0;
};

wkb::TurningPoints orbit_turning_points(const PotentialSpec& pot, double eps, double l) {
    if (!(l > 0.0)) throw DomainError("orbit: angular momentum must be > 0");
    const auto tp = wkb::turning_points(pot, eps, classical(l));
    if (tp.t1 == tp.t2) throw DomainError("orbit: circular orbit has no radial libration");
    return tp;
}

void check_confining(double nu1) {
    if (!(nu1 > 0.0) || !std::isfinite(nu1)) throw DomainError("orbit map: requires nu1 > 0");
}

}  // namespace

Apsides apsides(const PotentialSpec& pot, double eps, double l) {
    const auto tp = orbit_turning_points(pot, eps, l);
    return {tp.t1, tp.t2};
}

double orbit_angle(const PotentialSpec& pot, double eps, double l, double rho) {
    const auto tp = orbit_turning_points(pot, eps, l);
    if (rho < tp.t1 || rho > tp.t2) {
        std::ostringstream os;
        os << "orbit_angle: rho=" << rho << " outside [" << tp.t1 << ", " << tp.t2 << "]";
        throw DomainError(os.str());
    }
    const AngleIntegrand f(pot, eps, l, tp);
    const double phi = std::asin(std::sqrt(std::clamp((rho - tp.t1) / (tp.t2 - tp.t1), 0.0, 1.0)));
    return f.angle(phi);
}

double apsidal_angle(const PotentialSpec& pot, double eps, double l) {
    const auto tp = orbit_turning_points(pot, eps, l);
    return AngleIntegrand(pot, eps, l, tp).angle(0.5 * kPi);
}

double closed_orbit(ClosedKind kind, double theta, double eps, double l) {
    if (!(l > 0.0)) throw DomainError("closed_orbit: l must be > 0");
    if (kind == ClosedKind::oscillator) {
        const double disc = 1.0 - 4.0 * l * l / (eps * eps);
        if (!(eps > 0.0) || disc < -1e-15) throw DomainError("closed_orbit: oscillator requires eps >= 2l");
        const double inv2 = eps / (2.0 * l * l) * (1.0 - std::sqrt(std::max(disc, 0.0)) * std::cos(2.0 * theta));
        return 1.0 / std::sqrt(inv2);
    }
    const double disc = 1.0 + 4.0 * eps * l * l;
    if (disc < -1e-15) throw DomainError("closed_orbit: coulomb requires 1 + 4 eps l^2 >= 0");
    const double inv = (1.0 - std::sqrt(std::max(disc, 0.0)) * std::cos(theta)) / (2.0 * l * l);
    if (!(inv > 0.0)) throw DomainError("closed_orbit: unbound coulomb orbit at this angle");
    return 1.0 / inv;
}

double periapsis_phase(ClosedKind kind) { return kind == ClosedKind::oscillator ? 0.5 * kPi : kPi; }

double classical_energy_dual(double eps1, double nu1) {
    check_confining(nu1);
    if (!(eps1 > 0.0)) throw DomainError("classical_energy_dual: requires eps1 > 0");
    const double k = 0.5 * (2.0 + nu1);
    return -std::pow(k, nu1) * std::pow(eps1, -k);
}

double classical_angular_dual(double l1, double nu1) {
    check_confining(nu1);
    return 2.0 * l1 / (2.0 + nu1);
}

MappedPoint map_orbit_point(double rho1, double theta1, double nu1, double eps1, double l1) {
    check_confining(nu1);
    if (!(rho1 > 0.0)) throw DomainError("map_orbit_point: rho1 must be > 0");
    MappedPoint out;
    out.eps = classical_energy_dual(eps1, nu1);
    out.l = classical_angular_dual(l1, nu1);
    out.theta = 0.5 * (2.0 + nu1) * theta1;
    out.rho = 2.0 / (2.0 + nu1) / std::sqrt(-out.eps) * std::pow(rho1, 0.5 * (2.0 + nu1));
    return out;
}

MappedPoint inverse_map_orbit_point(double rho2, double theta2, double nu2, double eps2, double l2) {
    if (!(nu2 > -2.0 && nu2 < 0.0)) throw DomainError("inverse_map_orbit_point: requires -2 < nu2 < 0");
    if (!(eps2 < 0.0)) throw DomainError("inverse_map_orbit_point: requires eps2 < 0");
    if (!(rho2 > 0.0)) throw DomainError("inverse_map_orbit_point: rho2 must be > 0");
    const double nu1 = core::exponent_dual(nu2);
    const double k1 = 0.5 * (2.0 + nu1);
    MappedPoint out;
    out.eps = std::pow(std::pow(k1, nu1) / (-eps2), 1.0 / k1);
    out.l = 2.0 * l2 / (2.0 + nu2);
    out.theta = 0.5 * (2.0 + nu2) * theta2;
    out.rho = 2.0 / (2.0 + nu2) / std::sqrt(out.eps) * std::pow(rho2, 0.5 * (2.0 + nu2));
    return out;
}

ApsidalCheck apsidal_check(double nu1, double eps1, double l1) {
    check_confining(nu1);
    const double nu2 = core::exponent_dual(nu1);
    ApsidalCheck out;
    out.theta1 = apsidal_angle(PotentialSpec::confining(nu1), eps1, l1);
    out.theta2 = apsidal_angle(PotentialSpec::singular(nu2), classical_energy_dual(eps1, nu1),
                               classical_angular_dual(l1, nu1));
    out.ratio = out.theta2 / out.theta1;
    out.expected = -nu1 / nu2;
    return out;
}

OrbitTrace trace(const PotentialSpec& pot, double eps, double l, int samples) {
    if (samples < 5) throw ArgumentError("trace: need at least 5 samples");
    const auto tp = orbit_turning_points(pot, eps, l);
    const AngleIntegrand f(pot, eps, l, tp);
    const double aps = f.angle(0.5 * kPi);

    OrbitTrace out;
    out.eps = eps;
    out.l = l;
    out.potential = pot;
    out.periapsis = tp.t1;
    out.apoapsis = tp.t2;
    out.samples.resize(static_cast<std::size_t>(samples));

    auto invert = [&](double target) {
        if (target <= 0.0) return tp.t1;
        if (target >= aps) return tp.t2;
        double lo = 0.0;
        double hi = 0.5 * kPi;
        double phi = 0.5 * kPi * target / aps;
        for (int it = 0; it < 100; ++it) {
            const double r = f.angle(phi) - target;
            if (std::abs(r) <= 1e-15 * aps) break;
            if (r > 0.0) hi = phi; else lo = phi;
            double next = phi - r / f(phi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            const bool done = std::abs(next - phi) < 1e-14;
            phi = next;
            if (done) break;
        }
        return f.rho(phi);
    };
    const int last = samples - 1;
    for (int k = 0; k <= last; ++k) {
        const double theta = 2.0 * aps * k / last;
        out.samples[k] = {invert(theta <= aps ? theta : 2.0 * aps - theta), theta};
    }
    return out;
}

OrbitTrace map_trace(const OrbitTrace& confining) {
    if (!confining.potential.is_confining_power()) throw ArgumentError("map_trace: expects a confining trace");
    const double nu1 = confining.potential.exponent();
    OrbitTrace out;
    out.potential = PotentialSpec::singular(core::exponent_dual(nu1));
    out.eps = classical_energy_dual(confining.eps, nu1);
    out.l = classical_angular_dual(confining.l, nu1);
    out.samples.reserve(confining.samples.size());
    for (const auto& p : confining.samples) {
        const auto m = map_orbit_point(p.rho, p.theta, nu1, confining.eps, confining.l);
        out.samples.push_back({m.rho, m.theta});
    }
    out.periapsis = map_orbit_point(confining.periapsis, 0.0, nu1, confining.eps, confining.l).rho;
    out.apoapsis = map_orbit_point(confining.apoapsis, 0.0, nu1, confining.eps, confining.l).rho;
    return out;
}

OrbitTrace inverse_map_trace(const OrbitTrace& singular) {
    if (!singular.potential.is_singular_power()) throw ArgumentError("inverse_map_trace: expects a singular trace");
    const double nu2 = singular.potential.exponent();
    const double nu1 = core::exponent_dual(nu2);
    OrbitTrace out;
    out.potential = PotentialSpec::confining(nu1);
    out.samples.reserve(singular.samples.size());
    for (const auto& p : singular.samples) {
        const auto m = inverse_map_orbit_point(p.rho, p.theta, nu2, singular.eps, singular.l);
        out.samples.push_back({m.rho, m.theta});
        out.eps = m.eps;
        out.l = m.l;
    }
    out.periapsis = inverse_map_orbit_point(singular.periapsis, 0.0, nu2, singular.eps, singular.l).rho;
    out.apoapsis = inverse_map_orbit_point(singular.apoapsis, 0.0, nu2, singular.eps, singular.l).rho;
    return out;
}

double energy_residual(const OrbitTrace& t) {
    const auto& s = t.samples;
    if (s.size() < 5) throw ArgumentError("energy_residual: need at least 5 samples");
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < s.size(); ++i) {
        const double dth = (s[i + 2].theta - s[i - 2].theta) / 4.0;
        const double drho = (-s[i + 2].rho + 8.0 * s[i + 1].rho - 8.0 * s[i - 1].rho + s[i - 2].rho) / (12.0 * dth);
        const double r = s[i].rho;
        const double rdot = drho * t.l / (r * r);
        const double res = t.eps - rdot * rdot - t.l * t.l / (r * r) - t.potential(r);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

double closed_orbit_residual(const OrbitTrace& t, ClosedKind kind) {
    double worst = 0.0;
    for (const auto& p : t.samples) {
        const double r = closed_orbit(kind, p.theta + periapsis_phase(kind), t.eps, t.l);
        worst = std::max(worst, std::abs(p.rho - r) / p.rho);
    }
    return worst;
}

double classical_action(const PotentialSpec& pot, double eps, double l) {
    return wkb::action(pot, eps, classical(l)).S;
}

}  // namespace powerdual::orbits
