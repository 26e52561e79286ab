#include "powerdual/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "powerdual/errors.hpp"

namespace powerdual {

double Centrifugal::coefficient() const {
    switch (convention) {
        case Convention::quantum: return l * (l + 1.0);
        case Convention::langer: return (l + 0.5) * (l + 0.5);
        case Convention::classical: return l * l;
    }
    return 0.0;
}

std::string to_string(Convention c) {
    switch (c) {
        case Convention::quantum: return "quantum";
        case Convention::langer: return "langer";
        case Convention::classical: return "classical";
    }
    return "?";
}

void PhysicalParams::validate() const {
    if (!(hbar > 0.0)) throw DomainError("PhysicalParams: hbar must be > 0");
    if (!(mass > 0.0)) throw DomainError("PhysicalParams: mass must be > 0");
    if (!(coupling > 0.0)) throw DomainError("PhysicalParams: coupling must be > 0");
    if (!(exponent > -2.0) || exponent == 0.0)
        throw DomainError("PhysicalParams: exponent must lie in (-2, 0) U (0, inf)");
}

// --- PotentialSpec -----------------------------------------------------------

PotentialSpec PotentialSpec::confining(double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("confining power requires nu > 0");
    return PotentialSpec(ConfiningPower{nu});
}

PotentialSpec PotentialSpec::singular(double nu) {
    if (!(nu > -2.0 && nu < 0.0)) throw DomainError("singular power requires -2 < nu < 0");
    return PotentialSpec(SingularPower{nu});
}

PotentialSpec PotentialSpec::hard_sphere() { return PotentialSpec(HardSphere{}); }

PotentialSpec PotentialSpec::tabulated(std::vector<double> rho, std::vector<double> values) {
    if (rho.size() != values.size() || rho.size() < 3)
        throw ArgumentError("tabulated potential needs >= 3 matching samples");
    std::vector<double> x(rho.size());
    std::vector<double> y(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!(rho[i] > 0.0)) throw ArgumentError("tabulated potential: rho must be > 0");
        if (!std::isfinite(values[i])) throw ArgumentError("tabulated potential: non-finite value");
        x[i] = std::log(rho[i]);
        y[i] = rho[i] * rho[i] * values[i];
    }
    auto spline = std::make_shared<const numerics::CubicSpline>(std::move(x), std::move(y));
    return PotentialSpec(Tabulated{std::move(rho), std::move(values), std::move(spline)});
}

PotentialSpec PotentialSpec::callable(std::function<double(double)> fn, std::string name) {
    if (!fn) throw ArgumentError("callable potential: empty function");
    return PotentialSpec(Callable{std::move(fn), std::move(name)});
}

PotentialSpec PotentialSpec::with_inverse_square(double c) const {
    PotentialSpec p = *this;
    p.inverse_square_ = c;
    return p;
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

double PotentialSpec::rho2_shape(double rho) const {
    return std::visit(
        overloaded{
            [&](const ConfiningPower& s) { return std::pow(rho, s.nu + 2.0); },
            [&](const SingularPower& s) { return -std::pow(rho, s.nu + 2.0); },
            [&](const HardSphere&) { return 0.0; },
            [&](const Tabulated& s) {
                const double x = std::log(rho);
                if (x <= s.spline->x_front()) return (*s.spline)(s.spline->x_front());
                if (x >= s.spline->x_back()) {
                    const double xb = s.spline->x_back();
                    return (*s.spline)(xb) * std::exp(2.0 * (x - xb));
                }
                return (*s.spline)(x);
            },
            [&](const Callable& s) { return rho * rho * s.fn(rho); },
        },
        shape_);
}

double PotentialSpec::rho2_value(double rho) const { return rho2_shape(rho) + inverse_square_; }

double PotentialSpec::operator()(double rho) const {
    return std::visit(overloaded{
                          [&](const ConfiningPower& s) { return std::pow(rho, s.nu); },
                          [&](const SingularPower& s) { return -std::pow(rho, s.nu); },
                          [&](const HardSphere&) { return 0.0; },
                          [&](const Tabulated&) { return rho2_shape(rho) / (rho * rho); },
                          [&](const Callable& s) { return s.fn(rho); },
                      },
                      shape_) +
           inverse_square_ / (rho * rho);
}

bool PotentialSpec::is_power_law() const { return is_confining_power() || is_singular_power(); }
bool PotentialSpec::is_confining_power() const { return std::holds_alternative<ConfiningPower>(shape_); }
bool PotentialSpec::is_singular_power() const { return std::holds_alternative<SingularPower>(shape_); }
bool PotentialSpec::is_hard_sphere() const { return std::holds_alternative<HardSphere>(shape_); }
bool PotentialSpec::is_tabulated() const { return std::holds_alternative<Tabulated>(shape_); }

double PotentialSpec::exponent() const {
    if (const auto* c = std::get_if<ConfiningPower>(&shape_)) return c->nu;
    if (const auto* s = std::get_if<SingularPower>(&shape_)) return s->nu;
    throw ArgumentError("exponent(): potential is not a power law");
}

std::string PotentialSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const ConfiningPower& s) { os << "rho^" << s.nu; },
                   [&](const SingularPower& s) { os << "-rho^" << s.nu; },
                   [&](const HardSphere&) { os << "hard-sphere(1)"; },
                   [&](const Tabulated& s) { os << "tabulated(" << s.rho.size() << ")"; },
                   [&](const Callable& s) { os << s.name; },
               },
               shape_);
    if (inverse_square_ != 0.0) os << " + " << inverse_square_ << "/rho^2";
    return os.str();
}

// --- DualPair ----------------------------------------------------------------

double DualPair::map_energy(double eps1) const {
    if (!(eps1 > 0.0)) throw DomainError("map_energy: eps1 must be > 0");
    return -energy_map.factor * std::pow(eps1, -energy_map.power);
}

void DualPair::validate(double tol) const {
    const double cond = (nu1 + 2.0) * (nu2 + 2.0) - 4.0;
    if (std::abs(cond) > tol * 4.0)
        throw DomainError("DualPair: (nu1+2)(nu2+2) != 4");
    if (!(nu1 > 0.0) || !(nu2 < 0.0 && nu2 > -2.0))
        throw DomainError("DualPair: exponents outside their branches");
    const double scale = std::max({1.0, std::abs(l1 * nu2), std::abs(l2 * nu1)});
    if (convention == AngularMap::quantum) {
        if (std::abs((l1 + 0.5) * nu2 + (l2 + 0.5) * nu1) > tol * scale)
            throw DomainError("DualPair: (l1+1/2) nu2 != -(l2+1/2) nu1");
    } else {
        if (std::abs(nu1 * l2 + nu2 * l1) > tol * scale)
            throw DomainError("DualPair: nu1 l2 != -nu2 l1");
    }
}

namespace core {

namespace {
void check_exponent(double nu, const char* what) {
    if (!std::isfinite(nu) || !(nu > -2.0) || nu == 0.0) {
        std::ostringstream os;
        os << what << ": exponent " << nu << " outside (-2, 0) U (0, inf)";
        throw DomainError(os.str());
    }
}
}  // namespace

double exponent_dual(double nu1) {
    check_exponent(nu1, "exponent_dual");
    return -2.0 * nu1 / (2.0 + nu1);
}

double angular_dual(double l1, double nu1, AngularMap convention) {
    const double nu2 = exponent_dual(nu1);
    if (convention == AngularMap::quantum) return -(nu2 / nu1) * (l1 + 0.5) - 0.5;
    return -(nu2 / nu1) * l1;
}

double energy_dual(double eps1, double nu1) {
    if (!(nu1 > 0.0)) throw DomainError("energy_dual: nu1 must be > 0");
    if (!(eps1 > 0.0)) throw DomainError("energy_dual: eps1 must be > 0 (bound-state correspondence)");
    const double nu2 = exponent_dual(nu1);
    const double base = std::sqrt((nu1 + 2.0) / (nu2 + 2.0)) * std::pow(eps1, 1.0 / nu2);
    return -std::pow(base, nu1);
}

double energy_dual_inverse(double eps2, double nu2) {
    if (!(nu2 < 0.0 && nu2 > -2.0)) throw DomainError("energy_dual_inverse: nu2 must lie in (-2, 0)");
    if (!(eps2 < 0.0)) throw DomainError("energy_dual_inverse: eps2 must be < 0");
    const double nu1 = exponent_dual(nu2);
    const double base = std::sqrt((nu2 + 2.0) / (nu1 + 2.0)) * std::pow(-eps2, 1.0 / nu1);
    return std::pow(base, nu2);
}

double energy_dual_scaling_form(double eps1, double nu1) {
    if (!(eps1 > 0.0) || !(nu1 > 0.0)) throw DomainError("energy_dual_scaling_form: eps1, nu1 must be > 0");
    const double nu2 = exponent_dual(nu1);
    return -std::pow(eps1, nu1 / nu2) * std::pow(-nu1 / nu2, nu1);
}

double energy_dual_action_form(double eps1, double nu1) {
    if (!(eps1 > 0.0) || !(nu1 > 0.0)) throw DomainError("energy_dual_action_form: eps1, nu1 must be > 0");
    return -std::pow(1.0 / eps1, 0.5 * (2.0 + nu1)) * std::pow(0.5 * (2.0 + nu1), nu1);
}

double spectral_residual(double eps1, double eps2, double nu1, double nu2) {
    if (std::abs((nu1 + 2.0) * (nu2 + 2.0) - 4.0) > 1e-9)
        throw DomainError("spectral_residual: (nu1+2)(nu2+2) = 4 violated");
    if (!(eps1 > 0.0) || !(eps2 < 0.0))
        throw DomainError("spectral_residual: requires eps1 > 0 and eps2 < 0");
    const double lhs = std::sqrt(nu1 + 2.0) * std::pow(eps1, 1.0 / nu2);
    const double rhs = std::sqrt(nu2 + 2.0) * std::pow(-eps2, 1.0 / nu1);
    return lhs - rhs;
}

double log_form_residual(double eps1, double eps2, double nu1, double nu2) {
    const double lhs = nu1 * std::log(std::abs(eps1)) - nu1 * nu1 / (nu1 + 2.0) * std::log(nu1 + 2.0);
    const double rhs = nu2 * std::log(std::abs(eps2)) - nu2 * nu2 / (nu2 + 2.0) * std::log(nu2 + 2.0);
    return lhs - rhs;
}

DualPair make_pair(double nu1, double l1, AngularMap convention) {
    if (!(nu1 > 0.0)) throw DomainError("make_pair: nu1 must be > 0");
    if (!(l1 >= 0.0)) throw DomainError("make_pair: l1 must be >= 0");
    DualPair p;
    p.nu1 = nu1;
    p.nu2 = exponent_dual(nu1);
    p.l1 = l1;
    p.l2 = angular_dual(l1, nu1, convention);
    p.convention = convention;
    p.energy_map.power = -nu1 / p.nu2;
    p.energy_map.factor = std::pow(-nu1 / p.nu2, nu1);
    return p;
}

DualPair integer_pair(int l1, int l2) {
    if (l2 < 0 || l1 <= l2) throw ArgumentError("integer_pair: requires l1 > l2 >= 0");
    DualPair p;
    p.nu1 = 4.0 * (l1 - l2) / (2.0 * l2 + 1.0);
    p.nu2 = -4.0 * (l1 - l2) / (2.0 * l1 + 1.0);
    p.l1 = l1;
    p.l2 = l2;
    p.convention = AngularMap::quantum;
    const double ratio = (2.0 * l1 + 1.0) / (2.0 * l2 + 1.0);
    p.energy_map.power = ratio;
    p.energy_map.factor = std::pow(ratio, p.nu1);
    return p;
}

std::vector<DualPair> enumerate_integer_pairs(int l1_max) {
    if (l1_max < 1) throw ArgumentError("enumerate_integer_pairs: l1_max must be >= 1");
    std::vector<DualPair> out;
    for (int l1 = 1; l1 <= l1_max; ++l1)
        for (int l2 = 0; l2 < l1; ++l2) out.push_back(integer_pair(l1, l2));
    return out;
}

Scales scale_to_dimensionless(const PhysicalParams& p) {
    p.validate();
    const double base = p.hbar * p.hbar / (2.0 * p.mass * p.coupling);
    Scales s;
    s.length = std::pow(base, 1.0 / (p.exponent + 2.0));
    s.energy = p.hbar * p.hbar / (2.0 * p.mass * s.length * s.length);
    return s;
}

}  // namespace core
}  // namespace powerdual
