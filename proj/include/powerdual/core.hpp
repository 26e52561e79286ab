#pragma once

// Dimensionless power-law potentials and the exponent / angular-momentum /
// energy maps that pair a confining potential rho^nu1 with an attractive
// singular potential -rho^nu2, (nu1 + 2)(nu2 + 2) = 4.

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "powerdual/numerics.hpp"

namespace powerdual {

inline constexpr double kDefaultTolerance = 1e-10;

/// Form of the centrifugal term added to a radial problem.
enum class Convention {
    quantum,    ///< l(l+1)/rho^2
    langer,     ///< (l+1/2)^2/rho^2
    classical,  ///< l^2/rho^2
};

struct Centrifugal {
    double l = 0.0;
    Convention convention = Convention::quantum;

    double coefficient() const;
};

inline Centrifugal quantum(double l) { return {l, Convention::quantum}; }
inline Centrifugal langer(double l) { return {l, Convention::langer}; }
inline Centrifugal classical(double l) { return {l, Convention::classical}; }

std::string to_string(Convention c);

/// Physical constants of a power-law problem E u = -hbar^2/(2 mu) u'' + lambda r^nu u.
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 0.5;
    double coupling = 1.0;  ///< |lambda|
    double exponent = 2.0;  ///< nu

    void validate() const;
};

struct Scales {
    double length = 1.0;  ///< a
    double energy = 1.0;  ///< hbar^2 / (2 mu a^2)

    double to_dimensionless(double energy_value) const { return energy_value / energy; }
    double to_physical(double eps) const { return eps * energy; }
};

// --- potential shapes --------------------------------------------------------

struct ConfiningPower {
    double nu;
};
struct SingularPower {
    double nu;
};
struct HardSphere {};
/// Samples of V(rho) (without centrifugal term). Interpolated by a cubic spline
/// of rho^2 V in ln(rho); below the first sample rho^2 V is held constant.
struct Tabulated {
    std::vector<double> rho;
    std::vector<double> values;
    std::shared_ptr<const numerics::CubicSpline> spline;
};
struct Callable {
    std::function<double(double)> fn;
    std::string name;
};

using Shape = std::variant<ConfiningPower, SingularPower, HardSphere, Tabulated, Callable>;

/// A dimensionless radial potential V(rho), excluding the centrifugal term.
/// `inverse_square` adds c/rho^2 on top of the shape.
class PotentialSpec {
public:
    static PotentialSpec confining(double nu);
    static PotentialSpec singular(double nu);
    static PotentialSpec hard_sphere();
    static PotentialSpec tabulated(std::vector<double> rho, std::vector<double> values);
    static PotentialSpec callable(std::function<double(double)> fn, std::string name = "callable");

    PotentialSpec with_inverse_square(double c) const;

    double operator()(double rho) const;
    /// rho^2 V(rho); finite at the origin for every supported shape.
    double rho2_value(double rho) const;

    const Shape& shape() const { return shape_; }
    double inverse_square() const { return inverse_square_; }
    bool is_power_law() const;
    bool is_confining_power() const;
    bool is_singular_power() const;
    bool is_hard_sphere() const;
    bool is_tabulated() const;
    /// Exponent nu for power laws; throws otherwise.
    double exponent() const;
    std::string describe() const;

private:
    explicit PotentialSpec(Shape s) : shape_(std::move(s)) {}
    double rho2_shape(double rho) const;

    Shape shape_;
    double inverse_square_ = 0.0;
};

// --- duality maps --------------------------------------------------------------

enum class AngularMap { quantum, classical };

struct EnergyMap {
    double factor = 1.0;  ///< eps2 = -factor * eps1^(-power)
    double power = 1.0;
};

struct DualPair {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    AngularMap convention = AngularMap::quantum;
    EnergyMap energy_map;

    /// eps2 from eps1 using the stored energy map.
    double map_energy(double eps1) const;
    /// Throws DomainError when an invariant is violated beyond `tol`.
    void validate(double tol = kDefaultTolerance) const;
};

namespace core {

/// nu2 = -2 nu1 / (2 + nu1). Involutive on (-2, 0) U (0, inf).
double exponent_dual(double nu1);

/// Dual angular momentum. Quantum: (l1+1/2) nu2 = -(l2+1/2) nu1.
/// Classical: nu1 l2 = -nu2 l1.
double angular_dual(double l1, double nu1, AngularMap convention = AngularMap::quantum);

/// Singular-side energy of a confining level, from the symmetric relation
/// sqrt(nu1+2) eps1^(1/nu2) = sqrt(nu2+2) (-eps2)^(1/nu1).
double energy_dual(double eps1, double nu1);

/// Inverse of energy_dual: confining-side energy of a singular level.
double energy_dual_inverse(double eps2, double nu2);

/// Same map written through the rescaled coordinate z = a2 rho2:
/// eps2 = -eps1^(nu1/nu2) (-nu1/nu2)^nu1.
double energy_dual_scaling_form(double eps1, double nu1);

/// Same map written through the action-integral substitution:
/// eps2 = -(1/eps1)^((2+nu1)/2) ((2+nu1)/2)^nu1.
double energy_dual_action_form(double eps1, double nu1);

/// Left minus right side of the symmetric spectral relation.
double spectral_residual(double eps1, double eps2, double nu1, double nu2);

/// Residual of the logarithmic form
/// nu1 log|eps1| - nu1^2/(nu1+2) log(nu1+2) = nu2 log|eps2| - nu2^2/(nu2+2) log(nu2+2).
double log_form_residual(double eps1, double eps2, double nu1, double nu2);

/// The pair generated by the confining exponent nu1 at angular momentum l1.
DualPair make_pair(double nu1, double l1, AngularMap convention = AngularMap::quantum);

/// Pair with integer angular momenta l1 > l2 >= 0:
/// nu1 = 4(l1-l2)/(2 l2+1), nu2 = -4(l1-l2)/(2 l1+1).
DualPair integer_pair(int l1, int l2);

/// All integer pairs with 0 <= l2 < l1 <= l1_max, sorted by (l1, l2).
std::vector<DualPair> enumerate_integer_pairs(int l1_max);

Scales scale_to_dimensionless(const PhysicalParams& p);

}  // namespace core
}  // namespace powerdual
