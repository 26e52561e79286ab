#pragma once

// Semiclassical radial actions S = int sqrt(eps - V - L/rho^2) drho between
// turning points, quantisation, and the closed-form power-law spectra.

#include "powerdual/core.hpp"

namespace powerdual::wkb {

struct TurningPoints {
    double t1 = 0.0;
    double t2 = 0.0;
};

struct ActionResult {
    double S = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double quad_error = 0.0;
};

/// S = (n - 1/2) pi (Langer form, exact for the oscillator and Coulomb
/// problems) or S = (n - 1/4) pi (hard wall at the inner turning point).
enum class QuantizationRule { langer, hard_wall };

double quantum_phase(QuantizationRule rule, int n);

/// g(rho) = rho^2 (eps - V(rho)) - L, whose zeros are the turning points.
double radial_g(const PotentialSpec& pot, double eps, double coef, double rho);
/// g(base + delta) - g(base) without cancellation for power laws.
double radial_g_increment(const PotentialSpec& pot, double eps, double base, double delta);
double radial_g_derivative(const PotentialSpec& pot, double eps, double coef, double rho);

/// Outer and inner zeros of eps - V - L/rho^2. With coefficient 0 and a
/// potential that allows it, t1 = 0. A zero-width region returns t1 == t2.
TurningPoints turning_points(const PotentialSpec& pot, double eps, const Centrifugal& cf);

ActionResult action(const PotentialSpec& pot, double eps, const Centrifugal& cf,
                    double rel_tol = 1e-12);

/// dS/deps = (1/2) int drho / sqrt(p^2).
double action_derivative(const PotentialSpec& pot, double eps, const Centrifugal& cf);

/// Energy with S(eps) = quantum_phase(rule, n), n >= 1.
double quantize(const PotentialSpec& pot, const Centrifugal& cf, int n,
                QuantizationRule rule = QuantizationRule::langer);

enum class Branch { confining, singular };

/// sqrt(pi) (2 + nu) Gamma(1/2 + 1/nu) / Gamma(1/nu), nu > 0.
double a1(double nu);
/// 2 sqrt(pi) Gamma(-1/nu) / Gamma(-1/2 - 1/nu), -2 < nu < 0.
double a2(double nu);

/// confining: [A1 (n + l/2 - 1/4)]^(2nu/(2+nu));
/// singular: -[A2 (n - (1 + nu - 2l) / (2 (2 + nu)))]^(2nu/(2+nu)).
double wkb_energy_closed_form(Branch branch, int n, double l, double nu);

struct ActionEquality {
    double s_singular = 0.0;
    double s_confining = 0.0;
    double nu1 = 0.0;
    double eps1 = 0.0;
    double coef1 = 0.0;
    double residual = 0.0;  ///< |S1 - S2| / S2
};

struct ActionMap {
    double nu1 = 0.0;
    double eps1 = 0.0;
    double coef1 = 0.0;  ///< centrifugal coefficient L1
};

/// nu1 = -2 nu2/(2 + nu2), eps1 = (-1/eps2)^((2+nu2)/2) ((2+nu2)/2)^nu2,
/// sqrt(L1) = 2 sqrt(L2)/(2 + nu2).
ActionMap map_action_parameters(double nu2, double eps2, const Centrifugal& cf2);

/// Actions of both sides of map_action_parameters.
ActionEquality action_equality(double nu2, double eps2, const Centrifugal& cf2);
double verify_action_equality(double nu2, double eps2, const Centrifugal& cf2);

}  // namespace powerdual::wkb
