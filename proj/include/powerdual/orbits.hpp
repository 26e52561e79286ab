#pragma once

// Classical bound orbits in the dimensionless convention
//   eps = (drho/dt)^2 + l^2/rho^2 + V(rho),  dtheta/dt = l/rho^2.

#include <vector>

#include "powerdual/core.hpp"

namespace powerdual::orbits {

struct OrbitPoint {
    double rho = 0.0;
    double theta = 0.0;
};

struct OrbitTrace {
    std::vector<OrbitPoint> samples;
    double eps = 0.0;
    double l = 0.0;
    PotentialSpec potential = PotentialSpec::confining(2.0);
    double periapsis = 0.0;
    double apoapsis = 0.0;
};

inline constexpr int kDefaultTraceSamples = 721;

struct Apsides {
    double periapsis = 0.0;
    double apoapsis = 0.0;
};

Apsides apsides(const PotentialSpec& pot, double eps, double l);

/// theta(rho) = l int_peri^rho drho / (rho^2 sqrt(eps - l^2/rho^2 - V)), measured
/// from periapsis along the outgoing branch.
double orbit_angle(const PotentialSpec& pot, double eps, double l, double rho);

/// Angle swept from periapsis to apoapsis.
double apsidal_angle(const PotentialSpec& pot, double eps, double l);

enum class ClosedKind { oscillator, coulomb };

/// oscillator: 1/rho^2 = (eps/(2 l^2)) (1 - sqrt(1 - 4 l^2/eps^2) cos 2theta);
/// coulomb:    1/rho   = (1/(2 l^2)) (1 - sqrt(1 + 4 eps l^2) cos theta).
/// Both place theta = 0 at apoapsis.
double closed_orbit(ClosedKind kind, double theta, double eps, double l);

/// Offset between the closed-form phase and the periapsis phase of orbit_angle:
/// closed_orbit(kind, theta + periapsis_phase(kind), ...) has periapsis at theta = 0.
double periapsis_phase(ClosedKind kind);

struct MappedPoint {
    double rho = 0.0;
    double theta = 0.0;
    double l = 0.0;
    double eps = 0.0;
};

/// Confining point (nu1, eps1, l1) to the dual singular orbit:
/// rho2 = (2/(2+nu1)) (-eps2)^(-1/2) rho1^((2+nu1)/2), theta2 = (2+nu1) theta1 / 2,
/// l2 = 2 l1/(2+nu1), -eps2 = ((2+nu1)/2)^nu1 eps1^(-(2+nu1)/2).
MappedPoint map_orbit_point(double rho1, double theta1, double nu1, double eps1, double l1);

/// The same map read from the singular side (nu2, eps2 < 0, l2) back to the confining orbit.
MappedPoint inverse_map_orbit_point(double rho2, double theta2, double nu2, double eps2, double l2);

/// Classical dual energy and angular momentum of (nu1, eps1, l1).
double classical_energy_dual(double eps1, double nu1);
double classical_angular_dual(double l1, double nu1);

struct ApsidalCheck {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double ratio = 0.0;
    double expected = 0.0;  ///< -nu1/nu2
};

ApsidalCheck apsidal_check(double nu1, double eps1, double l1);

/// One radial libration periapsis -> apoapsis -> periapsis, uniform in theta.
OrbitTrace trace(const PotentialSpec& pot, double eps, double l, int samples = kDefaultTraceSamples);

/// Applies map_orbit_point to every sample of a confining trace.
OrbitTrace map_trace(const OrbitTrace& confining);

/// Applies inverse_map_orbit_point to every sample of a singular trace.
OrbitTrace inverse_map_trace(const OrbitTrace& singular);

/// max over interior samples of |eps - (drho/dt)^2 - l^2/rho^2 - V(rho)| with
/// drho/dt from five-point differences in theta.
double energy_residual(const OrbitTrace& t);

/// max over samples of |rho - closed_orbit(theta + periapsis_phase)| / rho.
double closed_orbit_residual(const OrbitTrace& t, ClosedKind kind);

/// Radial action with the classical l^2 term.
double classical_action(const PotentialSpec& pot, double eps, double l);

}  // namespace powerdual::orbits
