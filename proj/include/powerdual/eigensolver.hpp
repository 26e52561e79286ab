#pragma once

// Bound states of the dimensionless radial equation
//   u'' + (eps - V(rho) - l(l+1)/rho^2) u = 0,   u(0) = u(inf) = 0,
// solved by Numerov shooting on a log-uniform grid.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powerdual/core.hpp"

namespace powerdual::eigen {

enum class Spacing { uniform, log_uniform };

class RadialGrid {
public:
    static constexpr std::size_t kMinPoints = 512;

    static RadialGrid uniform(double rho_min, double rho_max, std::size_t n);
    static RadialGrid log_uniform(double rho_min, double rho_max, std::size_t n);

    std::span<const double> points() const { return points_; }
    double operator[](std::size_t i) const { return points_[i]; }
    std::size_t size() const { return points_.size(); }
    Spacing spacing() const { return spacing_; }
    double rho_min() const { return points_.front(); }
    double rho_max() const { return points_.back(); }
    /// Step in rho (uniform) or in ln(rho) (log-uniform).
    double step() const { return step_; }
    /// The same interval with the step halved (2n - 1 points).
    RadialGrid refined() const;

private:
    RadialGrid(std::vector<double> pts, Spacing s, double step)
        : points_(std::move(pts)), spacing_(s), step_(step) {}

    std::vector<double> points_;
    Spacing spacing_ = Spacing::log_uniform;
    double step_ = 0.0;
};

struct SolverOptions {
    double tol = 1e-10;               ///< bound on the matching-derivative defect
    double rho_min = 1e-6;
    std::optional<double> rho_max;    ///< overrides the adaptive outer radius
    double step = 1.0 / 512.0;        ///< largest allowed ln(rho) step
    double tail_action = 40.0;        ///< decay exponent required beyond the outer turning point
    bool richardson = true;           ///< extrapolate eps from grids h and h/2
    int max_iterations = 300;
    std::optional<RadialGrid> grid;   ///< fixed log-uniform grid (disables adaptivity)
};

struct RadialSolution {
    double eps = 0.0;
    int nodes = 0;
    double l = 0.0;
    RadialGrid grid = RadialGrid::log_uniform(1e-6, 1.0, RadialGrid::kMinPoints);
    std::vector<double> u;  ///< normalised, u > 0 near the origin
    double norm = 1.0;      ///< integral of u^2 after normalisation

    // diagnostics
    double eps_grid = 0.0;         ///< eigenvalue on `grid` before extrapolation
    double matching_defect = 0.0;  ///< |defect| at eps_grid
    std::size_t matching_index = 0;
    double tail_ratio = 0.0;       ///< |u| one point before rho_max over max |u|
    std::string potential;

    /// d ln u / d ln rho fitted over the first few grid points.
    double origin_log_slope() const;
};

RadialSolution solve_radial(const PotentialSpec& pot, double l, int nodes,
                            const SolverOptions& opts = {});

/// Solutions with node counts 0 .. n_max-1.
std::vector<RadialSolution> spectrum(const PotentialSpec& pot, double l, int n_max,
                                     const SolverOptions& opts = {});

/// A log-uniform grid adequate for all states of `pot` at `l` with up to
/// `max_nodes` nodes; pass it through SolverOptions::grid to share a workspace.
RadialGrid shared_grid(const PotentialSpec& pot, double l, int max_nodes,
                       const SolverOptions& opts = {});

// --- closed forms ------------------------------------------------------------

enum class ReferenceKind { oscillator, coulomb };

/// oscillator: 4n + 2l + 3;  coulomb: -1/(4 (n + l + 1)^2).
double reference_energy(ReferenceKind kind, int n, double l);

/// Unnormalised closed-form u(rho) at the quantised energy:
/// oscillator rho^(l+1) exp(-rho^2/2) M(-n, l+3/2, rho^2),
/// coulomb rho^(l+1) exp(-rho/(2(n+l+1))) M(-n, 2l+2, rho/(n+l+1)).
std::vector<double> closed_form_wavefunction(ReferenceKind kind, int n, double l,
                                             std::span<const double> rho);

// --- duality transform of wavefunctions ----------------------------------------

struct WavefunctionSamples {
    std::vector<double> rho;
    std::vector<double> u;
};

/// Maps a confining solution (nu1, l1 = sol.l, eps1 = sol.eps) to the dual
/// singular problem: rho1^nu1 = z^-nu2, z = a2 rho2, u2 = z^((nu1+nu2)/(2 nu1)) u1.
WavefunctionSamples transform_wavefunction(const RadialSolution& sol, double nu1);
WavefunctionSamples transform_wavefunction(const WavefunctionSamples& w, double nu1, double eps1);
/// Inverse of transform_wavefunction.
WavefunctionSamples inverse_transform_wavefunction(const WavefunctionSamples& dual, double nu1,
                                                   double eps1);

/// Unit L2 norm (trapezoid) and positive sign near the origin.
WavefunctionSamples normalized(WavefunctionSamples w);

/// max |w - direct| after interpolating `direct` onto w's abscissae. Below the
/// grid `direct` continues with its origin power law; samples carrying weight
/// (|u| > 1e-6 max|u|) beyond rho_max raise GridCoverageError.
double max_deviation(const WavefunctionSamples& w, const RadialSolution& direct);

// --- hard sphere ---------------------------------------------------------------

/// eps_n = (n-th zero of j_l)^2, n = 1..n_max.
std::vector<double> box_spectrum(int l, int n_max);

}  // namespace powerdual::eigen
