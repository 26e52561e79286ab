#pragma once

// Phase-equivalent shallow partners obtained by deleting the N lowest bound
// states of a deep potential:
//   V_shallow = V_deep - 2 d^2/drho^2 ln det M,  M_jk(rho) = int_0^rho R_j R_k.

#include <span>
#include <string>
#include <vector>

#include "powerdual/core.hpp"
#include "powerdual/eigensolver.hpp"

namespace powerdual::susy {

inline constexpr int kMaxRemoved = 4;

/// Running overlap matrices M(rho_i), row-major N x N per grid point.
struct GramSeries {
    eigen::RadialGrid grid = eigen::RadialGrid::log_uniform(1e-6, 1.0, eigen::RadialGrid::kMinPoints);
    int states = 0;
    std::vector<double> data;

    double operator()(std::size_t i, int j, int k) const {
        return data[(i * states + j) * states + k];
    }
    /// det M(rho_i) by pivoted elimination.
    double det(std::size_t i) const;
};

/// Eigenfunctions must share one grid and be orthonormal on it (|M(rho_max) - I| < 1e-6).
GramSeries gram_matrix(std::span<const eigen::RadialSolution> eigfuncs);

struct ShallowOptions {
    eigen::SolverOptions solver;
    double hadamard_floor = 1e-11;  ///< det M / prod M_jj below this marks the ill-conditioned core
    double fit_tolerance = 1e-2;   ///< relative rms residual allowed in the near-origin fit
};

struct ShallowPotential {
    eigen::RadialGrid grid = eigen::RadialGrid::log_uniform(1e-6, 1.0, eigen::RadialGrid::kMinPoints);
    std::vector<double> values;       ///< V_shallow including l(l+1)/rho^2
    std::vector<double> deep_values;  ///< V_deep including l(l+1)/rho^2
    int removed = 0;
    double l = 0.0;
    std::string parent;
    std::vector<double> removed_energies;

    std::size_t floor_index = 0;  ///< values below this index come from the fitted c/rho^2 + b + d rho^2 form
    double floor_radius = 0.0;
    double fit_c = 0.0;
    double fit_b = 0.0;
    double fit_d = 0.0;
    double fit_residual = 0.0;
    double fit_tolerance = 1e-2;

    /// Tabulated shape V_shallow - l(l+1)/rho^2, to be solved at the same l.
    PotentialSpec spec = PotentialSpec::confining(2.0);
};

ShallowPotential shallow_potential(const PotentialSpec& deep, int N, double l,
                                   const ShallowOptions& opts = {});

/// Least-squares fit rho^2 V_shallow = c + b rho^2 + d rho^4 over the decade above the
/// floor radius; returns c. Throws FitQualityError on a poor fit.
double near_origin_exponent(const ShallowPotential& sp);

/// (l + 2N)(l + 2N + 1).
double barrier_prediction(double l, int N);

/// Floor on the matching defect accepted for the tabulated partner.
inline constexpr double kShallowMatchTolerance = 1e-8;

/// The lowest `count` levels of the shallow potential on its own grid.
std::vector<eigen::RadialSolution> shallow_spectrum(const ShallowPotential& sp, int count,
                                                    const eigen::SolverOptions& opts = {});

/// Relative tail gap |V_shallow - V_deep| / |V_deep| at rho_max.
double tail_gap(const ShallowPotential& sp);

struct DegeneracyRow {
    int n = 0;
    int l = 0;
    double eps = 0.0;          ///< eps(n, l)
    double eps_next = 0.0;     ///< eps(n+1, l)
    double eps_partner = 0.0;  ///< eps(n, l+2)
    double delta = 0.0;        ///< eps(n+1, l) - eps(n, l+2)
    double spacing = 0.0;      ///< eps(n+1, l) - eps(n, l)
    double measure = 0.0;      ///< |delta| / spacing
};

/// Tabulated -depth exp(-(rho/range)^2) on a log grid reaching 8 ranges.
PotentialSpec gaussian_well(double depth, double range, std::size_t samples = 4001);

/// Rows for l = 0..l_max and n = 0..n_max-1.
std::vector<DegeneracyRow> degeneracy_report(const PotentialSpec& pot, int l_max, int n_max,
                                             const eigen::SolverOptions& opts = {});
std::vector<DegeneracyRow> degeneracy_report(double nu, int l_max, int n_max,
                                             const eigen::SolverOptions& opts = {});

}  // namespace powerdual::susy
