#pragma once

// Test-only reference eigenvalues: second-order finite differences of
// -u'' + V_eff u on a uniform Dirichlet grid, eigenvalues of the symmetric
// tridiagonal matrix by Sturm-sequence bisection, and Richardson
// extrapolation over successive step halvings. Shares no code with the
// library.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

struct Tridiagonal {
    std::vector<double> diag;
    double off = 0.0;  // constant off-diagonal

    // Number of eigenvalues strictly below x.
    std::size_t count_below(double x) const {
        std::size_t count = 0;
        double q = 1.0;
        const double off2 = off * off;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            q = diag[i] - x - (i ? off2 / q : 0.0);
            if (q == 0.0) q = -1e-300;
            if (q < 0.0) ++count;
        }
        return count;
    }

    // k-th eigenvalue (0-based) inside the Gershgorin interval.
    double eigenvalue(std::size_t k) const {
        double lo = diag[0], hi = diag[0];
        for (double d : diag) {
            lo = std::min(lo, d - 2.0 * std::abs(off));
            hi = std::max(hi, d + 2.0 * std::abs(off));
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count_below(mid) > k) hi = mid;
            else lo = mid;
        }
        return 0.5 * (lo + hi);
    }
};

inline Tridiagonal fd_matrix(const std::function<double(double)>& v_eff, double R, std::size_t n) {
    const double h = R / static_cast<double>(n + 1);
    Tridiagonal t;
    t.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = 2.0 / (h * h) + v_eff(h * static_cast<double>(i + 1));
    t.off = -1.0 / (h * h);
    return t;
}

struct Reference {
    double value = 0.0;
    double spread = 0.0;  // |last two extrapolants|
};

// Richardson tableau over n0, 2 n0 + 1, 4 n0 + 3, ... interior points (step
// halving on [0, R]) for an error series sum_j c_j h^(p_j). Smooth potentials
// give p = 2, 4, 6, ...; a -rho^nu core adds terms starting at h^(nu + 3).
inline Reference fd_eigenvalue(const std::function<double(double)>& v_eff, double R, std::size_t k,
                               std::size_t n0, const std::vector<double>& powers) {
    const int levels = static_cast<int>(powers.size()) + 1;
    std::vector<std::vector<double>> T(levels);
    std::size_t n = n0;
    for (int i = 0; i < levels; ++i) {
        T[i].push_back(fd_matrix(v_eff, R, n).eigenvalue(k));
        for (int j = 1; j <= i; ++j) {
            const double f = std::pow(2.0, powers[j - 1]);
            T[i].push_back(T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (f - 1.0));
        }
        n = 2 * n + 1;
    }
    const auto& last = T.back();
    const auto& prev = T[levels - 2];
    return {last.back(), std::abs(last.back() - prev.back())};
}

inline std::vector<double> even_powers(int count) {
    std::vector<double> p;
    for (int i = 1; i <= count; ++i) p.push_back(2.0 * i);
    return p;
}

}  // namespace oracle
