#include "powerdual/susy.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "powerdual/errors.hpp"

namespace powerdual::susy {

namespace {

using Mat = std::array<double, kMaxRemoved * kMaxRemoved>;

// Partial-pivot LU of an n x n matrix held in a kMaxRemoved-stride array.
struct Lu {
    Mat a{};
    std::array<int, kMaxRemoved> piv{};
    int n = 0;
    double det = 1.0;

    Lu(const Mat& m, int size) : a(m), n(size) {
        for (int i = 0; i < n; ++i) piv[i] = i;
        for (int c = 0; c < n; ++c) {
            int p = c;
            for (int r = c + 1; r < n; ++r)
                if (std::abs(at(r, c)) > std::abs(at(p, c))) p = r;
            if (p != c) {
                for (int k = 0; k < n; ++k) std::swap(at(p, k), at(c, k));
                std::swap(piv[p], piv[c]);
                det = -det;
            }
            const double d = at(c, c);
            det *= d;
            if (d == 0.0) continue;
            for (int r = c + 1; r < n; ++r) {
                const double f = at(r, c) / d;
                at(r, c) = f;
                for (int k = c + 1; k < n; ++k) at(r, k) -= f * at(c, k);
            }
        }
    }

    double& at(int r, int c) { return a[r * kMaxRemoved + c]; }
    double at(int r, int c) const { return a[r * kMaxRemoved + c]; }

    // X = M^-1 B
    Mat solve(const Mat& b) const {
        Mat x{};
        for (int col = 0; col < n; ++col) {
            std::array<double, kMaxRemoved> y{};
            for (int r = 0; r < n; ++r) {
                double s = b[piv[r] * kMaxRemoved + col];
                for (int k = 0; k < r; ++k) s -= at(r, k) * y[k];
                y[r] = s;
            }
            for (int r = n - 1; r >= 0; --r) {
                double s = y[r];
                for (int k = r + 1; k < n; ++k) s -= at(r, k) * y[k];
                y[r] = s / at(r, r);
            }
            for (int r = 0; r < n; ++r) x[r * kMaxRemoved + col] = y[r];
        }
        return x;
    }
};

Mat load(const GramSeries& g, std::size_t i) {
    Mat m{};
    for (int j = 0; j < g.states; ++j)
        for (int k = 0; k < g.states; ++k) m[j * kMaxRemoved + k] = g(i, j, k);
    return m;
}

// d/dx by five-point differences on a uniform step, one-sided at the ends.
std::vector<double> derivative_x(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    auto fwd = [&](std::size_t i) {
        return (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4]) / (12.0 * h);
    };
    auto bwd = [&](std::size_t i) {
        return (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4]) / (12.0 * h);
    };
    d[0] = fwd(0);
    d[1] = fwd(1);
    d[n - 2] = bwd(n - 2);
    d[n - 1] = bwd(n - 1);
    return d;
}

struct Fit {
    double c = 0.0;
    double b = 0.0;
    double d = 0.0;
    double residual = 0.0;
};

// rho^2 V = c + b rho^2 + d rho^4 by least squares on [i0, i1).
Fit fit_barrier(const eigen::RadialGrid& grid, const std::vector<double>& v, std::size_t i0, std::size_t i1) {
    if (i1 < i0 + 8) throw FitQualityError("near-origin fit: window too small");
    const double scale = grid[i1 - 1] * grid[i1 - 1];
    Mat normal{};
    Mat rhs{};
    for (std::size_t i = i0; i < i1; ++i) {
        const double x = grid[i] * grid[i] / scale;
        const double y = grid[i] * grid[i] * v[i];
        const double basis[3] = {1.0, x, x * x};
        for (int r = 0; r < 3; ++r) {
            rhs[r * kMaxRemoved] += basis[r] * y;
            for (int c = 0; c < 3; ++c) normal[r * kMaxRemoved + c] += basis[r] * basis[c];
        }
    }
    const Lu lu(normal, 3);
    if (!(std::abs(lu.det) > 0.0)) throw FitQualityError("near-origin fit: degenerate window");
    const Mat coef = lu.solve(rhs);
    Fit f;
    f.c = coef[0];
    f.b = coef[kMaxRemoved] / scale;
    f.d = coef[2 * kMaxRemoved] / (scale * scale);
    double rss = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
        const double x = grid[i] * grid[i];
        const double r = x * v[i] - (f.c + f.b * x + f.d * x * x);
        rss += r * r;
    }
    f.residual = std::sqrt(rss / static_cast<double>(i1 - i0)) / std::max(std::abs(f.c), 1e-300);
    return f;
}

std::size_t decade_end(const eigen::RadialGrid& grid, std::size_t i0) {
    std::size_t i1 = i0;
    const double stop = 10.0 * grid[i0];
    while (i1 < grid.size() && grid[i1] <= stop) ++i1;
    return i1;
}

}  // namespace

double GramSeries::det(std::size_t i) const { return Lu(load(*this, i), states).det; }

GramSeries gram_matrix(std::span<const eigen::RadialSolution> eigfuncs) {
    const int N = static_cast<int>(eigfuncs.size());
    if (N < 1 || N > kMaxRemoved) throw ArgumentError("gram_matrix: supports 1..4 states");
    const eigen::RadialGrid& grid = eigfuncs[0].grid;
    if (grid.spacing() != eigen::Spacing::log_uniform) throw ArgumentError("gram_matrix: needs a log-uniform grid");
    const std::size_t n = grid.size();
    for (const auto& s : eigfuncs)
        if (s.grid.size() != n || s.grid.rho_max() != grid.rho_max() || s.grid.rho_min() != grid.rho_min())
            throw ArgumentError("gram_matrix: eigenfunctions live on different grids");
    const double h = grid.step();

    // integrand in x = ln rho: F = R_j R_k rho
    std::vector<std::vector<double>> dR(N);
    for (int j = 0; j < N; ++j) dR[j] = derivative_x(eigfuncs[j].u, h);

    GramSeries g;
    g.grid = grid;
    g.states = N;
    g.data.assign(n * N * N, 0.0);
    for (int j = 0; j < N; ++j) {
        for (int k = j; k < N; ++k) {
            const auto& a = eigfuncs[j].u;
            const auto& b = eigfuncs[k].u;
            auto F = [&](std::size_t i) { return a[i] * b[i] * grid[i]; };
            auto dF = [&](std::size_t i) { return (dR[j][i] * b[i] + a[i] * dR[k][i] + a[i] * b[i]) * grid[i]; };
            const double pj = eigfuncs[j].origin_log_slope();
            const double pk = eigfuncs[k].origin_log_slope();
            double m = grid[0] * a[0] * b[0] / (pj + pk + 1.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (i > 0) m += 0.5 * h * (F(i - 1) + F(i)) - h * h / 12.0 * (dF(i) - dF(i - 1));
                g.data[(i * N + j) * N + k] = m;
                g.data[(i * N + k) * N + j] = m;
            }
        }
    }
    double worst = 0.0;
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) worst = std::max(worst, std::abs(g(n - 1, j, k) - (j == k ? 1.0 : 0.0)));
    if (worst > 1e-6) {
        std::ostringstream os;
        os << "gram_matrix: |M(rho_max) - I| = " << worst;
        throw OrthonormalityError(os.str());
    }
    return g;
}

double barrier_prediction(double l, int N) { return (l + 2.0 * N) * (l + 2.0 * N + 1.0); }

ShallowPotential shallow_potential(const PotentialSpec& deep, int N, double l, const ShallowOptions& opts) {
    if (N < 1 || N > kMaxRemoved) throw ArgumentError("shallow_potential: N must be in 1..4");
    if (!(l >= 0.0)) throw DomainError("shallow_potential: l must be >= 0");
    eigen::SolverOptions sopts = opts.solver;
    if (!sopts.grid) sopts.grid = eigen::shared_grid(deep, l, N + 4, sopts);
    const eigen::RadialGrid grid = *sopts.grid;

    std::vector<eigen::RadialSolution> states;
    states.reserve(N);
    for (int j = 0; j < N; ++j) {
        try {
            states.push_back(eigen::solve_radial(deep, l, j, sopts));
        } catch (const NoBoundStateError& e) {
            std::ostringstream os;
            os << "shallow_potential: deep potential has fewer than " << N << " states at l=" << l << " (" << e.what() << ")";
            throw InsufficientStatesError(os.str());
        }
    }
    const GramSeries gram = gram_matrix(states);

    const std::size_t n = grid.size();
    const double h = grid.step();
    std::vector<std::vector<double>> dRdrho(N);
    for (int j = 0; j < N; ++j) {
        dRdrho[j] = derivative_x(states[j].u, h);
        for (std::size_t i = 0; i < n; ++i) dRdrho[j][i] /= grid[i];
    }

    ShallowPotential sp;
    sp.grid = grid;
    sp.removed = N;
    sp.l = l;
    sp.parent = deep.describe();
    sp.fit_tolerance = opts.fit_tolerance;
    for (const auto& s : states) sp.removed_energies.push_back(s.eps);
    sp.values.resize(n);
    sp.deep_values.resize(n);

    std::size_t last_bad = 0;
    bool any_bad = false;
    const double cent = l * (l + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid[i];
        sp.deep_values[i] = deep(r) + cent / (r * r);
        const Mat m = load(gram, i);
        const Lu lu(m, N);
        double diag = 1.0;
        for (int j = 0; j < N; ++j) diag *= m[j * kMaxRemoved + j];
        if (!(lu.det > opts.hadamard_floor * diag)) {
            last_bad = i;
            any_bad = true;
        }
        Mat d1{};
        Mat d2{};
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < N; ++k) {
                const double rj = states[j].u[i];
                const double rk = states[k].u[i];
                d1[j * kMaxRemoved + k] = rj * rk;
                d2[j * kMaxRemoved + k] = dRdrho[j][i] * rk + rj * dRdrho[k][i];
            }
        }
        double second = 0.0;
        if (std::isfinite(lu.det) && lu.det != 0.0) {
            const Mat a = lu.solve(d1);
            const Mat b = lu.solve(d2);
            for (int j = 0; j < N; ++j) {
                second += b[j * kMaxRemoved + j];
                for (int k = 0; k < N; ++k) second -= a[j * kMaxRemoved + k] * a[k * kMaxRemoved + j];
            }
        }
        sp.values[i] = sp.deep_values[i] - 2.0 * second;
    }

    // floor: above the ill-conditioned core and at least one decade above rho_min
    std::size_t floor = decade_end(grid, 0);
    if (any_bad) floor = std::max(floor, last_bad + 1);
    const std::size_t window_end = decade_end(grid, floor);
    if (window_end >= n) throw FitQualityError("shallow_potential: no decade left above the floor radius");
    const Fit fit = fit_barrier(grid, sp.values, floor, window_end);
    sp.floor_index = floor;
    sp.floor_radius = grid[floor];
    sp.fit_c = fit.c;
    sp.fit_b = fit.b;
    sp.fit_d = fit.d;
    sp.fit_residual = fit.residual;
    for (std::size_t i = 0; i < floor; ++i) {
        const double r2 = grid[i] * grid[i];
        sp.values[i] = fit.c / r2 + fit.b + fit.d * r2;
    }

    std::vector<double> shape(n);
    for (std::size_t i = 0; i < n; ++i) shape[i] = sp.values[i] - cent / (grid[i] * grid[i]);
    sp.spec = PotentialSpec::tabulated({grid.points().begin(), grid.points().end()}, std::move(shape));
    return sp;
}

double near_origin_exponent(const ShallowPotential& sp) {
    const std::size_t i1 = decade_end(sp.grid, sp.floor_index);
    if (i1 >= sp.grid.size()) throw FitQualityError("near_origin_exponent: window exceeds grid");
    const Fit f = fit_barrier(sp.grid, sp.values, sp.floor_index, i1);
    if (!(f.residual <= sp.fit_tolerance)) {
        std::ostringstream os;
        os << "near_origin_exponent: relative residual " << f.residual << " exceeds " << sp.fit_tolerance;
        throw FitQualityError(os.str());
    }
    return f.c;
}

std::vector<eigen::RadialSolution> shallow_spectrum(const ShallowPotential& sp, int count,
                                                    const eigen::SolverOptions& opts) {
    eigen::SolverOptions o = opts;
    o.grid = sp.grid;
    o.tol = std::max(o.tol, kShallowMatchTolerance);
    return eigen::spectrum(sp.spec, sp.l, count, o);
}

double tail_gap(const ShallowPotential& sp) {
    const double vd = sp.deep_values.back();
    return std::abs(sp.values.back() - vd) / std::abs(vd);
}

PotentialSpec gaussian_well(double depth, double range, std::size_t samples) {
    if (!(depth > 0.0) || !(range > 0.0) || samples < 16) throw DomainError("gaussian_well: requires depth, range > 0");
    const double x0 = std::log(1e-6 * range);
    const double x1 = std::log(8.0 * range);
    std::vector<double> rho(samples);
    std::vector<double> v(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        rho[i] = std::exp(x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(samples - 1));
        const double t = rho[i] / range;
        v[i] = -depth * std::exp(-t * t);
    }
    return PotentialSpec::tabulated(std::move(rho), std::move(v));
}

std::vector<DegeneracyRow> degeneracy_report(const PotentialSpec& pot, int l_max, int n_max,
                                             const eigen::SolverOptions& opts) {
    if (l_max < 0 || n_max < 1) throw DomainError("degeneracy_report: requires l_max >= 0, n_max >= 1");
    std::vector<std::vector<double>> eps(l_max + 3);
    for (int l = 0; l <= l_max + 2; ++l) {
        const int count = l <= l_max ? n_max + 1 : n_max;
        for (const auto& s : eigen::spectrum(pot, l, count, opts)) eps[l].push_back(s.eps);
    }
    std::vector<DegeneracyRow> rows;
    for (int l = 0; l <= l_max; ++l) {
        for (int n = 0; n < n_max; ++n) {
            DegeneracyRow r;
            r.n = n;
            r.l = l;
            r.eps = eps[l][n];
            r.eps_next = eps[l][n + 1];
            r.eps_partner = eps[l + 2][n];
            r.delta = r.eps_next - r.eps_partner;
            r.spacing = r.eps_next - r.eps;
            r.measure = std::abs(r.delta) / r.spacing;
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<DegeneracyRow> degeneracy_report(double nu, int l_max, int n_max, const eigen::SolverOptions& opts) {
    if (!(nu > 0.0)) throw DomainError("degeneracy_report: requires nu > 0");
    return degeneracy_report(PotentialSpec::confining(nu), l_max, n_max, opts);
}

}  // namespace powerdual::susy
