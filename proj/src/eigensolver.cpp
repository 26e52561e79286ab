#include "powerdual/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "powerdual/errors.hpp"
#include "powerdual/numerics.hpp"
#include "powerdual/specfun.hpp"

namespace powerdual::eigen {

// --- RadialGrid ----------------------------------------------------------------

RadialGrid RadialGrid::uniform(double rho_min, double rho_max, std::size_t n) {
    if (!(rho_min > 0.0) || !(rho_max > rho_min)) throw ArgumentError("grid: need 0 < rho_min < rho_max");
    if (n < kMinPoints) throw ArgumentError("grid: fewer than 512 points");
    const double h = (rho_max - rho_min) / static_cast<double>(n - 1);
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = rho_min + h * static_cast<double>(i);
    pts.back() = rho_max;
    return RadialGrid(std::move(pts), Spacing::uniform, h);
}

RadialGrid RadialGrid::log_uniform(double rho_min, double rho_max, std::size_t n) {
    if (!(rho_min > 0.0) || !(rho_max > rho_min)) throw ArgumentError("grid: need 0 < rho_min < rho_max");
    if (n < kMinPoints) throw ArgumentError("grid: fewer than 512 points");
    const double x0 = std::log(rho_min);
    const double h = (std::log(rho_max) - x0) / static_cast<double>(n - 1);
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = std::exp(x0 + h * static_cast<double>(i));
    pts.front() = rho_min;
    pts.back() = rho_max;
    return RadialGrid(std::move(pts), Spacing::log_uniform, h);
}

RadialGrid RadialGrid::refined() const {
    const std::size_t n = 2 * size() - 1;
    return spacing_ == Spacing::uniform ? uniform(rho_min(), rho_max(), n)
                                        : log_uniform(rho_min(), rho_max(), n);
}

double RadialSolution::origin_log_slope() const {
    constexpr std::size_t k = 4;
    if (u.size() <= k || u[0] == 0.0 || u[k] == 0.0) return 0.0;
    return (std::log(std::abs(u[k])) - std::log(std::abs(u[0]))) /
           (std::log(grid[k]) - std::log(grid[0]));
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBig = 1e200;

// w'' = f w in x = ln(rho) with u = sqrt(rho) w and f = q - eps rho^2,
// q = rho^2 V + (l + 1/2)^2.
struct Problem {
    std::vector<double> rho;
    std::vector<double> rho2;
    std::vector<double> q;
    double h = 0.0;
    double lambda = 0.5;
    double c1 = 0.0;  // start series w = rho^lambda (1 + c1 rho^k1 + ce eps rho^2)
    double k1 = 0.0;
    double ce = 0.0;

    std::size_t size() const { return rho.size(); }
    double f(std::size_t i, double e) const { return q[i] - e * rho2[i]; }
    double start(std::size_t i, double e) const {
        const double r = rho[i];
        double s = 1.0 + ce * e * rho2[i];
        if (c1 != 0.0) s += c1 * std::pow(r, k1);
        return std::pow(r / rho[0], lambda) * s;
    }
};

Problem make_problem(const PotentialSpec& pot, double l, const RadialGrid& grid) {
    if (grid.spacing() != Spacing::log_uniform)
        throw ArgumentError("solver: the shooting grid must be log-uniform");
    Problem p;
    p.h = grid.step();
    const std::size_t n = grid.size();
    p.rho.assign(grid.points().begin(), grid.points().end());
    p.rho2.resize(n);
    p.q.resize(n);
    const double langer = (l + 0.5) * (l + 0.5);
    for (std::size_t i = 0; i < n; ++i) {
        p.rho2[i] = p.rho[i] * p.rho[i];
        p.q[i] = pot.rho2_value(p.rho[i]) + langer;
        if (!std::isfinite(p.q[i])) throw DomainError("solver: potential is not finite on the grid");
    }
    if (pot.is_power_law()) {
        const double lam2 = langer + pot.inverse_square();
        if (!(lam2 > 0.0)) throw DomainError("solver: inverse-square term causes fall to the centre");
        p.lambda = std::sqrt(lam2);
        p.k1 = pot.exponent() + 2.0;
        const double s = pot.is_confining_power() ? 1.0 : -1.0;
        p.c1 = s / (p.k1 * (2.0 * p.lambda + p.k1));
    } else {
        if (!(p.q[0] > 0.0)) throw DomainError("solver: effective barrier at the origin is not repulsive");
        p.lambda = std::sqrt(p.q[0]);
    }
    p.ce = -1.0 / (4.0 * (p.lambda + 1.0));
    return p;
}

// Node count of the outward solution over the whole grid (Dirichlet at rho_max).
int count_nodes(const Problem& p, double e) {
    const double h12 = p.h * p.h / 12.0;
    double w0 = p.start(0, e);
    double w1 = p.start(1, e);
    double g0 = 1.0 - h12 * p.f(0, e);
    double g1 = 1.0 - h12 * p.f(1, e);
    int nodes = 0;
    bool positive = w1 > 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double g2 = 1.0 - h12 * p.f(i + 1, e);
        const double w2 = ((12.0 - 10.0 * g1) * w1 - g0 * w0) / g2;
        if (w2 != 0.0 && (w2 > 0.0) != positive) {
            ++nodes;
            positive = !positive;
        }
        w0 = w1;
        w1 = w2;
        g0 = g1;
        g1 = g2;
        if (std::abs(w1) > kBig) {
            w0 /= kBig;
            w1 /= kBig;
        }
    }
    return nodes;
}

void shoot_out(const Problem& p, double e, std::size_t last, std::vector<double>& w) {
    const double h12 = p.h * p.h / 12.0;
    w.assign(last + 1, 0.0);
    w[0] = p.start(0, e);
    w[1] = p.start(1, e);
    double g0 = 1.0 - h12 * p.f(0, e);
    double g1 = 1.0 - h12 * p.f(1, e);
    for (std::size_t i = 1; i < last; ++i) {
        const double g2 = 1.0 - h12 * p.f(i + 1, e);
        w[i + 1] = ((12.0 - 10.0 * g1) * w[i] - g0 * w[i - 1]) / g2;
        g0 = g1;
        g1 = g2;
        if (std::abs(w[i + 1]) > kBig)
            for (std::size_t j = 0; j <= i + 1; ++j) w[j] /= kBig;
    }
}

// Fills w[first .. n-1] from w(rho_max) = 0.
void shoot_in(const Problem& p, double e, std::size_t first, std::vector<double>& w) {
    const std::size_t n = p.size();
    const double h12 = p.h * p.h / 12.0;
    w.assign(n, 0.0);
    w[n - 1] = 0.0;
    w[n - 2] = 1e-30;
    double g2 = 1.0 - h12 * p.f(n - 1, e);
    double g1 = 1.0 - h12 * p.f(n - 2, e);
    for (std::size_t i = n - 2; i > first; --i) {
        const double g0 = 1.0 - h12 * p.f(i - 1, e);
        w[i - 1] = ((12.0 - 10.0 * g1) * w[i] - g2 * w[i + 1]) / g0;
        g2 = g1;
        g1 = g0;
        if (std::abs(w[i - 1]) > kBig)
            for (std::size_t j = i - 1; j < n; ++j) w[j] /= kBig;
    }
}

std::size_t matching_index(const Problem& p, double e) {
    const std::size_t n = p.size();
    std::size_t c = n / 2;
    for (std::size_t i = n - 1; i > 0; --i) {
        if (p.f(i, e) < 0.0) {
            c = i;
            break;
        }
    }
    if (c + n / 8 >= n) {
        // allowed up to the wall: match at the outermost antinode instead
        std::vector<double> w;
        shoot_out(p, e, n - 1, w);
        c = n / 2;
        for (std::size_t i = n / 2; i < n - n / 8; ++i)
            if (std::abs(w[i]) > std::abs(w[c])) c = i;
    }
    return std::clamp<std::size_t>(c, 2, n - 8);
}

// Jump of d ln w / dx at index c between the outward and inward solutions,
// expressed through the Numerov three-point relation.
double matching_defect(const Problem& p, double e, std::size_t c, std::vector<double>& wo,
                       std::vector<double>& wi) {
    shoot_out(p, e, c, wo);
    shoot_in(p, e, c, wi);
    const double h12 = p.h * p.h / 12.0;
    const double gm = 1.0 - h12 * p.f(c - 1, e);
    const double gc = 1.0 - h12 * p.f(c, e);
    const double gp = 1.0 - h12 * p.f(c + 1, e);
    return (gm * wo[c - 1] / wo[c] + gp * wi[c + 1] / wi[c] - (12.0 - 10.0 * gc)) / p.h;
}

struct GridEigen {
    double e = 0.0;
    double defect = 0.0;
    std::size_t c = 0;
};

GridEigen refine(const Problem& p, int nodes, double lo, double hi, const SolverOptions& opts) {
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (hi - lo <= 1e-9 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
        const double mid = 0.5 * (lo + hi);
        (count_nodes(p, mid) > nodes ? hi : lo) = mid;
    }
    const std::size_t c = matching_index(p, 0.5 * (lo + hi));
    std::vector<double> wo;
    std::vector<double> wi;
    auto d = [&](double e) { return matching_defect(p, e, c, wo, wi); };
    const double dlo = d(lo);
    const double dhi = d(hi);
    GridEigen out;
    out.c = c;
    if (std::isfinite(dlo) && std::isfinite(dhi) && (dlo > 0.0) != (dhi > 0.0)) {
        const double scale = std::max(std::abs(lo), std::abs(hi));
        auto r = numerics::secant_bracketed(d, lo, hi, 4.0 * std::numeric_limits<double>::epsilon() * scale,
                                            0.01 * opts.tol, opts.max_iterations);
        out.e = r.x;
        out.defect = std::abs(r.fx);
    } else {
        for (; it < 4 * opts.max_iterations; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (count_nodes(p, mid) > nodes ? hi : lo) = mid;
        }
        out.e = 0.5 * (lo + hi);
        out.defect = std::abs(d(out.e));
    }
    if (!(out.defect < opts.tol)) {
        std::ostringstream os;
        os.precision(17);
        os << "solver: matching defect " << out.defect << " >= tol " << opts.tol << " at eps=" << out.e
           << " (nodes=" << nodes << ", match index " << c << " of " << p.size() << ")";
        throw NonConvergenceError(os.str());
    }
    return out;
}

double langer_estimate(const PotentialSpec& pot, double l, int nodes) {
    if (!pot.is_power_law()) return 0.0;
    const double nu = pot.exponent();
    const double n = nodes + 1.0;
    if (nu > 0.0) {
        const double a1 = std::sqrt(kPi) * (2.0 + nu) * specfun::gamma(0.5 + 1.0 / nu) / specfun::gamma(1.0 / nu);
        return std::pow(a1 * (n + 0.5 * l - 0.25), 2.0 * nu / (2.0 + nu));
    }
    const double a2 = 2.0 * std::sqrt(kPi) * specfun::gamma(-1.0 / nu) / specfun::gamma(-0.5 - 1.0 / nu);
    const double m = std::max(0.1, n - 0.5 * (1.0 + nu - 2.0 * l) / (2.0 + nu));
    return -std::pow(a2 * m, 2.0 * nu / (2.0 + nu));
}

// Lower end of the energy search. For singular power laws the minimum of V_eff
// lies far below the ground state; a multiple of the semiclassical ground
// level keeps the tail step limit from being set by irrelevant energies.
double energy_floor(const PotentialSpec& pot, double l, double vmin) {
    if (!pot.is_singular_power() || pot.inverse_square() != 0.0) return vmin;
    return std::max(vmin, 10.0 * langer_estimate(pot, l, 0));
}

double langer_veff(const PotentialSpec& pot, double langer, double rho) {
    return (pot.rho2_value(rho) + langer) / (rho * rho);
}

// Radius beyond the outer turning point at which the decay exponent reaches `action`.
double decay_radius(const PotentialSpec& pot, double l, double e, double action) {
    const double langer = (l + 0.5) * (l + 0.5);
    double rho = 1e-3;
    if (pot.is_power_law()) {
        const double nu = pot.exponent();
        rho = std::max(rho, nu > 0.0 ? std::pow(e, 1.0 / nu) : std::pow(-e, 1.0 / nu));
    }
    constexpr double dx = 1e-3;
    constexpr double kCap = 1e8;
    double x = std::log(rho);
    while (rho < kCap && langer_veff(pot, langer, rho) <= e) {
        x += dx;
        rho = std::exp(x);
    }
    double acc = 0.0;
    while (acc < action && rho < kCap) {
        const double k = std::sqrt(std::max(langer_veff(pot, langer, rho) - e, 0.0));
        acc += k * rho * dx;
        x += dx;
        rho = std::exp(x);
    }
    return std::min(rho, kCap);
}

double decay_action(const Problem& p, double e) {
    double acc = 0.0;
    for (std::size_t i = p.size() - 1; i > 0 && p.f(i, e) > 0.0; --i) acc += std::sqrt(p.f(i, e)) * p.h;
    return acc;
}

bool is_callable(const PotentialSpec& pot) { return std::holds_alternative<Callable>(pot.shape()); }

bool adaptive_outer(const PotentialSpec& pot, const SolverOptions& opts) {
    return !opts.rho_max && (pot.is_power_law() || is_callable(pot));
}

// First outer radius for a callable shape of unknown spectrum: where V_eff
// exceeds 1e3, capped at 30.
double callable_radius(const PotentialSpec& pot, double l) {
    const double langer = (l + 0.5) * (l + 0.5);
    for (double rho = 1.0; rho < 30.0; rho *= 1.01)
        if (langer_veff(pot, langer, rho) > 1e3) return rho;
    return 30.0;
}

// Energy at which the outer radius is chosen; NaN when nothing is known yet.
double initial_grid_energy(const PotentialSpec& pot, double l, int nodes) {
    if (!pot.is_power_law()) return std::numeric_limits<double>::quiet_NaN();
    const double e = langer_estimate(pot, l, nodes);
    return pot.exponent() > 0.0 ? 1.5 * e + 1.0 : 0.5 * e;
}

RadialGrid build_grid(const PotentialSpec& pot, double l, double e_grid, const SolverOptions& opts) {
    double rho_max = 30.0;
    if (opts.rho_max) {
        rho_max = *opts.rho_max;
    } else if (pot.is_hard_sphere()) {
        rho_max = 1.0;
    } else if (pot.is_tabulated()) {
        rho_max = std::get<Tabulated>(pot.shape()).rho.back();
    } else if (pot.is_power_law() || (is_callable(pot) && std::isfinite(e_grid))) {
        rho_max = decay_radius(pot, l, e_grid, opts.tail_action);
    } else if (is_callable(pot)) {
        rho_max = callable_radius(pot, l);
    }
    const double x0 = std::log(opts.rho_min);
    const double x1 = std::log(rho_max);

    // step limits from stability (h^2 f / 12 small) and phase resolution
    const double langer = (l + 0.5) * (l + 0.5);
    constexpr int kProbe = 4096;
    double vmin = std::numeric_limits<double>::infinity();
    std::vector<double> probe_rho(kProbe);
    std::vector<double> probe_q(kProbe);
    for (int i = 0; i < kProbe; ++i) {
        const double r = std::exp(x0 + (x1 - x0) * i / (kProbe - 1.0));
        probe_rho[i] = r;
        probe_q[i] = pot.rho2_value(r) + langer;
        vmin = std::min(vmin, probe_q[i] / (r * r));
    }
    const double e_known = std::isfinite(e_grid) ? e_grid : 0.0;
    const double e_top = pot.is_power_law() && pot.exponent() < 0.0 ? 0.0 : std::max(e_known, vmin);
    const double e_floor = energy_floor(pot, l, vmin);
    double fmax = 0.0;
    double fmin = 0.0;
    for (int i = 0; i < kProbe; ++i) {
        const double r2 = probe_rho[i] * probe_rho[i];
        fmax = std::max(fmax, probe_q[i] - e_floor * r2);
        fmin = std::min(fmin, probe_q[i] - e_top * r2);
    }
    double h = opts.step;
    if (fmax > 0.0) h = std::min(h, std::sqrt(3.0 / fmax));
    if (fmin < 0.0) h = std::min(h, 0.04 / std::sqrt(-fmin));
    std::size_t n = static_cast<std::size_t>(std::ceil((x1 - x0) / h)) + 1;
    n = std::max(n, RadialGrid::kMinPoints);
    return RadialGrid::log_uniform(opts.rho_min, rho_max, n);
}

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

Bracket energy_bracket(const Problem& p, const PotentialSpec& pot, double l, int nodes) {
    const std::size_t n = p.size();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, p.q[i] / p.rho2[i]);
    lo -= 1e-6 * std::abs(lo) + 1e-12;
    if (const double floor = energy_floor(pot, l, lo); floor > lo && count_nodes(p, floor) == 0) lo = floor;

    const bool unbounded_above = pot.is_confining_power() || pot.is_hard_sphere() ||
                                 (pot.is_tabulated() && p.q[n - 1] / p.rho2[n - 1] > 1e3);
    if (!unbounded_above) {
        const double cap = (p.q[n - 1] - 0.25) / p.rho2[n - 1];
        if (count_nodes(p, cap) <= nodes) {
            std::ostringstream os;
            os << "solver: no bound state with " << nodes << " nodes at l=" << l << " for "
               << pot.describe();
            throw NoBoundStateError(os.str());
        }
        return {lo, cap};
    }
    double hi = std::max(lo + 1.0, 1.5 * langer_estimate(pot, l, nodes) + 1.0);
    for (int it = 0; count_nodes(p, hi) <= nodes; ++it) {
        if (it > 200) throw NonConvergenceError("solver: failed to bracket the eigenvalue from above");
        hi = lo + 2.0 * (hi - lo);
    }
    return {lo, hi};
}

Bracket local_bracket(const Problem& p, double e, int nodes, const Bracket& fallback) {
    double delta = 1e-6 * (std::abs(e) + 1e-3);
    for (int it = 0; it < 8; ++it, delta *= 10.0) {
        const double lo = std::max(fallback.lo, e - delta);
        const double hi = std::min(fallback.hi, e + delta);
        if (count_nodes(p, lo) <= nodes && count_nodes(p, hi) > nodes) return {lo, hi};
    }
    return fallback;
}

RadialSolution solve_fixed(const PotentialSpec& pot, double l, int nodes, const RadialGrid& grid,
                           const SolverOptions& opts) {
    const Problem p = make_problem(pot, l, grid);
    const Bracket br = energy_bracket(p, pot, l, nodes);
    const GridEigen coarse = refine(p, nodes, br.lo, br.hi, opts);

    RadialSolution sol;
    sol.nodes = nodes;
    sol.l = l;
    sol.grid = grid;
    sol.potential = pot.describe();
    sol.eps_grid = coarse.e;
    sol.matching_defect = coarse.defect;
    sol.matching_index = coarse.c;
    sol.eps = coarse.e;

    if (opts.richardson) {
        const RadialGrid fine = grid.refined();
        const Problem pf = make_problem(pot, l, fine);
        const Bracket fb = local_bracket(pf, coarse.e, nodes, energy_bracket(pf, pot, l, nodes));
        const GridEigen fe = refine(pf, nodes, fb.lo, fb.hi, opts);
        sol.eps = (16.0 * fe.e - coarse.e) / 15.0;
    }

    // wavefunction on the base grid at the grid eigenvalue
    std::vector<double> wo;
    std::vector<double> wi;
    const std::size_t c = coarse.c;
    shoot_out(p, coarse.e, c, wo);
    shoot_in(p, coarse.e, c, wi);
    const double scale = wo[c] / wi[c];
    const std::size_t n = p.size();
    sol.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = i <= c ? wo[i] : wi[i] * scale;
        sol.u[i] = w * std::sqrt(p.rho[i]);
    }
    double peak = 0.0;
    for (double v : sol.u) peak = std::max(peak, std::abs(v));
    for (double& v : sol.u) v /= peak;

    WavefunctionSamples ws{p.rho, sol.u};
    ws = normalized(std::move(ws));
    sol.u = std::move(ws.u);
    sol.norm = 0.0;
    {
        numerics::CompensatedSum s;
        for (std::size_t i = 0; i < n; ++i) s.add(sol.u[i] * sol.u[i] * p.rho[i]);
        sol.norm = s.value() * p.h;
    }

    peak = 0.0;
    for (double v : sol.u) peak = std::max(peak, std::abs(v));
    sol.tail_ratio = std::abs(sol.u[n - 2]) / peak;

    int sign_changes = 0;
    bool positive = true;
    bool started = false;
    for (double v : sol.u) {
        if (std::abs(v) < 1e-13 * peak) continue;
        if (!started) {
            positive = v > 0.0;
            started = true;
        } else if ((v > 0.0) != positive) {
            ++sign_changes;
            positive = !positive;
        }
    }
    if (sign_changes != nodes) {
        std::ostringstream os;
        os << "solver: wavefunction has " << sign_changes << " nodes, expected " << nodes;
        throw NonConvergenceError(os.str());
    }
    return sol;
}

}  // namespace

RadialGrid shared_grid(const PotentialSpec& pot, double l, int max_nodes, const SolverOptions& opts) {
    if (opts.grid) return *opts.grid;
    return build_grid(pot, l, initial_grid_energy(pot, l, max_nodes), opts);
}

RadialSolution solve_radial(const PotentialSpec& pot, double l, int nodes, const SolverOptions& opts) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("solve_radial: l must be >= 0");
    if (nodes < 0) throw DomainError("solve_radial: nodes must be >= 0");
    if (!(opts.tol > 0.0)) throw ArgumentError("solve_radial: tol must be > 0");
    if (opts.grid) return solve_fixed(pot, l, nodes, *opts.grid, opts);

    double e_grid = initial_grid_energy(pot, l, nodes);
    constexpr int kAttempts = 6;
    for (int attempt = 0;; ++attempt) {
        const RadialGrid grid = build_grid(pot, l, e_grid, opts);
        RadialSolution sol = solve_fixed(pot, l, nodes, grid, opts);
        if (!adaptive_outer(pot, opts) || attempt + 1 == kAttempts) return sol;
        const Problem p = make_problem(pot, l, grid);
        if (decay_action(p, sol.eps) >= 0.9 * opts.tail_action) return sol;
        const bool confining = pot.is_power_law() ? pot.exponent() > 0.0 : sol.eps > 0.0;
        if (!confining && !(sol.eps < 0.0)) return sol;
        e_grid = confining ? 1.3 * sol.eps + 1.0 : 0.5 * sol.eps;
    }
}

std::vector<RadialSolution> spectrum(const PotentialSpec& pot, double l, int n_max,
                                     const SolverOptions& opts) {
    if (n_max < 0) throw DomainError("spectrum: n_max must be >= 0");
    std::vector<RadialSolution> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 0; n < n_max; ++n) {
        out.push_back(solve_radial(pot, l, n, opts));
        if (n > 0 && !(out[n].eps > out[n - 1].eps))
            throw NonConvergenceError("spectrum: eigenvalues are not increasing with node count");
    }
    return out;
}

// --- closed forms ----------------------------------------------------------------

double reference_energy(ReferenceKind kind, int n, double l) {
    if (n < 0 || !(l >= 0.0)) throw DomainError("reference_energy: requires n >= 0, l >= 0");
    if (kind == ReferenceKind::oscillator) return 4.0 * n + 2.0 * l + 3.0;
    const double k = n + l + 1.0;
    return -0.25 / (k * k);
}

std::vector<double> closed_form_wavefunction(ReferenceKind kind, int n, double l,
                                             std::span<const double> rho) {
    if (n < 0 || !(l >= 0.0)) throw DomainError("closed_form_wavefunction: requires n >= 0, l >= 0");
    std::vector<double> u(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double r = rho[i];
        if (kind == ReferenceKind::oscillator) {
            u[i] = std::pow(r, l + 1.0) * std::exp(-0.5 * r * r) *
                   specfun::kummer_m({-static_cast<double>(n), l + 1.5, r * r},
                                     std::numeric_limits<double>::infinity());
        } else {
            const double k = n + l + 1.0;
            u[i] = std::pow(r, l + 1.0) * std::exp(-r / (2.0 * k)) *
                   specfun::kummer_m({-static_cast<double>(n), 2.0 * l + 2.0, r / k},
                                     std::numeric_limits<double>::infinity());
        }
    }
    return u;
}

// --- wavefunction transform -------------------------------------------------------

namespace {

struct TransformConstants {
    double nu2;
    double a2;
    double z_power;   // z = rho1^z_power
    double u_power;   // u2 = z^u_power u1
};

TransformConstants transform_constants(double nu1, double eps1) {
    if (!(nu1 > 0.0)) throw DomainError("transform_wavefunction: requires a confining exponent nu1 > 0");
    if (!(eps1 > 0.0)) throw DomainError("transform_wavefunction: requires eps1 > 0");
    const double nu2 = core::exponent_dual(nu1);
    const double r = nu2 / nu1;
    TransformConstants t{};
    t.nu2 = nu2;
    t.a2 = std::pow(1.0 / (eps1 * r * r), 1.0 / (nu2 + 2.0));
    t.z_power = -nu1 / nu2;
    t.u_power = (nu1 + nu2) / (2.0 * nu1);
    return t;
}

}  // namespace

WavefunctionSamples transform_wavefunction(const WavefunctionSamples& w, double nu1, double eps1) {
    const TransformConstants t = transform_constants(nu1, eps1);
    WavefunctionSamples out;
    out.rho.resize(w.rho.size());
    out.u.resize(w.u.size());
    for (std::size_t i = 0; i < w.rho.size(); ++i) {
        const double z = std::pow(w.rho[i], t.z_power);
        out.rho[i] = z / t.a2;
        out.u[i] = std::pow(z, t.u_power) * w.u[i];
    }
    return out;
}

WavefunctionSamples transform_wavefunction(const RadialSolution& sol, double nu1) {
    WavefunctionSamples w{{sol.grid.points().begin(), sol.grid.points().end()}, sol.u};
    return transform_wavefunction(w, nu1, sol.eps);
}

WavefunctionSamples inverse_transform_wavefunction(const WavefunctionSamples& dual, double nu1,
                                                   double eps1) {
    const TransformConstants t = transform_constants(nu1, eps1);
    WavefunctionSamples out;
    out.rho.resize(dual.rho.size());
    out.u.resize(dual.u.size());
    for (std::size_t i = 0; i < dual.rho.size(); ++i) {
        const double z = t.a2 * dual.rho[i];
        out.rho[i] = std::pow(z, 1.0 / t.z_power);
        out.u[i] = dual.u[i] / std::pow(z, t.u_power);
    }
    return out;
}

WavefunctionSamples normalized(WavefunctionSamples w) {
    if (w.rho.size() != w.u.size() || w.rho.size() < 2)
        throw ArgumentError("normalized: mismatched or too few samples");
    // trapezoid in ln(rho): u^2 drho = u^2 rho dx
    numerics::CompensatedSum s;
    for (std::size_t i = 0; i + 1 < w.rho.size(); ++i) {
        const double dx = std::log(w.rho[i + 1]) - std::log(w.rho[i]);
        s.add(0.5 * dx * (w.u[i] * w.u[i] * w.rho[i] + w.u[i + 1] * w.u[i + 1] * w.rho[i + 1]));
    }
    const double norm = s.value();
    if (!(norm > 0.0)) throw DomainError("normalized: wavefunction has zero norm");
    double peak = 0.0;
    for (double v : w.u) peak = std::max(peak, std::abs(v));
    double sign = 1.0;
    for (double v : w.u) {
        if (std::abs(v) > 1e-8 * peak) {
            sign = v > 0.0 ? 1.0 : -1.0;
            break;
        }
    }
    const double f = sign / std::sqrt(norm);
    for (double& v : w.u) v *= f;
    return w;
}

double max_deviation(const WavefunctionSamples& w, const RadialSolution& direct) {
    std::vector<double> x(direct.grid.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::log(direct.grid[i]);
    const numerics::CubicSpline spline(x, direct.u);
    double peak = 0.0;
    for (double v : w.u) peak = std::max(peak, std::abs(v));
    double dev = 0.0;
    for (std::size_t i = 0; i < w.rho.size(); ++i) {
        const double r = w.rho[i];
        if (r < direct.grid.rho_min()) {
            const double ref = direct.u.front() * std::pow(r / direct.grid.rho_min(), direct.origin_log_slope());
            dev = std::max(dev, std::abs(w.u[i] - ref));
            continue;
        }
        if (r > direct.grid.rho_max()) {
            if (std::abs(w.u[i]) > 1e-6 * peak) {
                std::ostringstream os;
                os << "max_deviation: mapped sample at rho=" << r << " lies outside the dual grid ["
                   << direct.grid.rho_min() << ", " << direct.grid.rho_max() << "]";
                throw GridCoverageError(os.str());
            }
            dev = std::max(dev, std::abs(w.u[i]));
            continue;
        }
        dev = std::max(dev, std::abs(w.u[i] - spline(std::log(r))));
    }
    return dev;
}

std::vector<double> box_spectrum(int l, int n_max) {
    if (l < 0 || n_max < 0) throw DomainError("box_spectrum: requires l >= 0, n_max >= 0");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double z = specfun::sph_bessel_zero(l, n);
        out.push_back(z * z);
    }
    return out;
}

}  // namespace powerdual::eigen
