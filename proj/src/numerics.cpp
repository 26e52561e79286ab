#include "powerdual/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "powerdual/errors.hpp"

namespace powerdual::numerics {

RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if ((flo > 0) == (fhi > 0)) throw BracketError("bisect: no sign change on bracket");
    int it = 0;
    while (it < max_iter && std::abs(hi - lo) > xtol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi)) break;
        const double fm = f(mid);
        ++it;
        if (fm == 0.0) return {mid, 0.0, it};
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return std::abs(flo) < std::abs(fhi) ? RootResult{lo, flo, it} : RootResult{hi, fhi, it};
}

RootResult secant_bracketed(const std::function<double(double)>& f, double lo,
                            double hi, double xtol, double ftol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if ((flo > 0) == (fhi > 0)) throw BracketError("secant: no sign change on bracket");
    int side = 0;
    RootResult best = std::abs(flo) < std::abs(fhi) ? RootResult{lo, flo, 0} : RootResult{hi, fhi, 0};
    for (int it = 1; it <= max_iter; ++it) {
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > std::min(lo, hi) && x < std::max(lo, hi))) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (std::abs(fx) < std::abs(best.fx)) best = {x, fx, it};
        if (std::abs(fx) <= ftol || std::abs(hi - lo) <= xtol) {
            best.iterations = it;
            return best;
        }
        if ((fx > 0) == (fhi > 0)) {
            hi = x;
            fhi = fx;
            if (side == -1) flo *= 0.5;
            side = -1;
        } else {
            lo = x;
            flo = fx;
            if (side == 1) fhi *= 0.5;
            side = 1;
        }
    }
    best.iterations = max_iter;
    return best;
}

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1) throw ArgumentError("gauss_legendre: order must be >= 1");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussRule>(compute_rule(order));
    return *slot;
}

QuadratureResult integrate_gl(const std::function<double(double)>& f, double a,
                              double b, double rel_tol, double abs_tol) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto apply = [&](int order) {
        const auto& rule = gauss_legendre(order);
        CompensatedSum sum;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
        return sum.value() * half;
    };
    double prev = apply(16);
    for (int order = 32; order <= 1024; order *= 2) {
        const double cur = apply(order);
        const double err = std::abs(cur - prev);
        if (err <= std::max(rel_tol * std::abs(cur), abs_tol)) return {cur, err, order};
        prev = cur;
    }
    // one more comparison at the largest order pair already done above
    throw NonConvergenceError("integrate_gl: no convergence up to order 1024");
}

void CompensatedSum::add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw ArgumentError("CubicSpline: need >= 3 matching samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw ArgumentError("CubicSpline: abscissae must increase");
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0);
    std::vector<double> d(n, 0.0);
    // Thomas algorithm for the natural spline system
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
        c[i] = h1 / diag;
        d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = d[i] - c[i] * m_[i + 1];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double CubicSpline::operator()(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("trapezoid: size mismatch");
    CompensatedSum s;
    for (std::size_t i = 1; i < x.size(); ++i) s.add(0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]));
    return s.value();
}

}  // namespace powerdual::numerics
