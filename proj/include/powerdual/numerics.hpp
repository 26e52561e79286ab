#pragma once

// Small numerical building blocks shared by the physics modules: bracketed
// scalar root finding, Gauss-Legendre rules, compensated summation and a
// natural cubic spline.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace powerdual::numerics {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

/// Bisection on a sign-changing bracket; stops when the bracket is narrower
/// than `xtol` or `f` vanishes exactly.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, int max_iter = 400);

/// Illinois-safeguarded secant on a sign-changing bracket.
RootResult secant_bracketed(const std::function<double(double)>& f, double lo,
                            double hi, double xtol, double ftol,
                            int max_iter = 200);

/// Gauss-Legendre nodes/weights on [-1, 1]. Rules are computed once and cached
/// for the lifetime of the process.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int order = 0;
};

/// Integrates a smooth function on [a, b] with Gauss-Legendre rules of doubling
/// order (16 -> 1024) until successive values agree to `rel_tol`.
QuadratureResult integrate_gl(const std::function<double(double)>& f, double a,
                              double b, double rel_tol, double abs_tol = 0.0);

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives
};

/// Trapezoid rule on arbitrary abscissae.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace powerdual::numerics
