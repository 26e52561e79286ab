#pragma once

namespace powerdual::specfun {

/// Gamma function for real arguments (Lanczos approximation with reflection
/// for x < 1/2). Throws PoleError at non-positive integers.
double gamma(double x);

struct KummerParams {
    double a = 0.0;
    double b = 1.0;  ///< must not be a non-positive integer
    double z = 0.0;
};

inline constexpr double kKummerZCutoff = 500.0;

/// Confluent hypergeometric M(a, b, z) = sum (a)_k / (b)_k z^k / k!.
/// For a = -n the finite polynomial is summed exactly (n + 1 terms).
double kummer_m(const KummerParams& p, double z_cutoff = kKummerZCutoff);

/// Spherical Bessel function j_l(x).
double sph_bessel_j(int l, double x);

/// n-th positive zero (n >= 1) of j_l, |j_l(z)| < 1e-12 at the result.
double sph_bessel_zero(int l, int n);

/// Two-term McMahon estimate beta - (sigma - 1)/(8 beta),
/// beta = (n + l/2) pi, sigma = (2l + 1)^2.
double mcmahon_zero(int l, int n);

}  // namespace powerdual::specfun
