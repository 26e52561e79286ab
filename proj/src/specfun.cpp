#include "powerdual/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "powerdual/errors.hpp"
#include "powerdual/numerics.hpp"

namespace powerdual::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos-type series with g = 671/128 and 14 terms.
constexpr double kLanczosG = 5.24218750000000000;
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,     -0.491913816097620199,
    .339946499848118887e-4,  .465236289270485756e-4,  -.983744753048795646e-4, .158088703224912494e-3,
    -.210264441724104883e-3, .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5,
};

// sin(pi x) with exact argument reduction so that values near the poles of
// gamma keep full relative precision.
double sin_pi(double x) {
    const double n = std::round(x);
    const double f = x - n;  // exact
    const double s = std::sin(kPi * f);
    return std::fmod(std::abs(n), 2.0) == 1.0 ? -s : s;
}

double gamma_lanczos(double x) {
    // valid for x >= 0.5
    double ser = kLanczosC0;
    for (std::size_t j = 0; j < kLanczos.size(); ++j) ser += kLanczos[j] / (x + 1.0 + static_cast<double>(j));
    const double t = x + kLanczosG;
    // split the power to avoid overflow for large x
    const double p = std::pow(t, 0.5 * (x + 0.5));
    return std::sqrt(2.0 * kPi) * ser / x * p * (p * std::exp(-t));
}

}  // namespace

double gamma(double x) {
    if (std::isnan(x)) return x;
    if (x <= 0.0 && x == std::floor(x)) {
        std::ostringstream os;
        os << "gamma: pole at " << x;
        throw PoleError(os.str());
    }
    if (x < 0.5) return kPi / (sin_pi(x) * gamma_lanczos(1.0 - x));
    return gamma_lanczos(x);
}

double kummer_m(const KummerParams& p, double z_cutoff) {
    const double a = p.a;
    const double b = p.b;
    const double z = p.z;
    if (b <= 0.0 && b == std::floor(b)) throw DomainError("kummer_m: b is a non-positive integer");
    if (!(std::abs(z) <= z_cutoff)) throw DomainError("kummer_m: |z| exceeds the configured cutoff");

    const bool polynomial = a <= 0.0 && a == std::floor(a);
    if (polynomial) {
        const int n = static_cast<int>(-a);
        numerics::CompensatedSum sum;
        double term = 1.0;
        sum.add(term);
        for (int k = 0; k < n; ++k) {
            term *= (a + k) / (b + k) * z / (k + 1.0);
            sum.add(term);
        }
        return sum.value();
    }
    // Kummer's transformation keeps the series free of cancellation for z < 0.
    if (z < 0.0) return std::exp(z) * kummer_m({b - a, b, -z}, z_cutoff);

    numerics::CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    constexpr int kMaxTerms = 20000;
    for (int k = 0; k < kMaxTerms; ++k) {
        term *= (a + k) / (b + k) * z / (k + 1.0);
        sum.add(term);
        if (k > std::abs(z) && std::abs(term) < 1e-13 * std::abs(sum.value())) return sum.value();
        if (term == 0.0) return sum.value();
    }
    throw NonConvergenceError("kummer_m: series did not converge");
}

namespace {

double sph_bessel_series(int l, double x) {
    // j_l(x) = x^l/(2l+1)!! sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
    double pref = 1.0;
    for (int k = 1; k <= l; ++k) pref *= x / (2.0 * k + 1.0);
    numerics::CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    const double q = -0.5 * x * x;
    for (int k = 1; k < 200; ++k) {
        term *= q / (k * (2.0 * l + 2.0 * k + 1.0));
        sum.add(term);
        if (std::abs(term) < 1e-17 * std::abs(sum.value())) break;
    }
    return pref * sum.value();
}

}  // namespace

double sph_bessel_j(int l, double x) {
    if (l < 0) throw DomainError("sph_bessel_j: l must be >= 0");
    if (x < 0.0) return (l % 2 == 0 ? 1.0 : -1.0) * sph_bessel_j(l, -x);
    if (x < 1.0) return sph_bessel_series(l, x);
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double j0 = s / x;
    if (l == 0) return j0;
    const double j1 = s / (x * x) - c / x;
    if (l == 1) return j1;
    const double j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
    if (l == 2) return j2;
    if (x > l) {
        double jm = j1;
        double jc = j2;
        for (int k = 2; k < l; ++k) {
            const double jn = (2.0 * k + 1.0) / x * jc - jm;
            jm = jc;
            jc = jn;
        }
        return jc;
    }
    // Miller's downward recurrence, normalised against the closed forms.
    const int start = l + 20 + static_cast<int>(std::sqrt(40.0 * l));
    double jp = 0.0;
    double jc = 1e-300;
    double at_l = 0.0;
    double at_0 = 0.0;
    double at_1 = 0.0;
    for (int k = start; k >= 1; --k) {
        const double jm = (2.0 * k + 1.0) / x * jc - jp;
        jp = jc;
        jc = jm;
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            at_l *= 1e-250;
        }
        if (k - 1 == l) at_l = jc;
        if (k - 1 == 1) at_1 = jc;
        if (k - 1 == 0) at_0 = jc;
    }
    return std::abs(j0) > std::abs(j1) ? at_l * (j0 / at_0) : at_l * (j1 / at_1);
}

double mcmahon_zero(int l, int n) {
    if (l < 0 || n < 1) throw DomainError("mcmahon_zero: requires l >= 0, n >= 1");
    const double beta = (n + 0.5 * l) * kPi;
    const double sigma = (2.0 * l + 1.0) * (2.0 * l + 1.0);
    return beta - (sigma - 1.0) / (8.0 * beta);
}

double sph_bessel_zero(int l, int n) {
    if (l < 0 || n < 1) throw DomainError("sph_bessel_zero: requires l >= 0, n >= 1");
    auto f = [l](double x) { return sph_bessel_j(l, x); };

    double lo = 0.0;
    double hi = 0.0;
    bool found = false;
    if (n >= l) {
        const double z0 = mcmahon_zero(l, n);
        lo = z0 - 1.0;
        hi = z0 + 1.0;
        found = (f(lo) > 0) != (f(hi) > 0);
    }
    if (!found) {
        // zeros of j_l are separated by more than pi, so a pi/4 scan sees each one
        const double step = 0.25 * kPi;
        double x = l > 0 ? static_cast<double>(l) : step;
        double fx = f(x);
        int count = 0;
        for (int it = 0; it < 100000 && count < n; ++it) {
            const double xn = x + step;
            const double fn = f(xn);
            if ((fx > 0) != (fn > 0)) {
                ++count;
                if (count == n) {
                    lo = x;
                    hi = xn;
                    found = true;
                }
            }
            x = xn;
            fx = fn;
        }
    }
    if (!found) throw BracketError("sph_bessel_zero: failed to bracket zero");

    auto root = numerics::bisect(f, lo, hi, 1e-15 * hi);
    double z = root.x;
    for (int it = 0; it < 3; ++it) {
        const double jl = f(z);
        const double djl = (l == 0 ? -sph_bessel_j(1, z) : sph_bessel_j(l - 1, z) - (l + 1.0) / z * jl);
        if (djl == 0.0) break;
        const double dz = jl / djl;
        if (std::abs(dz) > 1e-6) break;
        z -= dz;
    }
    if (std::abs(f(z)) >= 1e-12) throw NonConvergenceError("sph_bessel_zero: residual too large");
    return z;
}

}  // namespace powerdual::specfun
