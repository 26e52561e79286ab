#include <doctest.h>

#include <cmath>
#include <random>

#include "powerdual/core.hpp"
#include "powerdual/errors.hpp"

using namespace powerdual;
using doctest::Approx;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("exponent_dual on the integer pairs") {
    CHECK(core::exponent_dual(2.0) == Approx(-1.0).epsilon(1e-15));
    CHECK(core::exponent_dual(4.0) == Approx(-4.0 / 3.0).epsilon(1e-15));
    CHECK(core::exponent_dual(8.0) == Approx(-8.0 / 5.0).epsilon(1e-15));
    CHECK_THROWS_AS(core::exponent_dual(-3.0), DomainError);
    CHECK_THROWS_AS(core::exponent_dual(-2.0), DomainError);
    CHECK_THROWS_AS(core::exponent_dual(0.0), DomainError);
}

TEST_CASE("angular_dual examples") {
    CHECK(std::abs(core::angular_dual(1.0, 4.0)) < 1e-14);
    CHECK(std::abs(core::angular_dual(2.0, 8.0)) < 1e-14);
    CHECK(core::angular_dual(2.0, 2.0, AngularMap::classical) == Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(core::angular_dual(0.5, 2.0)) < 1e-15);
}

TEST_CASE("energy_dual examples and equivalent forms") {
    CHECK(core::energy_dual(2.0, 2.0) == Approx(-1.0).epsilon(1e-14));
    CHECK(core::energy_dual(3.0, 4.0) == Approx(-3.0).epsilon(1e-14));
    CHECK_THROWS_AS(core::energy_dual(0.0, 2.0), DomainError);
    CHECK_THROWS_AS(core::energy_dual(-1.0, 2.0), DomainError);
    for (double nu1 : {0.5, 1.0, 2.0, 4.0, 8.0, 8.0 / 3.0}) {
        for (double e : {0.3, 3.0, 17.0}) {
            const double ref = core::energy_dual(e, nu1);
            CHECK(rel(core::energy_dual_scaling_form(e, nu1), ref) < 1e-12);
            CHECK(rel(core::energy_dual_action_form(e, nu1), ref) < 1e-12);
        }
    }
}

TEST_CASE("spectral_residual distinguishes dual from broken pairs") {
    CHECK(std::abs(core::spectral_residual(2.0, -1.0, 2.0, -1.0)) < 1e-14);
    CHECK(std::abs(core::spectral_residual(3.0, -3.0, 4.0, -4.0 / 3.0)) < 1e-14);
    CHECK(std::abs(core::spectral_residual(3.0, -2.0, 4.0, -4.0 / 3.0)) > 1e-3);
    CHECK_THROWS_AS(core::spectral_residual(3.0, -3.0, 4.0, -1.0), DomainError);
}

TEST_CASE("integer_pair reproduces the explicit maps") {
    const auto p10 = core::integer_pair(1, 0);
    CHECK(p10.nu1 == Approx(4.0));
    CHECK(p10.nu2 == Approx(-4.0 / 3.0));
    CHECK(p10.map_energy(2.5) == Approx(-81.0 / std::pow(2.5, 3)).epsilon(1e-13));

    const auto p20 = core::integer_pair(2, 0);
    CHECK(p20.nu1 == Approx(8.0));
    CHECK(p20.nu2 == Approx(-8.0 / 5.0));
    CHECK(p20.map_energy(7.0) == Approx(-std::pow(5.0, 8) / std::pow(7.0, 5)).epsilon(1e-13));

    const auto p31 = core::integer_pair(3, 1);
    CHECK(p31.nu1 == Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(p31.nu2 == Approx(-8.0 / 7.0).epsilon(1e-15));
    CHECK_NOTHROW(p31.validate(1e-12));

    CHECK_THROWS_AS(core::integer_pair(1, 1), ArgumentError);
    CHECK_THROWS_AS(core::integer_pair(0, 1), ArgumentError);
}

TEST_CASE("enumerate_integer_pairs ordering and size") {
    CHECK(core::enumerate_integer_pairs(1).size() == 1);
    const auto two = core::enumerate_integer_pairs(2);
    REQUIRE(two.size() == 3);
    CHECK(two[0].l1 == 1.0);
    CHECK(two[0].l2 == 0.0);
    CHECK(two[1].l1 == 2.0);
    CHECK(two[1].l2 == 0.0);
    CHECK(two[2].l1 == 2.0);
    CHECK(two[2].l2 == 1.0);
    CHECK(core::enumerate_integer_pairs(3).size() == 6);
}

TEST_CASE("scale_to_dimensionless") {
    auto s = core::scale_to_dimensionless({1.0, 0.5, 1.0, 2.0});
    CHECK(s.length == Approx(1.0));
    CHECK(s.energy == Approx(1.0));
    s = core::scale_to_dimensionless({1.0, 0.5, 16.0, 2.0});
    CHECK(s.length == Approx(0.5).epsilon(1e-15));
    CHECK(s.energy == Approx(4.0).epsilon(1e-15));
    s = core::scale_to_dimensionless({2.0, 0.5, 1.0, -1.0});
    CHECK(s.length == Approx(4.0).epsilon(1e-15));
    CHECK(s.energy == Approx(0.25).epsilon(1e-15));
    for (double E : {-3.7, 1e-3, 42.0}) CHECK(rel(s.to_physical(s.to_dimensionless(E)), E) < 1e-14);
    CHECK_THROWS(core::scale_to_dimensionless({-1.0, 0.5, 1.0, 2.0}));
}

TEST_CASE("potential shapes respect their domains") {
    CHECK_THROWS_AS(PotentialSpec::confining(-1.0), DomainError);
    CHECK_THROWS_AS(PotentialSpec::singular(0.5), DomainError);
    CHECK_THROWS_AS(PotentialSpec::singular(-2.0), DomainError);
    CHECK(PotentialSpec::confining(2.0)(3.0) == Approx(9.0));
    CHECK(PotentialSpec::singular(-1.0)(4.0) == Approx(-0.25));
    CHECK(quantum(2.0).coefficient() == 6.0);
    CHECK(langer(2.0).coefficient() == 6.25);
    CHECK(classical(2.0).coefficient() == 4.0);
}

TEST_CASE("property: involution and product condition") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> pos(0.05, 50.0), neg(-1.95, -0.05);
    for (int i = 0; i < 500; ++i) {
        const double nu = (i % 2) ? pos(rng) : neg(rng);
        const double nu2 = core::exponent_dual(nu);
        CHECK(std::abs(core::exponent_dual(nu2) - nu) <= 1e-12 * std::max(1.0, std::abs(nu)));
        CHECK(std::abs((nu + 2.0) * (nu2 + 2.0) - 4.0) <= 1e-12 * std::max(1.0, std::abs(nu)));
    }
}

TEST_CASE("property: angular round trip in both conventions") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> nu_d(0.1, 20.0), l_d(0.0, 10.0);
    for (int i = 0; i < 400; ++i) {
        const double nu1 = nu_d(rng), l1 = l_d(rng), nu2 = core::exponent_dual(nu1);
        for (auto conv : {AngularMap::quantum, AngularMap::classical}) {
            const double l2 = core::angular_dual(l1, nu1, conv);
            CHECK(l2 >= (conv == AngularMap::quantum ? -0.5 : 0.0));
            CHECK(std::abs(core::angular_dual(l2, nu2, conv) - l1) < 1e-12 * std::max(1.0, l1));
        }
    }
}

TEST_CASE("property: energy round trip and symmetric forms") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> nu_d(0.2, 12.0), log_e(std::log(1e-3), std::log(1e6));
    for (int i = 0; i < 400; ++i) {
        const double nu1 = nu_d(rng), e1 = std::exp(log_e(rng)), nu2 = core::exponent_dual(nu1);
        const double e2 = core::energy_dual(e1, nu1);
        CHECK(e2 < 0.0);
        CHECK(rel(core::energy_dual_inverse(e2, nu2), e1) < 1e-10);
        const double lhs = std::sqrt(nu1 + 2.0) * std::pow(e1, 1.0 / nu2);
        CHECK(std::abs(core::spectral_residual(e1, e2, nu1, nu2)) < 1e-10 * std::abs(lhs));
        CHECK(std::abs(core::log_form_residual(e1, e2, nu1, nu2)) < 1e-10 * std::max(1.0, std::abs(nu1 * std::log(e1))));
    }
}

TEST_CASE("quantum dual angular momentum can fall in (-1/2, 0)") {
    // (l2 + 1/2) = (l1 + 1/2)(-nu2/nu1) < 1/2 once nu1 > 4 l1.
    const double l2 = core::angular_dual(0.0, 20.0);
    CHECK(l2 == doctest::Approx(0.5 / 11.0 - 0.5).epsilon(1e-14));
    CHECK(l2 * (l2 + 1.0) < 0.0);
}

TEST_CASE("property: integer pairs map integers to integers") {
    for (const auto& p : core::enumerate_integer_pairs(6)) {
        CHECK_NOTHROW(p.validate(1e-12));
        const double l2 = core::angular_dual(p.l1, p.nu1);
        CHECK(std::abs(l2 - p.l2) < 1e-12);
        CHECK(std::abs(l2 - std::round(l2)) < 1e-12);
    }
}
