#include <doctest.h>

#include <cmath>

#include "powerdual/eigensolver.hpp"
#include "powerdual/errors.hpp"
#include "powerdual/susy.hpp"

using namespace powerdual;
using namespace powerdual::susy;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<eigen::RadialSolution> on_shared_grid(const PotentialSpec& pot, double l, int count) {
    eigen::SolverOptions o;
    o.grid = eigen::shared_grid(pot, l, count);
    return eigen::spectrum(pot, l, count, o);
}

}  // namespace

TEST_CASE("gram matrix of one state is the cumulative norm") {
    for (double l : {0.0, 1.0, 2.0}) {
        const auto states = on_shared_grid(PotentialSpec::confining(2.0), l, 1);
        const auto g = gram_matrix(states);
        const std::size_t n = g.grid.size();
        CHECK(std::abs(g(n - 1, 0, 0) - 1.0) < 1e-6);
        for (std::size_t i = 1; i < n; ++i) CHECK(g(i, 0, 0) >= g(i - 1, 0, 0));
        CHECK(g(0, 0, 0) >= 0.0);
        // near the origin M ~ rho^(2l+3)
        const std::size_t i0 = 200, i1 = 400;
        const double slope = std::log(g(i1, 0, 0) / g(i0, 0, 0)) / std::log(g.grid[i1] / g.grid[i0]);
        CHECK(std::abs(slope - (2.0 * l + 3.0)) < 1e-3);
    }
}

TEST_CASE("gram matrix of two states is asymptotically the identity") {
    const auto states = on_shared_grid(PotentialSpec::confining(2.0), 0.0, 2);
    const auto g = gram_matrix(states);
    const std::size_t last = g.grid.size() - 1;
    CHECK(std::abs(g(last, 0, 1)) < 1e-6);
    CHECK(std::abs(g(last, 1, 0)) < 1e-6);
    CHECK(std::abs(g(last, 1, 1) - 1.0) < 1e-6);
}

TEST_CASE("property: det M is positive and grows toward 1") {
    // Checked where det M is resolved in double precision: det M / prod M_jj
    // above the same 1e-11 floor the construction uses.
    for (int N : {1, 2, 3}) {
        const auto g = gram_matrix(on_shared_grid(PotentialSpec::confining(4.0), 0.0, N));
        const std::size_t n = g.grid.size();
        double prev = 0.0;
        int resolved = 0;
        for (std::size_t i = 1; i < n; ++i) {
            double diag = 1.0;
            for (int j = 0; j < N; ++j) diag *= g(i, j, j);
            const double d = g.det(i);
            if (!(d > 1e-11 * diag)) continue;
            ++resolved;
            CHECK(d > 0.0);
            CHECK(d >= prev * (1.0 - 1e-9));
            prev = d;
        }
        CHECK(resolved > static_cast<int>(n / 8));
        CHECK(std::abs(prev - 1.0) < 1e-6);
    }
}

TEST_CASE("gram matrix rejects non-orthonormal input") {
    const auto s = on_shared_grid(PotentialSpec::confining(2.0), 0.0, 1);
    std::vector<eigen::RadialSolution> twice{s[0], s[0]};
    CHECK_THROWS_AS(gram_matrix(twice), OrthonormalityError);
}

TEST_CASE("oscillator N=1, l=0 partner") {
    const auto sp = shallow_potential(PotentialSpec::confining(2.0), 1, 0.0);
    CHECK(sp.removed == 1);
    CHECK(rel(sp.removed_energies.at(0), 3.0) < 1e-9);
    const auto levels = shallow_spectrum(sp, 3);
    CHECK(rel(levels[0].eps, 7.0) < 1e-5);
    CHECK(rel(levels[1].eps, 11.0) < 1e-5);
    CHECK(rel(levels[2].eps, 15.0) < 1e-5);
    CHECK(rel(near_origin_exponent(sp), 6.0) < 0.02);
    CHECK(tail_gap(sp) < 1e-4);
    for (std::size_t i = 0; i < sp.values.size(); ++i) CHECK(std::isfinite(sp.values[i]));
}

TEST_CASE("barrier coefficients") {
    CHECK(barrier_prediction(0.0, 1) == 6.0);
    CHECK(barrier_prediction(0.0, 2) == 20.0);
    CHECK(barrier_prediction(1.0, 1) == 12.0);
    const auto n2 = shallow_potential(PotentialSpec::confining(2.0), 2, 0.0);
    CHECK(rel(near_origin_exponent(n2), 20.0) < 0.02);
    const auto l1 = shallow_potential(PotentialSpec::confining(2.0), 1, 1.0);
    CHECK(rel(near_origin_exponent(l1), 12.0) < 0.02);
    const auto q = shallow_potential(PotentialSpec::confining(4.0), 1, 0.0);
    CHECK(rel(near_origin_exponent(q), 6.0) < 0.02);
}

TEST_CASE("property: spectrum deletion") {
    for (double nu : {2.0, 4.0}) {
        const auto deep = eigen::spectrum(PotentialSpec::confining(nu), 0.0, 5);
        for (int N : {1, 2}) {
            const auto sp = shallow_potential(PotentialSpec::confining(nu), N, 0.0);
            const auto levels = shallow_spectrum(sp, 3);
            for (int j = 0; j < 3; ++j) CHECK(rel(levels[j].eps, deep[j + N].eps) < 1e-5);
            CHECK(tail_gap(sp) < 1e-4);
        }
    }
}

TEST_CASE("shallow potential as a tabulated spec") {
    const auto sp = shallow_potential(PotentialSpec::confining(4.0), 1, 0.0);
    CHECK(sp.spec.is_tabulated());
    CHECK(sp.floor_radius > sp.grid.rho_min());
    CHECK(sp.fit_residual < sp.fit_tolerance);
    // below the floor the fitted form is reported
    const double r = sp.grid[sp.floor_index / 2];
    const double fitted = sp.fit_c / (r * r) + sp.fit_b + sp.fit_d * r * r;
    CHECK(rel(sp.values[sp.floor_index / 2], fitted) < 1e-12);
}

TEST_CASE("shallow_potential error paths") {
    CHECK_THROWS_AS(shallow_potential(PotentialSpec::confining(2.0), 0, 0.0), ArgumentError);
    CHECK_THROWS_AS(shallow_potential(PotentialSpec::confining(2.0), kMaxRemoved + 1, 0.0), ArgumentError);
    CHECK_THROWS_AS(shallow_potential(gaussian_well(3.0, 1.0), 2, 0.0), InsufficientStatesError);
}

TEST_CASE("degeneracy report: exact for the oscillator") {
    for (const auto& row : degeneracy_report(2.0, 2, 4)) {
        CHECK(std::abs(row.delta) < 1e-7);
        CHECK(rel(row.spacing, 4.0) < 1e-9);
        CHECK(row.measure < 1e-7);
    }
}

TEST_CASE("property: quasi-degeneracy improves with n") {
    const auto lin = degeneracy_report(1.0, 0, 8);
    CHECK(lin.front().measure > lin.back().measure);
    const auto quartic = degeneracy_report(4.0, 1, 9);
    for (const auto& row : quartic)
        if (row.n >= 4) CHECK(row.measure < 0.05);
}

TEST_CASE("deep Gaussian well mid-spectrum quasi-degeneracy") {
    const auto rows = degeneracy_report(gaussian_well(500.0, 1.0), 0, 6);
    for (const auto& row : rows) {
        CHECK(row.eps < 0.0);
        if (row.n >= 1 && row.n <= 5) CHECK(row.measure < 0.05);
    }
}

TEST_CASE("three removed states") {
    for (double nu : {2.0, 4.0}) {
        const auto deep = eigen::spectrum(PotentialSpec::confining(nu), 0.0, 6);
        const auto sp = shallow_potential(PotentialSpec::confining(nu), 3, 0.0);
        const auto levels = shallow_spectrum(sp, 3);
        for (int j = 0; j < 3; ++j) CHECK(rel(levels[j].eps, deep[j + 3].eps) < 1e-7);
    }
    const auto osc = shallow_potential(PotentialSpec::confining(2.0), 3, 0.0);
    CHECK(rel(near_origin_exponent(osc), barrier_prediction(0.0, 3)) < 0.02);
}

TEST_CASE("odd-l partner: shallow rho^4 + 2/rho^2 against rho^4 at l = 2N + 1") {
    const auto deep = PotentialSpec::confining(4.0).with_inverse_square(2.0);
    const auto sp = shallow_potential(deep, 1, 0.0);
    const auto levels = shallow_spectrum(sp, 9);
    const auto l1 = eigen::spectrum(PotentialSpec::confining(4.0), 1.0, 11);
    const auto l3 = eigen::spectrum(PotentialSpec::confining(4.0), 3.0, 9);
    for (int n = 0; n < 9; ++n) {
        // the deep potential is rho^4 at l = 1, so the partner keeps its spectrum minus one level
        CHECK(rel(levels[n].eps, l1[n + 1].eps) < 1e-7);
        const double measure = std::abs(levels[n].eps - l3[n].eps) / (l1[n + 2].eps - l1[n + 1].eps);
        if (n >= 4) CHECK(measure < 0.05);
    }
}
