#include <doctest.h>

#include <cstring>
#include <future>
#include <thread>
#include <vector>

#include "powerdual/core.hpp"
#include "powerdual/eigensolver.hpp"
#include "powerdual/wkb.hpp"

using namespace powerdual;

namespace {

struct Job {
    double nu;
    double l;
    int nodes;
};

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> solve_one(const Job& j) {
    const auto s = eigen::solve_radial(j.nu > 0 ? PotentialSpec::confining(j.nu) : PotentialSpec::singular(j.nu), j.l, j.nodes);
    std::vector<double> out = {s.eps, s.matching_defect};
    out.insert(out.end(), s.u.begin(), s.u.end());
    return out;
}

}  // namespace

TEST_CASE("concurrent solves are bitwise identical to serial ones") {
    std::vector<Job> jobs;
    for (double nu : {4.0, 2.0, -1.0, -4.0 / 3.0, 0.5, 6.0})
        for (double l : {0.0, 1.0, 2.5})
            for (int nodes : {0, 2}) jobs.push_back({nu, l, nodes});

    std::vector<std::vector<double>> serial;
    for (const auto& j : jobs) serial.push_back(solve_one(j));

    for (int round = 0; round < 2; ++round) {
        std::vector<std::future<std::vector<double>>> futures;
        for (const auto& j : jobs) futures.push_back(std::async(std::launch::async, solve_one, j));
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const auto got = futures[i].get();
            REQUIRE(got.size() == serial[i].size());
            bool identical = true;
            for (std::size_t k = 0; k < got.size(); ++k) identical = identical && same_bits(got[k], serial[i][k]);
            CHECK_MESSAGE(identical, "nu=" << jobs[i].nu << " l=" << jobs[i].l << " nodes=" << jobs[i].nodes);
        }
    }
}

TEST_CASE("wkb evaluations are order independent") {
    std::vector<double> energies;
    for (int k = 0; k < 64; ++k) energies.push_back(-0.2 + 0.0029 * k);
    const auto pot = PotentialSpec::singular(-1.0);
    auto compute = [&](std::size_t k) { return wkb::action(pot, energies[k], langer(0.0)).S; };
    std::vector<double> serial(energies.size());
    for (std::size_t k = 0; k < energies.size(); ++k) serial[k] = compute(k);

    std::vector<double> parallel(energies.size());
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < 4; ++t)
        threads.emplace_back([&, t] {
            for (std::size_t k = energies.size() - 1 - t;; k -= 4) {
                parallel[k] = compute(k);
                if (k < 4) break;
            }
        });
    for (auto& th : threads) th.join();
    for (std::size_t k = 0; k < energies.size(); ++k) CHECK(same_bits(parallel[k], serial[k]));
}
