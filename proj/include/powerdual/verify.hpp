#pragma once

#include <string>
#include <vector>

namespace powerdual::verify {

enum class Suite { all, quantum, wkb, orbits, susy };

Suite parse_suite(const std::string& name);
std::string to_string(Suite s);

struct Check {
    std::string suite;
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<Check> checks;

    bool passed() const;
    int failures() const;
};

/// Runs the selected checks in a fixed order. A check whose computation throws
/// is reported as failed with the exception text in `detail`. Every tolerance
/// is multiplied by `tolerance_scale`.
Report run(Suite suite, double tolerance_scale = 1.0);

std::vector<Check> quantum_checks();
std::vector<Check> wkb_checks();
std::vector<Check> orbit_checks();
std::vector<Check> susy_checks();

}  // namespace powerdual::verify
