#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "powerdual/eigensolver.hpp"
#include "powerdual/io.hpp"
#include "powerdual/susy.hpp"

namespace powerdual::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Every default used by a command, plus the overrides parsed from flags.
struct RunConfig {
    std::string subcommand;
    io::Format format = io::Format::table;
    std::optional<std::string> output;
    bool verbose = false;

    eigen::SolverOptions solver;
    susy::ShallowOptions shallow;
    double action_tolerance = 1e-12;
    int trace_samples = orbits::kDefaultTraceSamples;
    std::filesystem::path output_dir = ".";  ///< POWERDUAL_OUTPUT_DIR when set

    nlohmann::ordered_json describe() const;
    std::filesystem::path resolve(const std::string& path) const;
};

/// Parses `args` (without the program name), dispatches, and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace powerdual::cli
