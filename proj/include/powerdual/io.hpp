#pragma once

// Tabular records and their CSV / JSON / aligned-text renderings.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "powerdual/eigensolver.hpp"
#include "powerdual/orbits.hpp"
#include "powerdual/verify.hpp"

namespace powerdual::io {

inline constexpr int kSchemaVersion = 1;

enum class Format { csv, json, table };

Format parse_format(const std::string& name);

using Value = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();

    void add_row(std::vector<Value> row);
};

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

std::string to_csv(const Table& t);
/// {"schema_version", "kind", "meta", "columns", "rows": [{column: value}]}.
nlohmann::ordered_json to_json(const Table& t);
Table from_json(const nlohmann::ordered_json& j);
std::string to_text(const Table& t);

std::string render(const Table& t, Format f);

/// Wavefunction samples (rho, u) with the eigenvalue and diagnostics in meta.
Table solution_table(const eigen::RadialSolution& s);
Table trace_table(const orbits::OrbitTrace& trace);
Table report_table(const verify::Report& report);

/// One line per check followed by a summary line; no timings.
std::string report_text(const verify::Report& report);

}  // namespace powerdual::io
