#include "powerdual/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "powerdual/errors.hpp"

namespace powerdual::io {

namespace {

std::string cell(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
    return std::get<std::string>(v);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

nlohmann::ordered_json json_value(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    if (const auto* d = std::get_if<double>(&v)) {
        if (std::isfinite(*d)) return *d;
        return nullptr;
    }
    return std::get<std::string>(v);
}

Value from_json_value(const nlohmann::ordered_json& j) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number()) return j.get<double>();
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (j.is_boolean()) return std::string(j.get<bool>() ? "true" : "false");
    return j.get<std::string>();
}

}  // namespace

Format parse_format(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    if (name == "table") return Format::table;
    throw ArgumentError("unknown format '" + name + "' (csv|json|table)");
}

void Table::add_row(std::vector<Value> row) {
    if (row.size() != columns.size()) throw ArgumentError("Table::add_row: width mismatch");
    rows.push_back(std::move(row));
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << csv_escape(t.columns[c]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_escape(cell(row[c]));
        os << '\n';
    }
    return os.str();
}

nlohmann::ordered_json to_json(const Table& t) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = t.kind;
    j["meta"] = t.meta;
    j["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) r[t.columns[c]] = json_value(row[c]);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

Table from_json(const nlohmann::ordered_json& j) {
    if (j.value("schema_version", -1) != kSchemaVersion) throw ArgumentError("from_json: unsupported schema_version");
    Table t;
    t.kind = j.at("kind").get<std::string>();
    t.meta = j.at("meta");
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        std::vector<Value> row;
        row.reserve(t.columns.size());
        for (const auto& c : t.columns) row.push_back(from_json_value(r.at(c)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string to_text(const Table& t) {
    std::vector<std::size_t> width(t.columns.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
    for (const auto& row : t.rows) {
        std::vector<std::string> line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line.push_back(cell(row[c]));
            width[c] = std::max(width[c], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    std::ostringstream os;
    if (!t.meta.empty()) {
        for (const auto& [k, v] : t.meta.items()) os << "# " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    auto emit = [&](const std::vector<std::string>& line) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            os << (c ? "  " : "");
            os << std::string(width[c] - line[c].size(), ' ') << line[c];
        }
        os << '\n';
    };
    emit(t.columns);
    for (const auto& line : cells) emit(line);
    return os.str();
}

std::string render(const Table& t, Format f) {
    switch (f) {
        case Format::csv: return to_csv(t);
        case Format::json: return to_json(t).dump(2) + "\n";
        case Format::table: return to_text(t);
    }
    return to_text(t);
}

Table solution_table(const eigen::RadialSolution& s) {
    Table t;
    t.kind = "wavefunction";
    t.columns = {"rho", "u"};
    t.meta["potential"] = s.potential;
    t.meta["l"] = s.l;
    t.meta["nodes"] = s.nodes;
    t.meta["eps"] = s.eps;
    t.meta["matching_defect"] = s.matching_defect;
    t.meta["grid_points"] = s.grid.size();
    for (std::size_t i = 0; i < s.grid.size(); ++i) t.add_row({s.grid[i], s.u[i]});
    return t;
}

Table trace_table(const orbits::OrbitTrace& trace) {
    Table t;
    t.kind = "orbit_trace";
    t.columns = {"theta", "rho", "x", "y"};
    t.meta["potential"] = trace.potential.describe();
    t.meta["eps"] = trace.eps;
    t.meta["l"] = trace.l;
    t.meta["periapsis"] = trace.periapsis;
    t.meta["apoapsis"] = trace.apoapsis;
    for (const auto& p : trace.samples)
        t.add_row({p.theta, p.rho, p.rho * std::cos(p.theta), p.rho * std::sin(p.theta)});
    return t;
}

Table report_table(const verify::Report& report) {
    Table t;
    t.kind = "verify_report";
    t.columns = {"suite", "check", "status", "measured", "tolerance", "detail"};
    t.meta["suite"] = report.suite;
    t.meta["checks"] = report.checks.size();
    t.meta["failures"] = report.failures();
    for (const auto& c : report.checks)
        t.add_row({c.suite, c.name, std::string(c.passed ? "PASS" : "FAIL"), c.measured, c.tolerance, c.detail});
    return t;
}

std::string report_text(const verify::Report& report) {
    std::ostringstream os;
    char buf[64];
    for (const auto& c : report.checks) {
        std::snprintf(buf, sizeof buf, "%.3e", c.measured);
        std::string measured = buf;
        std::snprintf(buf, sizeof buf, "%.1e", c.tolerance);
        os << (c.passed ? "PASS " : "FAIL ") << c.suite << "/" << c.name << "  measured=" << measured
           << "  tol=" << buf;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
    os << (report.passed() ? "OK " : "FAILED ") << report.checks.size() - report.failures() << "/"
       << report.checks.size() << " checks passed (suite " << report.suite << ")\n";
    return os.str();
}

}  // namespace powerdual::io
