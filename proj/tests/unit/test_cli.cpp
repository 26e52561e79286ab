#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "powerdual/cli.hpp"
#include "powerdual/io.hpp"
#include "powerdual/orbits.hpp"

using namespace powerdual;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Result r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

nlohmann::ordered_json run_json(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "json"});
    const auto r = run(args);
    REQUIRE(r.code == 0);
    return nlohmann::ordered_json::parse(r.out);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Numeric rows of a CSV file; comment lines and the header are skipped.
std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    bool header = true;
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

struct OutputDir {
    fs::path path;
    OutputDir() {
        path = fs::temp_directory_path() / ("powerdual_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
        ::setenv("POWERDUAL_OUTPUT_DIR", path.c_str(), 1);
    }
    ~OutputDir() {
        ::unsetenv("POWERDUAL_OUTPUT_DIR");
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("dual examples") {
    auto j = run_json({"dual", "--nu1", "4", "--l1", "1", "--eps1", "3"});
    const auto& row = j["rows"][0];
    CHECK(row["nu2"].get<double>() == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(row["l2_quantum"].get<double>()) < 1e-14);
    CHECK(row["eps2"].get<double>() == doctest::Approx(-3.0).epsilon(1e-14));

    j = run_json({"dual", "--pair", "2", "0"});
    CHECK(j["rows"][0]["nu1"].get<double>() == 8.0);
    CHECK(j["rows"][0]["nu2"].get<double>() == doctest::Approx(-1.6).epsilon(1e-15));

    const auto bad = run({"dual", "--nu1", "-3"});
    CHECK(bad.code == cli::kUsage);
    CHECK(bad.err.find("nu") != std::string::npos);
}

TEST_CASE("dual JSON matches the pinned golden file") {
    const auto r = run({"--format", "json", "dual", "--pair", "2", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.out == slurp(fs::path(POWERDUAL_GOLDEN_DIR) / "dual_pair_2_0.json"));
    CHECK(nlohmann::ordered_json::parse(r.out)["schema_version"] == io::kSchemaVersion);
}

TEST_CASE("spectrum methods") {
    auto j = run_json({"spectrum", "--nu", "2", "--l", "0", "--n", "3", "--method", "exact"});
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rows"][0]["eps"].get<double>() == 3.0);
    CHECK(j["rows"][1]["eps"].get<double>() == 7.0);
    CHECK(j["rows"][2]["eps"].get<double>() == 11.0);

    j = run_json({"spectrum", "--nu", "-1", "--l", "0", "--n", "2", "--method", "wkb"});
    CHECK(j["rows"][0]["eps"].get<double>() == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(j["rows"][1]["eps"].get<double>() == doctest::Approx(-1.0 / 16.0).epsilon(1e-12));

    CHECK(run({"spectrum", "--nu", "4", "--method", "exact"}).code == cli::kUsage);
    CHECK(run({"spectrum", "--nu", "4", "--method", "magic"}).code == cli::kUsage);
    CHECK(run({"spectrum", "--hard-sphere", "--l", "0", "--n", "2", "--method", "exact"}).code == 0);
}

TEST_CASE("numeric spectrum matches the FD golden file") {
    const auto golden = read_csv(fs::path(POWERDUAL_GOLDEN_DIR) / "spectrum_nu4_l1.csv");
    REQUIRE(golden.size() == 2);
    const auto j = run_json({"spectrum", "--nu", "4", "--l", "1", "--n", "2", "--method", "numeric"});
    for (std::size_t k = 0; k < 2; ++k) {
        const double eps = j["rows"][k]["eps"].get<double>();
        CHECK(std::abs(eps - golden[k][2]) < 1e-8 * golden[k][2]);
        CHECK(j["rows"][k]["nodes"].get<int>() == static_cast<int>(golden[k][1]));
    }
}

TEST_CASE("orbit traces written to the output directory") {
    OutputDir dir;
    const auto r = run({"orbit", "--nu", "2", "--eps", "4", "--l", "1", "--map"});
    REQUIRE(r.code == 0);
    const auto direct = read_csv(dir.path / "orbit.csv");
    const auto dual = read_csv(dir.path / "orbit_dual.csv");
    REQUIRE(direct.size() == static_cast<std::size_t>(orbits::kDefaultTraceSamples));
    REQUIRE(dual.size() == direct.size());
    using orbits::ClosedKind;
    const double ph_o = orbits::periapsis_phase(ClosedKind::oscillator);
    const double ph_c = orbits::periapsis_phase(ClosedKind::coulomb);
    const double eps2 = orbits::classical_energy_dual(4.0, 2.0), l2 = orbits::classical_angular_dual(1.0, 2.0);
    for (std::size_t i = 0; i < direct.size(); ++i) {
        const double th = direct[i][0], rho = direct[i][1];
        CHECK(std::abs(orbits::closed_orbit(ClosedKind::oscillator, th + ph_o, 4.0, 1.0) - rho) < 1e-9 * rho);
        CHECK(std::abs(direct[i][2] - rho * std::cos(th)) < 1e-12);
        const double th2 = dual[i][0], rho2 = dual[i][1];
        CHECK(std::abs(orbits::closed_orbit(ClosedKind::coulomb, th2 + ph_c, eps2, l2) - rho2) < 1e-9 * rho2);
    }
    CHECK(run({"orbit", "--nu", "2", "--eps", "1", "--l", "5"}).code == cli::kUsage);
}

TEST_CASE("solve exports the wavefunction") {
    const auto j = run_json({"solve", "--nu", "2", "--l", "0", "--nodes", "1"});
    CHECK(j["kind"] == "wavefunction");
    CHECK(j["meta"]["eps"].get<double>() == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(j["columns"] == nlohmann::ordered_json::array({"rho", "u"}));
    CHECK(j["rows"].size() > 500);
}

TEST_CASE("susy profile CSV carries the difference column") {
    const auto r = run({"--format", "csv", "susy", "--nu", "2", "--N", "1", "--l", "0", "--profile"});
    REQUIRE(r.code == 0);
    std::stringstream ss(r.out);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "rho,v_deep,v_shallow,difference");
    std::string line;
    int rows = 0;
    while (std::getline(ss, line)) {
        double v[4];
        std::stringstream ls(line);
        std::string cell;
        for (double& x : v) {
            std::getline(ls, cell, ',');
            x = std::stod(cell);
        }
        CHECK(v[3] == v[2] - v[1]);
        ++rows;
    }
    CHECK(rows > 500);
}

TEST_CASE("susy levels and degeneracy tables") {
    auto j = run_json({"susy", "--nu", "2", "--N", "1", "--l", "0", "--count", "3"});
    CHECK(j["rows"][0]["eps"].get<double>() == doctest::Approx(7.0).epsilon(1e-5));
    CHECK(j["meta"]["barrier_prediction"].get<double>() == 6.0);
    j = run_json({"degeneracy", "--nu", "2", "--l-max", "1", "--n-max", "3"});
    for (const auto& row : j["rows"]) CHECK(std::abs(row["measure"].get<double>()) < 1e-7);
}

TEST_CASE("verify exit codes") {
    auto r = run({"verify", "--suite", "quantum"});
    CHECK(r.code == 0);
    CHECK(r.out.find("OK ") != std::string::npos);
    r = run({"verify", "--suite", "orbits"});
    CHECK(r.code == 0);
    r = run({"verify", "--suite", "wkb", "--tolerance-scale", "0"});
    CHECK(r.code == cli::kCheckFailed);
    CHECK(r.out.find("FAIL wkb/a1_oscillator") != std::string::npos);
    CHECK(r.out.find("FAILED 0/5") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"dual", "--nu1", "2", "--bogus"}).code == cli::kUsage);
    CHECK(run({"verify", "--suite", "nope"}).code == cli::kUsage);
    CHECK(run({"--format", "xml", "dual", "--nu1", "2"}).code == cli::kUsage);
    CHECK(run({"dual", "--nu1", "2", "--pair", "1", "0"}).code == cli::kUsage);
}

TEST_CASE("verbose mode prints the configuration") {
    const auto r = run({"--verbose", "dual", "--nu1", "2"});
    CHECK(r.code == 0);
    REQUIRE(r.err.rfind("# config ", 0) == 0);
    const auto cfg = nlohmann::ordered_json::parse(r.err.substr(9));
    CHECK(cfg["subcommand"] == "dual");
    CHECK(cfg.contains("solver.tol"));
}

TEST_CASE("property: JSON output of every table command round-trips") {
    const std::vector<std::vector<std::string>> commands = {
        {"dual", "--nu1", "4", "--l1", "1", "--eps1", "3"},
        {"spectrum", "--nu", "4", "--l", "1", "--n", "3"},
        {"spectrum", "--nu", "8", "--l", "0", "--n", "3", "--method", "wkb"},
        {"action", "--nu", "-1", "--eps", "-0.25", "--l", "0"},
        {"box", "--l", "1", "--n", "5"},
        {"degeneracy", "--nu", "4", "--l-max", "1", "--n-max", "3"},
    };
    for (const auto& c : commands) {
        const auto j = run_json(c);
        const auto t = io::from_json(j);
        CHECK(io::to_json(t).dump(2) == j.dump(2));
    }
}

TEST_CASE("the installed binary reports the same exit codes") {
    const std::string bin = POWERDUAL_CLI_PATH;
    CHECK(std::system((bin + " dual --nu1 2 > /dev/null").c_str()) == 0);
    CHECK(WEXITSTATUS(std::system((bin + " dual --nu1 -3 > /dev/null 2>&1").c_str())) == 2);
    CHECK(WEXITSTATUS(std::system((bin + " verify --suite wkb --tolerance-scale 0 > /dev/null").c_str())) == 1);
}
