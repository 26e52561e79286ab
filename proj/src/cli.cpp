#include "powerdual/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "powerdual/core.hpp"
#include "powerdual/errors.hpp"
#include "powerdual/orbits.hpp"
#include "powerdual/specfun.hpp"
#include "powerdual/verify.hpp"
#include "powerdual/wkb.hpp"

namespace powerdual::cli {

namespace {

using io::Table;
using io::Value;

struct PotentialFlags {
    std::optional<double> nu;
    bool hard_sphere = false;
    double inverse_square = 0.0;

    void attach(CLI::App* app, bool allow_box) {
        app->add_option("--nu", nu, "power-law exponent: nu > 0 gives rho^nu, -2 < nu < 0 gives -rho^nu");
        if (allow_box) app->add_flag("--hard-sphere", hard_sphere, "infinite wall at rho = 1");
        app->add_option("--inverse-square", inverse_square, "extra c/rho^2 term");
    }

    PotentialSpec build() const {
        if (hard_sphere == nu.has_value()) throw ArgumentError("give exactly one of --nu or --hard-sphere");
        PotentialSpec p = PotentialSpec::hard_sphere();
        if (nu) {
            const double v = *nu;
            if (v > 0.0)
                p = PotentialSpec::confining(v);
            else if (v > -2.0 && v < 0.0)
                p = PotentialSpec::singular(v);
            else
                throw DomainError("--nu must satisfy nu > 0 or -2 < nu < 0");
        }
        return inverse_square != 0.0 ? p.with_inverse_square(inverse_square) : p;
    }
};

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

Centrifugal parse_convention(const std::string& name, double l) {
    if (name == "langer") return langer(l);
    if (name == "quantum") return quantum(l);
    if (name == "classical") return classical(l);
    throw ArgumentError("unknown convention '" + name + "' (langer|quantum|classical)");
}

struct Emitter {
    const RunConfig& cfg;
    std::ostream& out;

    void operator()(const std::string& text) const {
        if (!cfg.output) {
            out << text;
            return;
        }
        const auto path = cfg.resolve(*cfg.output);
        std::ofstream f(path);
        if (!f) throw ArgumentError("cannot write " + path.string());
        f << text;
    }
    void operator()(const Table& t) const { (*this)(io::render(t, cfg.format)); }
};

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw ArgumentError("cannot write " + path.string());
    f << text;
}

// --- commands ---------------------------------------------------------------------

struct DualArgs {
    std::optional<double> nu1;
    std::vector<int> pair;
    double l1 = 0.0;
    std::optional<double> eps1;
};

int cmd_dual(const DualArgs& a, const Emitter& emit) {
    if (a.nu1.has_value() == !a.pair.empty()) throw ArgumentError("give exactly one of --nu1 or --pair");
    DualPair q;
    double l1 = a.l1;
    if (a.nu1) {
        require(*a.nu1 > 0.0, "dual: --nu1 must be > 0 (the confining side)");
        require(l1 >= 0.0, "dual: --l1 must be >= 0");
        q = core::make_pair(*a.nu1, l1);
    } else {
        q = core::integer_pair(a.pair[0], a.pair[1]);
        l1 = q.l1;
    }
    Table t;
    t.kind = "dual_pair";
    t.columns = {"nu1", "nu2", "l1", "l2_quantum", "l2_classical"};
    std::vector<Value> row = {q.nu1, q.nu2, l1, q.l2, core::angular_dual(l1, q.nu1, AngularMap::classical)};
    if (a.eps1) {
        require(*a.eps1 > 0.0, "dual: --eps1 must be > 0");
        t.columns.push_back("eps1");
        t.columns.push_back("eps2");
        row.push_back(*a.eps1);
        row.push_back(core::energy_dual(*a.eps1, q.nu1));
    }
    t.add_row(std::move(row));
    emit(t);
    return kOk;
}

struct SpectrumArgs {
    PotentialFlags pot;
    double l = 0.0;
    int n = 3;
    std::string method = "numeric";
};

int cmd_spectrum(const RunConfig& cfg, const SpectrumArgs& a, const Emitter& emit) {
    require(a.l >= 0.0, "spectrum: --l must be >= 0");
    require(a.n >= 1, "spectrum: --n must be >= 1");
    const PotentialSpec pot = a.pot.build();
    Table t;
    t.kind = "spectrum";
    t.columns = {"n", "nodes", "eps"};
    t.meta["potential"] = pot.describe();
    t.meta["l"] = a.l;
    t.meta["method"] = a.method;
    std::vector<double> eps;
    if (a.method == "numeric") {
        for (const auto& s : eigen::spectrum(pot, a.l, a.n, cfg.solver)) eps.push_back(s.eps);
    } else if (a.method == "wkb") {
        if (pot.is_hard_sphere()) throw ArgumentError("spectrum: --method wkb needs a power-law or tabulated potential");
        for (int k = 1; k <= a.n; ++k) eps.push_back(wkb::quantize(pot, langer(a.l), k));
    } else if (a.method == "exact") {
        const bool plain = pot.inverse_square() == 0.0;
        if (plain && pot.is_hard_sphere()) {
            require(a.l == std::floor(a.l), "spectrum: hard-sphere levels need integer l");
            eps = eigen::box_spectrum(static_cast<int>(a.l), a.n);
        } else if (plain && pot.is_power_law() && (pot.exponent() == 2.0 || pot.exponent() == -1.0)) {
            const auto kind = pot.exponent() == 2.0 ? eigen::ReferenceKind::oscillator : eigen::ReferenceKind::coulomb;
            for (int k = 0; k < a.n; ++k) eps.push_back(eigen::reference_energy(kind, k, a.l));
        } else {
            throw ArgumentError("spectrum: --method exact is available only for nu = 2, nu = -1 and the hard sphere");
        }
    } else {
        throw ArgumentError("spectrum: unknown method '" + a.method + "' (numeric|wkb|exact)");
    }
    for (std::size_t k = 0; k < eps.size(); ++k)
        t.add_row({static_cast<std::int64_t>(k + 1), static_cast<std::int64_t>(k), eps[k]});
    emit(t);
    return kOk;
}

struct SolveArgs {
    PotentialFlags pot;
    double l = 0.0;
    int nodes = 0;
};

int cmd_solve(const RunConfig& cfg, const SolveArgs& a, const Emitter& emit) {
    require(a.l >= 0.0 && a.nodes >= 0, "solve: requires --l >= 0 and --nodes >= 0");
    emit(io::solution_table(eigen::solve_radial(a.pot.build(), a.l, a.nodes, cfg.solver)));
    return kOk;
}

struct OrbitArgs {
    double nu = 2.0;
    double eps = 0.0;
    double l = 1.0;
    std::optional<int> samples;
    bool map = false;
};

Table orbit_summary_row(Table t, const std::string& role, const orbits::OrbitTrace& tr,
                        const std::filesystem::path& file, double closed_residual) {
    t.add_row({role, tr.potential.describe(), tr.eps, tr.l, tr.periapsis, tr.apoapsis,
               orbits::apsidal_angle(tr.potential, tr.eps, tr.l),
               orbits::energy_residual(tr), closed_residual, file.string()});
    return t;
}

int cmd_orbit(const RunConfig& cfg, const OrbitArgs& a, std::ostream& out) {
    require(a.nu > 0.0 || (a.nu > -2.0 && a.nu < 0.0), "orbit: --nu must satisfy nu > 0 or -2 < nu < 0");
    require(a.l > 0.0, "orbit: --l must be > 0");
    const PotentialSpec pot = a.nu > 0.0 ? PotentialSpec::confining(a.nu) : PotentialSpec::singular(a.nu);
    const int samples = a.samples.value_or(cfg.trace_samples);
    const auto tr = orbits::trace(pot, a.eps, a.l, samples);

    const std::filesystem::path file = cfg.resolve(cfg.output.value_or("orbit.csv"));
    write_file(file, io::to_csv(io::trace_table(tr)));

    auto closed = [](const orbits::OrbitTrace& t) {
        if (!t.potential.is_power_law()) return std::numeric_limits<double>::quiet_NaN();
        if (t.potential.exponent() == 2.0) return orbits::closed_orbit_residual(t, orbits::ClosedKind::oscillator);
        if (t.potential.exponent() == -1.0) return orbits::closed_orbit_residual(t, orbits::ClosedKind::coulomb);
        return std::numeric_limits<double>::quiet_NaN();
    };

    Table t;
    t.kind = "orbit";
    t.columns = {"role", "potential", "eps", "l", "periapsis", "apoapsis", "apsidal_angle",
                 "energy_residual", "closed_orbit_residual", "file"};
    t = orbit_summary_row(std::move(t), "direct", tr, file, closed(tr));
    if (a.map) {
        require(a.nu > 0.0, "orbit: --map starts from a confining orbit (nu > 0)");
        const auto dual = orbits::map_trace(tr);
        std::filesystem::path dfile = file;
        dfile.replace_filename(file.stem().string() + "_dual" + file.extension().string());
        write_file(dfile, io::to_csv(io::trace_table(dual)));
        t = orbit_summary_row(std::move(t), "dual", dual, dfile, closed(dual));
    }
    // the summary goes to stdout; --output names the trace file
    const RunConfig to_stdout = [&] {
        RunConfig c = cfg;
        c.output.reset();
        return c;
    }();
    Emitter{to_stdout, out}(t);
    return kOk;
}

struct ActionArgs {
    double nu = 2.0;
    double eps = 0.0;
    double l = 0.0;
    std::string convention = "langer";
};

int cmd_action(const RunConfig& cfg, const ActionArgs& a, const Emitter& emit) {
    require(a.nu > 0.0 || (a.nu > -2.0 && a.nu < 0.0), "action: --nu must satisfy nu > 0 or -2 < nu < 0");
    const PotentialSpec pot = a.nu > 0.0 ? PotentialSpec::confining(a.nu) : PotentialSpec::singular(a.nu);
    const Centrifugal cf = parse_convention(a.convention, a.l);
    const auto r = wkb::action(pot, a.eps, cf, cfg.action_tolerance);
    Table t;
    t.kind = "action";
    t.columns = {"potential", "eps", "l", "convention", "coefficient", "S", "t1", "t2", "quad_error"};
    t.add_row({pot.describe(), a.eps, a.l, a.convention, cf.coefficient(), r.S, r.t1, r.t2, r.quad_error});
    emit(t);
    return kOk;
}

struct BoxArgs {
    int l = 0;
    int n = 5;
};

int cmd_box(const BoxArgs& a, const Emitter& emit) {
    require(a.l >= 0 && a.n >= 1, "box: requires --l >= 0 and --n >= 1");
    const auto eps = eigen::box_spectrum(a.l, a.n);
    Table t;
    t.kind = "box_spectrum";
    t.columns = {"n", "zero", "eps", "mcmahon_zero"};
    t.meta["l"] = a.l;
    for (int k = 1; k <= a.n; ++k)
        t.add_row({static_cast<std::int64_t>(k), std::sqrt(eps[k - 1]), eps[k - 1], specfun::mcmahon_zero(a.l, k)});
    emit(t);
    return kOk;
}

struct SusyArgs {
    double nu = 2.0;
    int removed = 1;
    double l = 0.0;
    int count = 3;
    bool profile = false;
};

int cmd_susy(const RunConfig& cfg, const SusyArgs& a, const Emitter& emit) {
    require(a.nu > 0.0, "susy: --nu must be > 0 (deep confining potential)");
    require(a.removed >= 1 && a.removed <= susy::kMaxRemoved, "susy: --N must be in 1..4");
    require(a.l >= 0.0 && a.count >= 1, "susy: requires --l >= 0 and --count >= 1");
    susy::ShallowOptions so = cfg.shallow;
    so.solver = cfg.solver;
    const auto sp = susy::shallow_potential(PotentialSpec::confining(a.nu), a.removed, a.l, so);
    Table t;
    t.meta["parent"] = sp.parent;
    t.meta["removed"] = sp.removed;
    t.meta["l"] = sp.l;
    t.meta["removed_energies"] = sp.removed_energies;
    t.meta["barrier_fit_c"] = sp.fit_c;
    t.meta["barrier_prediction"] = susy::barrier_prediction(a.l, a.removed);
    t.meta["fit_residual"] = sp.fit_residual;
    t.meta["floor_radius"] = sp.floor_radius;
    t.meta["tail_gap"] = susy::tail_gap(sp);
    if (a.profile) {
        t.kind = "shallow_potential";
        t.columns = {"rho", "v_deep", "v_shallow", "difference"};
        for (std::size_t i = 0; i < sp.grid.size(); ++i)
            t.add_row({sp.grid[i], sp.deep_values[i], sp.values[i], sp.values[i] - sp.deep_values[i]});
    } else {
        t.kind = "shallow_spectrum";
        t.columns = {"nodes", "eps"};
        const auto levels = susy::shallow_spectrum(sp, a.count, cfg.solver);
        for (const auto& s : levels) t.add_row({static_cast<std::int64_t>(s.nodes), s.eps});
    }
    emit(t);
    return kOk;
}

struct DegeneracyArgs {
    std::optional<double> nu;
    std::optional<double> gaussian_depth;
    double gaussian_range = 1.0;
    int l_max = 2;
    int n_max = 6;
};

int cmd_degeneracy(const RunConfig& cfg, const DegeneracyArgs& a, const Emitter& emit) {
    if (a.nu.has_value() == a.gaussian_depth.has_value()) throw ArgumentError("give exactly one of --nu or --gaussian");
    PotentialSpec pot = PotentialSpec::confining(2.0);
    if (a.nu) {
        require(*a.nu > 0.0, "degeneracy: --nu must be > 0");
        pot = PotentialSpec::confining(*a.nu);
    } else {
        pot = susy::gaussian_well(*a.gaussian_depth, a.gaussian_range);
    }
    const auto rows = susy::degeneracy_report(pot, a.l_max, a.n_max, cfg.solver);
    Table t;
    t.kind = "degeneracy";
    t.meta["potential"] = pot.describe();
    t.columns = {"n", "l", "eps", "eps_next", "eps_partner", "delta", "spacing", "measure"};
    for (const auto& r : rows)
        t.add_row({static_cast<std::int64_t>(r.n), static_cast<std::int64_t>(r.l), r.eps, r.eps_next, r.eps_partner,
                   r.delta, r.spacing, r.measure});
    emit(t);
    return kOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, double scale, const Emitter& emit) {
    const auto report = verify::run(verify::parse_suite(suite), scale);
    if (cfg.format == io::Format::table)
        emit(io::report_text(report));
    else
        emit(io::report_table(report));
    return report.passed() ? kOk : kCheckFailed;
}

}  // namespace

nlohmann::ordered_json RunConfig::describe() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["format"] = format == io::Format::csv ? "csv" : format == io::Format::json ? "json" : "table";
    j["output"] = output ? nlohmann::ordered_json(*output) : nlohmann::ordered_json(nullptr);
    j["output_dir"] = output_dir.string();
    j["solver.tol"] = solver.tol;
    j["solver.rho_min"] = solver.rho_min;
    j["solver.rho_max"] = solver.rho_max ? nlohmann::ordered_json(*solver.rho_max) : nlohmann::ordered_json("adaptive");
    j["solver.step"] = solver.step;
    j["solver.tail_action"] = solver.tail_action;
    j["solver.richardson"] = solver.richardson;
    j["solver.max_iterations"] = solver.max_iterations;
    j["action_tolerance"] = action_tolerance;
    j["trace_samples"] = trace_samples;
    j["susy.hadamard_floor"] = shallow.hadamard_floor;
    j["susy.fit_tolerance"] = shallow.fit_tolerance;
    j["schema_version"] = io::kSchemaVersion;
    return j;
}

std::filesystem::path RunConfig::resolve(const std::string& path) const {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p : output_dir / p;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    if (const char* dir = std::getenv("POWERDUAL_OUTPUT_DIR"); dir && *dir) cfg.output_dir = dir;

    CLI::App app{"Power-law potential duality toolkit"};
    app.name("powerdual");
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string format = "table";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json", "table"}));
    app.add_option("--output", cfg.output, "write the result to this file (orbit: the trace file)");
    app.add_flag("--verbose", cfg.verbose, "print the effective configuration to stderr");
    app.add_option("--tol", cfg.solver.tol, "eigensolver matching tolerance")->check(CLI::PositiveNumber);
    app.add_option("--rho-max", cfg.solver.rho_max, "fixed outer radius of the radial grid")->check(CLI::PositiveNumber);
    app.add_option("--step", cfg.solver.step, "largest ln(rho) grid step")->check(CLI::PositiveNumber);

    std::function<int()> action;
    const Emitter emit{cfg, out};

    DualArgs dual;
    auto* c_dual = app.add_subcommand("dual", "exponent, angular momentum and energy of the dual problem");
    auto* o_nu1 = c_dual->add_option("--nu1", dual.nu1, "confining exponent");
    auto* o_pair = c_dual->add_option("--pair", dual.pair, "integer pair l1 l2")->expected(2);
    o_nu1->excludes(o_pair);
    c_dual->add_option("--l1", dual.l1, "confining-side angular momentum");
    c_dual->add_option("--eps1", dual.eps1, "confining-side energy to map");
    c_dual->callback([&] { action = [&] { return cmd_dual(dual, emit); }; });

    SpectrumArgs spec;
    auto* c_spec = app.add_subcommand("spectrum", "lowest levels at fixed l");
    spec.pot.attach(c_spec, true);
    c_spec->add_option("--l", spec.l, "angular momentum");
    c_spec->add_option("--n", spec.n, "number of levels");
    c_spec->add_option("--method", spec.method, "numeric|wkb|exact");
    c_spec->callback([&] { action = [&] { return cmd_spectrum(cfg, spec, emit); }; });

    SolveArgs solve;
    auto* c_solve = app.add_subcommand("solve", "one eigenstate with its wavefunction");
    solve.pot.attach(c_solve, true);
    c_solve->add_option("--l", solve.l, "angular momentum");
    c_solve->add_option("--nodes", solve.nodes, "node count");
    c_solve->callback([&] { action = [&] { return cmd_solve(cfg, solve, emit); }; });

    OrbitArgs orbit;
    auto* c_orbit = app.add_subcommand("orbit", "classical orbit trace (CSV) and summary");
    c_orbit->add_option("--nu", orbit.nu, "exponent");
    c_orbit->add_option("--eps", orbit.eps, "energy")->required();
    c_orbit->add_option("--l", orbit.l, "angular momentum");
    c_orbit->add_option("--samples", orbit.samples, "samples per libration")->check(CLI::Range(5, 1000000));
    c_orbit->add_flag("--map", orbit.map, "also write the dual orbit");
    c_orbit->callback([&] { action = [&] { return cmd_orbit(cfg, orbit, out); }; });

    ActionArgs act;
    auto* c_act = app.add_subcommand("action", "radial action between the turning points");
    c_act->add_option("--nu", act.nu, "exponent");
    c_act->add_option("--eps", act.eps, "energy")->required();
    c_act->add_option("--l", act.l, "angular momentum");
    c_act->add_option("--convention", act.convention, "langer|quantum|classical");
    c_act->callback([&] { action = [&] { return cmd_action(cfg, act, emit); }; });

    BoxArgs box;
    auto* c_box = app.add_subcommand("box", "spherical box levels and McMahon zeros");
    c_box->add_option("--l", box.l, "angular momentum");
    c_box->add_option("--n", box.n, "number of levels");
    c_box->callback([&] { action = [&] { return cmd_box(box, emit); }; });

    SusyArgs sus;
    auto* c_susy = app.add_subcommand("susy", "shallow partner of a deep confining potential");
    c_susy->add_option("--nu", sus.nu, "deep exponent");
    c_susy->add_option("--N", sus.removed, "number of removed states");
    c_susy->add_option("--l", sus.l, "angular momentum");
    c_susy->add_option("--count", sus.count, "shallow levels to report");
    c_susy->add_flag("--profile", sus.profile, "emit the potential instead of the levels");
    c_susy->callback([&] { action = [&] { return cmd_susy(cfg, sus, emit); }; });

    DegeneracyArgs deg;
    auto* c_deg = app.add_subcommand("degeneracy", "eps(n+1,l) against eps(n,l+2)");
    auto* o_dnu = c_deg->add_option("--nu", deg.nu, "confining exponent");
    auto* o_gauss = c_deg->add_option("--gaussian", deg.gaussian_depth, "depth of -D exp(-(rho/R)^2)");
    o_dnu->excludes(o_gauss);
    c_deg->add_option("--range", deg.gaussian_range, "Gaussian range R");
    c_deg->add_option("--l-max", deg.l_max, "largest l");
    c_deg->add_option("--n-max", deg.n_max, "rows per l");
    c_deg->callback([&] { action = [&] { return cmd_degeneracy(cfg, deg, emit); }; });

    std::string suite = "all";
    auto* c_ver = app.add_subcommand("verify", "run the reproduction checks");
    c_ver->add_option("--suite", suite, "all|quantum|wkb|orbits|susy")
        ->check(CLI::IsMember({"all", "quantum", "wkb", "orbits", "susy"}));
    double tolerance_scale = 1.0;
    c_ver->add_option("--tolerance-scale", tolerance_scale, "multiply every check tolerance")
        ->check(CLI::NonNegativeNumber);
    c_ver->callback([&] { action = [&] { return cmd_verify(cfg, suite, tolerance_scale, emit); }; });

    std::vector<const char*> argv{"powerdual"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }
    cfg.format = io::parse_format(format);
    for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
    if (cfg.verbose) err << "# config " << cfg.describe().dump() << '\n';

    try {
        return action();
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const OrthonormalityError& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const FitQualityError& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace powerdual::cli
