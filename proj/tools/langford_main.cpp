// Command-line front end: verify/discover admissible perturbations of
// the generalized Langford system and run the dynamical checks
// (simulation, Lyapunov spectrum, shift-operator comparison, periodic
// orbits). JSON in, JSON/CSV/SVG out; deterministic for a fixed
// config and seed.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "langford/analysis.hpp"
#include "langford/errors.hpp"
#include "langford/perturbation.hpp"
#include "langford/rng.hpp"
#include "langford/svg.hpp"
#include "langford/system_io.hpp"

using namespace langford;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitThreshold = 4;

/// Option resolution: explicit flag > LANGFORD_MRF_SEED (seed only)
/// > config file > built-in default.
struct ConfigLayer {
    json cfg = json::object();
    CLI::App* cmd = nullptr;

    void load(const std::string& path, std::initializer_list<const char*> allowed) {
        if (path.empty()) return;
        cfg = read_json_file(path);
        if (!cfg.is_object()) throw ParseError(path + ": config must be a JSON object");
        for (const auto& [key, value] : cfg.items()) {
            bool ok = false;
            for (const char* a : allowed)
                if (key == a) { ok = true; break; }
            if (!ok) throw ParseError(path + ": unknown key '" + key + "'");
        }
    }

    bool flag_given(const std::string& name) const {
        return cmd->count("--" + name) > 0;
    }

    template <typename T>
    T resolve(const std::string& name, T flag_value, T fallback) const {
        if (flag_given(name)) return flag_value;
        if (cfg.contains(name)) return cfg[name].get<T>();
        return fallback;
    }

    std::uint64_t resolve_seed(const std::string& name, std::uint64_t flag_value,
                               std::uint64_t fallback) const {
        if (flag_given(name)) return flag_value;
        if (const char* env = std::getenv("LANGFORD_MRF_SEED")) return std::stoull(env);
        if (cfg.contains(name)) return cfg[name].get<std::uint64_t>();
        return fallback;
    }
};

Vec3 parse_vec3(const std::string& s) {
    if (std::count(s.begin(), s.end(), ',') != 2)
        throw ParseError("expected three comma-separated coordinates, got '" + s + "'");
    Vec3 v;
    size_t pos = 0;
    for (int n = 0; n < 3; ++n) {
        const size_t next = s.find(',', pos);
        const std::string tok =
            s.substr(pos, next == std::string::npos ? next : next - pos);
        try {
            size_t used = 0;
            v[n] = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("bad coordinate '" + tok + "' in '" + s + "'");
        }
        pos = next + 1;
    }
    return v;
}

std::string vec3_str(const Vec3& v) {
    return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

IntegratorConfig make_integrator(double rtol, double atol) {
    if (!(rtol > 0) || !(atol > 0))
        throw ParseError("integrator tolerances must be positive");
    IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;
    return cfg;
}

void maybe_write_report(const std::string& out_dir, const std::string& name, const json& report) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    write_json_file(std::filesystem::path(out_dir) / name, report);
}

json spectrum_to_json(const LyapunovSpectrum& spec) {
    return json{{"exponents", {spec.exponents[0], spec.exponents[1], spec.exponents[2]}},
                {"sum", spec.sum()},
                {"transient", spec.transient},
                {"total", spec.total},
                {"renorm_interval", spec.renorm_interval}};
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& system_path, const std::string& out_dir) {
    const PerturbedSystem sys = load_system(system_path);
    json verdicts = json::array();
    bool all_ok = true;
    std::cout << "family " << family_name(sys.family()) << ", "
              << sys.perturbations().size() << " perturbation(s)\n";
    for (size_t i = 0; i < sys.perturbations().size(); ++i) {
        const auto& term = sys.perturbations()[i];
        const bool ok = is_admissible(sys.base(), term.delta);
        all_ok = all_ok && ok;
        std::cout << "  delta_" << i + 1 << ": " << (ok ? "admissible" : "NOT admissible")
                  << "\n";
        verdicts.push_back({{"index", i + 1}, {"admissible", ok}});
    }
    if (sys.perturbations().empty())
        std::cout << "  base system only; nothing to verify\n";
    std::cout << (all_ok ? "PASS" : "FAIL") << "\n";

    json report{{"command", "verify"},
                {"system", system_to_json(sys)},
                {"verdicts", verdicts},
                {"all_admissible", all_ok}};
    maybe_write_report(out_dir, "verify_report.json", report);
    return all_ok ? kExitOk : kExitThreshold;
}

// ------------------------------------------------------------------ find

int cmd_find(const std::string& params_path, int degree, const std::string& out_dir) {
    if (degree < 0 || degree > 6)
        throw ParseError("degree bound must be between 0 and 6 (got " +
                         std::to_string(degree) + ")");
    const Params p = load_params(params_path);
    const PolyVectorField x = build_base(p);
    const auto basis = find_admissible_basis(x, degree);

    std::cout << "admissible perturbation basis, degree <= " << degree << ": " << basis.size()
              << " generator(s)\n";
    json jbasis = json::array();
    for (size_t i = 0; i < basis.size(); ++i) {
        const auto& f = basis[i];
        std::cout << "  [" << i + 1 << "] (" << f.px.str() << ",\n       " << f.py.str()
                  << ",\n       " << f.pz.str() << ")\n";
        jbasis.push_back({{"px", f.px.str()}, {"py", f.py.str()}, {"pz", f.pz.str()}});
    }

    json report{{"command", "find"},
                {"params", params_to_json(p)},
                {"degree_bound", degree},
                {"basis_size", basis.size()},
                {"basis", jbasis}};
    maybe_write_report(out_dir, "find_report.json", report);
    return kExitOk;
}

// -------------------------------------------------------------- simulate

int cmd_simulate(const std::string& system_path, const Vec3& x0, double t0, double t1,
                 int samples, bool svg, const std::string& out_dir,
                 const IntegratorConfig& icfg) {
    if (samples < 2) throw ParseError("samples must be >= 2");
    const PerturbedSystem sys = load_system(system_path);
    const Trajectory tr = integrate_sampled(sys, x0, t0, t1, icfg, samples);

    const std::string dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    const auto csv = std::filesystem::path(dir) / "trajectory.csv";
    write_trajectory_csv(csv, tr);
    std::cout << "wrote " << csv.string() << " (" << tr.samples.size() << " samples)\n";

    json report{{"command", "simulate"},
                {"system", system_to_json(sys)},
                {"x0", vec3_str(x0)},
                {"t0", t0},
                {"t1", t1},
                {"samples", samples},
                {"rtol", icfg.rtol},
                {"atol", icfg.atol},
                {"final_state", vec3_str(tr.back().state)}};

    if (svg) {
        std::vector<Vec3> pts;
        pts.reserve(tr.samples.size());
        for (const auto& s : tr.samples) pts.push_back(s.state);
        const struct {
            int h, v;
            const char* name;
            const char* lh;
            const char* lv;
        } views[3] = {{0, 1, "trajectory_xy.svg", "x", "y"},
                      {0, 2, "trajectory_xz.svg", "x", "z"},
                      {1, 2, "trajectory_yz.svg", "y", "z"}};
        json files = json::array();
        for (const auto& view : views) {
            const auto path = std::filesystem::path(dir) / view.name;
            write_phase_svg(path, pts, view.h, view.v, view.lh, view.lv);
            std::cout << "wrote " << path.string() << "\n";
            files.push_back(view.name);
        }
        report["svg"] = files;
    }
    maybe_write_report(dir, "simulate_report.json", report);
    return kExitOk;
}

// -------------------------------------------------------------- lyapunov

int cmd_lyapunov(const std::string& system_path, const Vec3& x0, double transient, double total,
                 double renorm, const std::string& out_dir, const IntegratorConfig& icfg) {
    const PerturbedSystem sys = load_system(system_path);
    const LyapunovSpectrum spec = lyapunov_spectrum(sys, x0, transient, total, renorm, icfg);
    std::cout << "lyapunov exponents: " << format_double(spec.exponents[0]) << " "
              << format_double(spec.exponents[1]) << " " << format_double(spec.exponents[2])
              << "\nsum: " << format_double(spec.sum()) << "\n";

    json report{{"command", "lyapunov"},
                {"system", system_to_json(sys)},
                {"x0", vec3_str(x0)},
                {"rtol", icfg.rtol},
                {"atol", icfg.atol},
                {"spectrum", spectrum_to_json(spec)}};
    maybe_write_report(out_dir, "lyapunov_report.json", report);
    return kExitOk;
}

// --------------------------------------------------------------- compare

int cmd_compare(const std::string& path_a, const std::string& path_b, double T, int points,
                std::uint64_t seed, double threshold, const std::string& out_dir,
                const IntegratorConfig& icfg) {
    if (points < 1) throw ParseError("points must be >= 1");
    if (!(threshold > 0)) throw ParseError("threshold must be positive");
    const PerturbedSystem a = load_system(path_a);
    const PerturbedSystem b = load_system(path_b);

    Rng rng(seed);
    std::vector<Vec3> pts;
    json jpts = json::array();
    for (int i = 0; i < points; ++i) {
        const Vec3 p{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        pts.push_back(p);
        jpts.push_back(vec3_str(p));
    }

    const double dist = shift_operator_compare(a, b, T, pts, icfg);
    const bool ok = dist <= threshold;
    std::cout << "max shift-operator distance over " << points << " points, T = " << T << ": "
              << format_double(dist) << (ok ? "  (<= " : "  (EXCEEDS ")
              << format_double(threshold) << ")\n";

    json report{{"command", "compare"},
                {"system_a", system_to_json(a)},
                {"system_b", system_to_json(b)},
                {"T", T},
                {"points", jpts},
                {"seed", seed},
                {"threshold", threshold},
                {"rtol", icfg.rtol},
                {"atol", icfg.atol},
                {"max_distance", dist},
                {"within_threshold", ok}};
    maybe_write_report(out_dir, "compare_report.json", report);
    return ok ? kExitOk : kExitThreshold;
}

// -------------------------------------------------------------- periodic

int cmd_periodic(const std::string& system_path, const std::string& theorem, double omega,
                 bool with_floquet, const std::string& out_dir, const IntegratorConfig& icfg) {
    const PerturbedSystem sys = load_system(system_path);
    const PeriodicityTheorem thm = theorem_from_name(theorem);

    std::vector<Signal> signals;
    for (const auto& t : sys.perturbations()) signals.push_back(t.signal);
    const auto cond = check_integral_condition(thm, sys.params(), signals, omega);

    const double period = (thm == PeriodicityTheorem::T6i || thm == PeriodicityTheorem::T6ii)
                              ? omega
                              : 6.28318530717958647692 / std::fabs(sys.params().b.to_double());

    const ClosedFormOrbit orbit = ClosedFormOrbit::for_system(sys);
    const double residual = orbit_residual(sys, orbit, 100, 0.0, period);

    IntegratorConfig tight = icfg;
    tight.rtol = std::min(icfg.rtol, 1e-11);
    tight.atol = std::min(icfg.atol, 1e-13);
    const double gap = return_map_gap(sys, orbit.point(0.0), 0.0, period, tight);
    const bool periodic = cond.satisfied && gap <= 1e-7;

    std::cout << theorem << ": integral = " << format_double(cond.value) << ", nearest k = "
              << cond.k << ", residual = " << format_double(cond.residual) << " -> "
              << (cond.satisfied ? "satisfied" : "not satisfied") << "\n";
    if (cond.odd_by_construction)
        std::cout << "combination is odd by construction (oddness substitute applies)\n";
    std::cout << "orbit residual (100 samples over one period): " << format_double(residual)
              << "\nreturn-map gap: " << format_double(gap) << "\n"
              << (periodic ? "periodic" : "not periodic") << "\n";

    json report{{"command", "periodic"},
                {"system", system_to_json(sys)},
                {"theorem", theorem},
                {"condition",
                 {{"upper_limit", cond.upper_limit},
                  {"value", cond.value},
                  {"k", cond.k},
                  {"residual", cond.residual},
                  {"satisfied", cond.satisfied},
                  {"odd_by_construction", cond.odd_by_construction},
                  {"combo_periodic", cond.combo_periodic}}},
                {"period", period},
                {"orbit_residual", residual},
                {"return_map_gap", gap},
                {"periodic", periodic}};
    if (omega > 0) report["omega"] = omega;

    if (with_floquet) {
        const FloquetReport fl = floquet(sys, orbit, period, icfg);
        std::cout << "floquet multipliers:";
        json jmult = json::array();
        for (const auto& m : fl.multipliers) {
            std::cout << " (" << format_double(m.real()) << ", " << format_double(m.imag())
                      << "i)";
            jmult.push_back({{"re", m.real()}, {"im", m.imag()}});
        }
        std::cout << "\nclassification: " << stability_name(fl.classification) << "\n";
        report["floquet"] = {{"multipliers", jmult},
                             {"trivial_index", fl.trivial_index},
                             {"classification", stability_name(fl.classification)}};
    }
    maybe_write_report(out_dir, "periodic_report.json", report);
    return periodic ? kExitOk : kExitThreshold;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Admissible perturbations of the generalized Langford system"};
    app.require_subcommand(1);

    // shared options, registered per subcommand
    struct Common {
        std::string config, out;
        double rtol = 1e-9, atol = 1e-12;
        std::uint64_t seed = 1;
        ConfigLayer layer;
    };

    auto add_common = [](CLI::App* cmd, Common& c) {
        cmd->add_option("--config", c.config, "JSON config file with per-command defaults");
        cmd->add_option("--out", c.out, "output directory for reports/artifacts");
        cmd->add_option("--rtol", c.rtol, "integrator relative tolerance");
        cmd->add_option("--atol", c.atol, "integrator absolute tolerance");
        cmd->add_option("--seed", c.seed, "seed for any randomized inputs");
        c.layer.cmd = cmd;
    };

    // verify
    auto* verify = app.add_subcommand("verify", "check every perturbation of a system description");
    Common vc;
    std::string v_system;
    verify->add_option("--system", v_system, "system description JSON");
    add_common(verify, vc);

    // find
    auto* find = app.add_subcommand("find", "solve for all admissible perturbations up to a degree");
    Common fc;
    std::string f_params;
    int f_degree = 2;
    find->add_option("--params", f_params, "parameters JSON");
    find->add_option("--degree", f_degree, "ansatz degree bound (<= 6)");
    add_common(find, fc);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate and export CSV (optionally SVG)");
    Common sc;
    std::string s_system, s_x0 = "0.01,0.02,3";
    double s_t0 = 0, s_t1 = 100;
    int s_samples = 2000;
    bool s_svg = false;
    simulate->add_option("--system", s_system, "system description JSON");
    simulate->add_option("--x0", s_x0, "initial state 'x,y,z'");
    simulate->add_option("--t0", s_t0, "start time");
    simulate->add_option("--t1", s_t1, "end time");
    simulate->add_option("--samples", s_samples, "number of CSV rows");
    simulate->add_flag("--svg", s_svg, "also write xy/xz/yz phase portraits");
    add_common(simulate, sc);

    // lyapunov
    auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum via tangent flow + QR");
    Common lc;
    std::string l_system, l_x0 = "0.01,0.02,3";
    double l_transient = 50, l_total = 2000, l_renorm = 0.05;
    lyap->add_option("--system", l_system, "system description JSON");
    lyap->add_option("--x0", l_x0, "initial state 'x,y,z'");
    lyap->add_option("--transient", l_transient, "discarded lead-in time");
    lyap->add_option("--total", l_total, "total integration time");
    lyap->add_option("--renorm", l_renorm, "QR reorthonormalization interval");
    add_common(lyap, lc);

    // compare
    auto* compare = app.add_subcommand("compare", "shift-operator distance between two systems");
    Common cc;
    std::string c_a, c_b;
    double c_T = 1.0, c_threshold = 1e-6;
    int c_points = 10;
    compare->add_option("--system-a", c_a, "first system JSON");
    compare->add_option("--system-b", c_b, "second system JSON");
    compare->add_option("--T", c_T, "half-window: integrate from -T to +T");
    compare->add_option("--points", c_points, "number of seeded initial points");
    compare->add_option("--threshold", c_threshold, "pass threshold on the max distance");
    add_common(compare, cc);

    // periodic
    auto* periodic = app.add_subcommand("periodic", "integral condition + orbit checks");
    Common pc;
    std::string p_system, p_theorem = "T4i";
    double p_omega = 0;
    bool p_floquet = false;
    periodic->add_option("--system", p_system, "system description JSON");
    periodic->add_option("--theorem", p_theorem, "T4i|T4ii|T5i|T5ii|T6i|T6ii");
    periodic->add_option("--omega", p_omega, "period for the T6 variants");
    periodic->add_flag("--floquet", p_floquet, "also compute Floquet multipliers");
    add_common(periodic, pc);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            vc.layer.load(vc.config, {"system", "out", "rtol", "atol", "seed"});
            const auto sys = vc.layer.resolve<std::string>("system", v_system, v_system);
            if (sys.empty()) throw ParseError("verify: --system is required");
            return cmd_verify(sys, vc.layer.resolve<std::string>("out", vc.out, vc.out));
        }
        if (find->parsed()) {
            fc.layer.load(fc.config, {"params", "degree", "out", "rtol", "atol", "seed"});
            const auto params = fc.layer.resolve<std::string>("params", f_params, f_params);
            if (params.empty()) throw ParseError("find: --params is required");
            return cmd_find(params, fc.layer.resolve<int>("degree", f_degree, f_degree),
                            fc.layer.resolve<std::string>("out", fc.out, fc.out));
        }
        if (simulate->parsed()) {
            sc.layer.load(sc.config, {"system", "x0", "t0", "t1", "samples", "svg", "out",
                                      "rtol", "atol", "seed"});
            const auto sys = sc.layer.resolve<std::string>("system", s_system, s_system);
            if (sys.empty()) throw ParseError("simulate: --system is required");
            return cmd_simulate(
                sys, parse_vec3(sc.layer.resolve<std::string>("x0", s_x0, s_x0)),
                sc.layer.resolve<double>("t0", s_t0, s_t0),
                sc.layer.resolve<double>("t1", s_t1, s_t1),
                sc.layer.resolve<int>("samples", s_samples, s_samples),
                sc.layer.resolve<bool>("svg", s_svg, s_svg),
                sc.layer.resolve<std::string>("out", sc.out, sc.out),
                make_integrator(sc.layer.resolve<double>("rtol", sc.rtol, sc.rtol),
                                sc.layer.resolve<double>("atol", sc.atol, sc.atol)));
        }
        if (lyap->parsed()) {
            lc.layer.load(lc.config, {"system", "x0", "transient", "total", "renorm", "out",
                                      "rtol", "atol", "seed"});
            const auto sys = lc.layer.resolve<std::string>("system", l_system, l_system);
            if (sys.empty()) throw ParseError("lyapunov: --system is required");
            return cmd_lyapunov(
                sys, parse_vec3(lc.layer.resolve<std::string>("x0", l_x0, l_x0)),
                lc.layer.resolve<double>("transient", l_transient, l_transient),
                lc.layer.resolve<double>("total", l_total, l_total),
                lc.layer.resolve<double>("renorm", l_renorm, l_renorm),
                lc.layer.resolve<std::string>("out", lc.out, lc.out),
                make_integrator(lc.layer.resolve<double>("rtol", lc.rtol, lc.rtol),
                                lc.layer.resolve<double>("atol", lc.atol, lc.atol)));
        }
        if (compare->parsed()) {
            cc.layer.load(cc.config, {"system-a", "system-b", "T", "points", "threshold",
                                      "out", "rtol", "atol", "seed"});
            const auto sys_a = cc.layer.resolve<std::string>("system-a", c_a, c_a);
            const auto sys_b = cc.layer.resolve<std::string>("system-b", c_b, c_b);
            if (sys_a.empty() || sys_b.empty())
                throw ParseError("compare: --system-a and --system-b are required");
            return cmd_compare(
                sys_a, sys_b, cc.layer.resolve<double>("T", c_T, c_T),
                cc.layer.resolve<int>("points", c_points, c_points),
                cc.layer.resolve_seed("seed", cc.seed, cc.seed),
                cc.layer.resolve<double>("threshold", c_threshold, c_threshold),
                cc.layer.resolve<std::string>("out", cc.out, cc.out),
                make_integrator(cc.layer.resolve<double>("rtol", cc.rtol, cc.rtol),
                                cc.layer.resolve<double>("atol", cc.atol, cc.atol)));
        }
        if (periodic->parsed()) {
            pc.layer.load(pc.config, {"system", "theorem", "omega", "floquet", "out", "rtol",
                                      "atol", "seed"});
            const auto sys = pc.layer.resolve<std::string>("system", p_system, p_system);
            if (sys.empty()) throw ParseError("periodic: --system is required");
            return cmd_periodic(
                sys, pc.layer.resolve<std::string>("theorem", p_theorem, p_theorem),
                pc.layer.resolve<double>("omega", p_omega, p_omega),
                pc.layer.resolve<bool>("floquet", p_floquet, p_floquet),
                pc.layer.resolve<std::string>("out", pc.out, pc.out),
                make_integrator(pc.layer.resolve<double>("rtol", pc.rtol, pc.rtol),
                                pc.layer.resolve<double>("atol", pc.atol, pc.atol)));
        }
    } catch (const BlowUpError& e) {
        std::cerr << "numerical failure: " << e.what() << "\nlast good state: ("
                  << format_double(e.state_last[0]) << ", " << format_double(e.state_last[1])
                  << ", " << format_double(e.state_last[2]) << ")\n";
        return kExitNumerical;
    } catch (const ConstraintError& e) {
        std::cerr << "constraint error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}
