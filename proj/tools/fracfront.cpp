// Command-line entry points: simulate | converge | constants | validate.
// Exit codes: 0 success, 1 runtime failure, 2 config validation failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fracfront/field_io.hpp"
#include "fracfront/harness.hpp"
#include "fracfront/kernel.hpp"
#include "fracfront/nonlocal.hpp"
#include "fracfront/scheme.hpp"

#include "expr.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace fracfront;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ordered_json load_config(const std::string& path) {
    if (path.empty()) return ordered_json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
}

template <typename T>
T get_or(const ordered_json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const std::exception&) {
        throw ConfigError("config: field '" + key + "' has the wrong type");
    }
}

NormalizationConvention convention_from(const ordered_json& j, double alpha, int dim) {
    const std::string name = get_or<std::string>(j, "convention", "STANDARD_SYMBOL");
    if (name == "STANDARD_SYMBOL") return NormalizationConvention::standard();
    if (name == "UNNORMALIZED_PAPER") return NormalizationConvention::paper(dim, alpha);
    throw ConfigError("config: convention must be STANDARD_SYMBOL or UNNORMALIZED_PAPER");
}

double require_alpha(const ordered_json& j) {
    if (!j.contains("alpha")) throw ConfigError("config: missing required field 'alpha'");
    const double a = j.at("alpha").get<double>();
    if (!(a > 0.0 && a < 2.0))
        throw ConfigError("config: alpha must lie strictly inside (0,2), got " +
                          std::to_string(a));
    return a;
}

std::function<bool(const std::array<double, 3>&)> make_indicator(const ordered_json& j,
                                                                 int dim) {
    const auto init = j.contains("initial") ? j.at("initial") : ordered_json::object();
    const std::string shape = init.contains("shape") ? init.at("shape").get<std::string>()
                                                     : std::string("disk");
    if (shape == "disk") {
        const double radius = init.contains("radius") ? init.at("radius").get<double>() : 1.0;
        std::array<double, 3> center{0.0, 0.0, 0.0};
        if (init.contains("center")) {
            auto c = init.at("center").get<std::vector<double>>();
            for (size_t i = 0; i < c.size() && i < 3; ++i) center[i] = c[i];
        }
        if (radius <= 0.0) throw ConfigError("config: initial.radius must be positive");
        return [radius, center, dim](const std::array<double, 3>& x) {
            double r2 = 0.0;
            for (int d = 0; d < dim; ++d) r2 += (x[d] - center[d]) * (x[d] - center[d]);
            return std::sqrt(r2) < radius;
        };
    }
    if (shape == "halfplane") {
        const int axis = init.contains("axis") ? init.at("axis").get<int>() : 0;
        const double offset = init.contains("offset") ? init.at("offset").get<double>() : 0.0;
        if (axis < 0 || axis >= dim) throw ConfigError("config: initial.axis out of range");
        return [axis, offset](const std::array<double, 3>& x) { return x[axis] < offset; };
    }
    if (shape == "expr") {
        if (!init.contains("expr")) throw ConfigError("config: initial.expr missing");
        try {
            auto e = std::make_shared<fracfront_cli::Expr>(init.at("expr").get<std::string>());
            return [e](const std::array<double, 3>& x) { return e->eval(x) > 0.0; };
        } catch (const std::exception& ex) {
            throw ConfigError(std::string("config: initial.expr invalid: ") + ex.what());
        }
    }
    throw ConfigError("config: initial.shape must be disk, halfplane, or expr");
}

ordered_json resolved_simulate_config(const ordered_json& j) {
    ordered_json out;
    out["alpha"] = require_alpha(j);
    out["dim"] = get_or<int>(j, "dim", 2);
    out["convention"] = get_or<std::string>(j, "convention", "STANDARD_SYMBOL");
    out["extent"] = get_or<double>(j, "extent", 8.0);
    out["points"] = get_or<std::int64_t>(j, "points", 256);
    if (j.contains("h"))
        out["h"] = j.at("h").get<double>();
    else if (j.contains("sigma"))
        out["sigma"] = j.at("sigma").get<double>();
    else
        throw ConfigError("config: simulate needs 'h' or 'sigma'");
    out["steps"] = get_or<std::int64_t>(j, "steps", 16);
    out["snapshot_every"] = get_or<std::int64_t>(j, "snapshot_every", 1);
    out["initial"] = j.contains("initial")
                         ? j.at("initial")
                         : ordered_json{{"shape", "disk"}, {"radius", 1.0}};
    return out;
}

int cmd_simulate(const ordered_json& raw, const std::string& out_dir, bool emit_only) {
    const ordered_json cfg = resolved_simulate_config(raw);
    if (emit_only) {
        std::cout << cfg.dump(2) << std::endl;
        return 0;
    }
    const double alpha = cfg.at("alpha").get<double>();
    const int dim = cfg.at("dim").get<int>();
    const auto convention = convention_from(cfg, alpha, dim);
    const std::int64_t points = cfg.at("points").get<std::int64_t>();
    if (points < 8 || (points & (points - 1)) != 0)
        throw ConfigError("config: points must be a power of two >= 8");
    const Grid grid = make_grid(dim, cfg.at("extent").get<double>(), points);

    SchemeParams params;
    const std::int64_t steps = cfg.at("steps").get<std::int64_t>();
    if (steps < 1) throw ConfigError("config: steps must be >= 1");
    if (cfg.contains("h"))
        params = SchemeParams::from_h(alpha, cfg.at("h").get<double>(), steps, convention);
    else
        params = SchemeParams::from_sigma(alpha, cfg.at("sigma").get<double>(), steps,
                                          convention);

    const SignField u0 = initialize(grid, make_indicator(cfg, dim));

    fs::create_directories(out_dir);
    ordered_json manifest;
    manifest["params"] = {{"alpha", params.alpha},
                          {"h", params.h},
                          {"sigma", params.sigma},
                          {"steps", params.steps},
                          {"convention", params.convention.name()}};
    manifest["grid"] = {{"dim", grid.dim()},
                        {"extent", grid.extent()},
                        {"points", grid.points()}};
    std::vector<double> times;
    std::vector<std::string> field_files, front_files;

    auto dump_front = [&](const RealField& w, std::int64_t n, double t) {
        FrontSnapshot f = extract_front(w, t);
        char name[64];
        std::snprintf(name, sizeof name, "front_%06lld.csv", static_cast<long long>(n));
        std::ofstream fc(fs::path(out_dir) / name);
        fc.precision(17);
        for (const auto& p : f.points) {
            fc << p[0];
            for (int d = 1; d < dim; ++d) fc << ',' << p[d];
            fc << '\n';
        }
        front_files.push_back(name);
    };

    char name[64];
    std::snprintf(name, sizeof name, "sign_%06d.field", 0);
    write_field((fs::path(out_dir) / name).string(), u0);
    field_files.push_back(name);
    times.push_back(0.0);

    const std::int64_t every = cfg.at("snapshot_every").get<std::int64_t>();
    RunOptions opts;
    opts.snapshot_every = every;
    opts.observer = [&](std::int64_t n, double t, const SignField& u, const RealField& w) {
        if (n % every != 0 && n != params.steps) return;
        std::snprintf(name, sizeof name, "sign_%06lld.field", static_cast<long long>(n));
        write_field((fs::path(out_dir) / name).string(), u);
        field_files.push_back(name);
        times.push_back(t);
        dump_front(w, n, t);
    };
    Trajectory traj = run(params, grid, u0, opts);

    manifest["times"] = times;
    if (traj.extinction_time) manifest["extinction_time"] = *traj.extinction_time;
    manifest["fields"] = field_files;
    manifest["fronts"] = front_files;
    std::ofstream mf(fs::path(out_dir) / "manifest.json");
    mf << manifest.dump(2) << '\n';
    std::cout << "wrote " << field_files.size() << " field dumps to " << out_dir
              << std::endl;
    return 0;
}

int cmd_converge(const ordered_json& j, const std::string& out_dir, bool plot,
                 int threads, bool emit_only) {
    StudyConfig cfg;
    cfg.alpha = require_alpha(j);
    cfg.dim = get_or<int>(j, "dim", 2);
    if (cfg.dim != 2) throw ConfigError("config: converge supports dim=2");
    cfg.convention = convention_from(j, cfg.alpha, cfg.dim);
    cfg.extent = get_or<double>(j, "extent", 8.0);
    cfg.r0 = get_or<double>(j, "r0", 1.0);
    cfg.base_points = get_or<std::int64_t>(j, "base_points", 256);
    cfg.rungs = get_or<int>(j, "rungs", 3);
    cfg.cells_per_width = get_or<double>(j, "cells_per_width", 4.0);
    cfg.window_fraction = get_or<double>(j, "window_fraction", 0.5);
    cfg.circle_samples = get_or<int>(j, "circle_samples", 2048);
    cfg.threads = threads;
    if (cfg.rungs < 1) throw ConfigError("config: rungs must be >= 1");
    if (cfg.r0 <= 0 || cfg.r0 * 4.0 > cfg.extent)
        throw ConfigError("config: need extent >= 4 * r0 to keep wrap-around mild");

    ordered_json resolved{{"alpha", cfg.alpha},
                          {"dim", cfg.dim},
                          {"convention", cfg.convention.name()},
                          {"extent", cfg.extent},
                          {"r0", cfg.r0},
                          {"base_points", cfg.base_points},
                          {"rungs", cfg.rungs},
                          {"cells_per_width", cfg.cells_per_width},
                          {"window_fraction", cfg.window_fraction},
                          {"circle_samples", cfg.circle_samples}};
    if (emit_only) {
        std::cout << resolved.dump(2) << std::endl;
        return 0;
    }

    ConvergenceTable table = convergence_study(cfg);
    std::cout << table.to_text();
    int failures = 0;
    for (const auto& r : table.rows) failures += r.failed;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream csv(fs::path(out_dir) / "convergence.csv");
        csv << table.to_csv();
        std::ofstream txt(fs::path(out_dir) / "convergence.txt");
        txt << table.to_text();
        std::ofstream cfgf(fs::path(out_dir) / "config.json");
        cfgf << resolved.dump(2) << '\n';
        if (plot) {
            write_radius_plot((fs::path(out_dir) / "radius_vs_t.svg").string(), table);
            write_error_plot((fs::path(out_dir) / "error_vs_h.svg").string(), table);
        }
        for (const auto& r : table.rows) {
            if (r.failed) continue;
            char name[64];
            std::snprintf(name, sizeof name, "radii_%06lld.csv",
                          static_cast<long long>(r.points));
            std::ofstream rf(fs::path(out_dir) / name);
            rf.precision(17);
            rf << "t,radius_mean,law\n";
            for (size_t i = 0; i < r.times.size(); ++i)
                rf << r.times[i] << ',' << r.radii[i] << ','
                   << table.law.radius(r.times[i]) << '\n';
        }
    }
    // Partial rung failures are reported but do not abort the table.
    return failures == static_cast<int>(table.rows.size()) && failures > 0 ? 1 : 0;
}

int cmd_constants(const ordered_json& j, const std::string& out_dir, bool emit_only) {
    std::vector<double> alphas;
    if (j.contains("alphas"))
        alphas = j.at("alphas").get<std::vector<double>>();
    else if (j.contains("alpha"))
        alphas = {j.at("alpha").get<double>()};
    else
        alphas = {0.5, 1.0, 1.5};
    const int dim = get_or<int>(j, "dim", 2);
    const std::string regime = get_or<std::string>(j, "regime", "auto");
    for (double a : alphas)
        if (!(a > 0.0 && a < 2.0))
            throw ConfigError("config: alphas must lie inside (0,2)");
    if (regime != "auto" && regime != "moment")
        throw ConfigError("config: regime must be auto or moment");
    if (emit_only) {
        ordered_json r{{"alphas", alphas}, {"dim", dim}, {"regime", regime}};
        r["convention"] = get_or<std::string>(j, "convention", "STANDARD_SYMBOL");
        std::cout << r.dump(2) << std::endl;
        return 0;
    }

    std::ostringstream csv;
    csv.precision(12);
    csv << "alpha,dim,convention,C_alpha,error_estimate\n";
    for (double a : alphas) {
        const auto conv = convention_from(j, a, dim);
        // force_moment_formula probes the (1,2) formula outside its regime;
        // limit_constant rejects alpha <= 1 there.
        LimitConstant c = limit_constant(a, dim, conv, regime == "moment");
        csv << c.alpha << ',' << c.dim << ',' << conv.name() << ',' << c.value << ','
            << c.error_estimate << '\n';
    }
    std::cout << csv.str();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream f(fs::path(out_dir) / "constants.csv");
        f << csv.str();
    }
    return 0;
}

int cmd_validate(const ordered_json& j, const std::string& out_dir) {
    const double tol_scale = get_or<double>(j, "tolerance_scale", 1.0);
    if (tol_scale < 0.0) throw ConfigError("config: tolerance_scale must be >= 0");
    ordered_json report;
    bool all_pass = true;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "  " << detail << std::endl;
        report[name] = {{"pass", ok}, {"detail", detail}};
        all_pass = all_pass && ok;
    };

    // Kernel mass and tail bound, 2-D, t = 1.
    for (double a : {0.5, 1.0, 1.5}) {
        const Grid g = make_grid(2, 32.0, 512);
        SpectralKernel k = build_kernel(g, a, 1.0, NormalizationConvention::standard());
        double mass = 0.0;
        for (double v : k.real_space.values) mass += v;
        mass *= g.cell_volume();
        const bool mass_ok = std::abs(mass - 1.0) <= 1e-10 * tol_scale;
        check("kernel_mass_alpha_" + std::to_string(a), mass_ok,
              "mass=" + std::to_string(mass));
        TailBoundReport tb = validate_tail_bound(k, 10.0);
        const bool tb_ok = tb.pass && tb.ratio_max < 1e3 * tol_scale;
        check("tail_bound_alpha_" + std::to_string(a), tb_ok,
              "C_hat=" + std::to_string(tb.ratio_max));
    }

    // Small-time limit, 1-D, paper convention, alpha = 0.5.
    {
        const Grid g = make_grid(1, 8.0, 1 << 17);
        const auto conv = NormalizationConvention::paper(1, 0.5);
        const double t_min = minimal_resolvable_time(g, 0.5, conv);
        const std::vector<double> times = {64.0 * t_min, 16.0 * t_min, 4.0 * t_min, t_min};
        SmallTimeReport rep = validate_small_time_limit(g, 0.5, conv, times);
        const bool ok = rep.pass &&
                        std::abs(rep.fitted_constants.back() - 1.0) <= 0.05 * tol_scale;
        check("small_time_limit_alpha_0.5", ok,
              "C_fit=" + std::to_string(rep.fitted_constants.back()));
        report["small_time_limit_alpha_0.5"]["json"] =
            nlohmann::json::parse(rep.to_json());
    }

    // Lemma-style identity, alpha = 0.5, quadratic family.
    {
        auto prof = shared_profile(2, 0.5);
        QuadraticFamily fam;
        fam.alpha = 0.5;
        fam.a = 0.4;
        fam.quad = {0.3, 0.1, 0.25};
        Lemma38Report rep = verify_lemma38(fam, *prof, {0.08, 0.12},
                                           {0.08, 0.04, 0.02, 0.01}, 1e-7 * tol_scale);
        check("lemma38_identity", rep.pass,
              "entries=" + std::to_string(rep.entries.size()));
        report["lemma38_identity"]["json"] = nlohmann::json::parse(rep.to_json());
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream f(fs::path(out_dir) / "validate.json");
        f << report.dump(2) << '\n';
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"threshold dynamics for fractional-Laplacian front propagation"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 1;
    bool plot = false, emit_config = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "parallel ladder rungs");
    app.add_flag("--plot", plot, "emit SVG plots (converge)");
    app.add_flag("--emit-config", emit_config, "print the resolved config and exit");

    auto* sim = app.add_subcommand("simulate", "run one trajectory, dump fields");
    auto* con = app.add_subcommand("converge", "h-ladder convergence study");
    auto* cst = app.add_subcommand("constants", "limit constants C_alpha as CSV");
    auto* val = app.add_subcommand("validate", "kernel validators and identity checks");

    double cli_alpha = -1.0;
    std::string cli_convention, cli_regime;
    cst->add_option("--alpha", cli_alpha, "single alpha value");
    cst->add_option("--regime", cli_regime, "auto | moment");
    for (auto* sc : {sim, con, cst, val})
        sc->add_option("--convention", cli_convention,
                       "STANDARD_SYMBOL | UNNORMALIZED_PAPER");

    CLI11_PARSE(app, argc, argv);

    try {
        ordered_json cfg = load_config(config_path);
        if (!cli_convention.empty()) cfg["convention"] = cli_convention;
        if (cli_alpha > 0.0) cfg["alpha"] = cli_alpha;
        if (!cli_regime.empty()) cfg["regime"] = cli_regime;

        if (sim->parsed()) return cmd_simulate(cfg, out_dir.empty() ? "out" : out_dir,
                                               emit_config);
        if (con->parsed()) return cmd_converge(cfg, out_dir, plot, threads, emit_config);
        if (cst->parsed()) return cmd_constants(cfg, out_dir, emit_config);
        if (val->parsed()) return cmd_validate(cfg, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
