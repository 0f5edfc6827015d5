// geoflow: batch front-end for torus geodesic experiments.
//
// Subcommands: verify, evolve, decompose, detect, identities. Each reads a
// JSON config, writes its outputs plus an echo of the config into the output
// directory, and reports through the exit code:
//   0 success (verify: consistent pass)     1 verify: consistent fail /
//   identities: residual above threshold    2 verify: indeterminate or mixed
//   64 configuration errors                 70 solver failures

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "geoflow/criteria.hpp"
#include "geoflow/euler_arnold.hpp"
#include "geoflow/fieldexpr.hpp"
#include "geoflow/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace geoflow;

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir;
    int n_override = 0;
    std::string mode_override;
};

struct LoadedConfig {
    json doc;
    GridSpec grid;
    MetricField metric;
    std::string metric_id;
    fs::path out;
    bool snapshots = false;
    bool heatmaps = false;
};

int thread_cap() {
    // Caps internal parallelism; the current pipeline runs entries
    // sequentially, which satisfies any positive cap.
    if (const char* env = std::getenv("GEOFLOW_THREADS")) {
        const int v = std::atoi(env);
        if (v < 1) throw ConfigError("GEOFLOW_THREADS must be a positive integer");
        return v;
    }
    return 1;
}

ScalarField require_expr_field(const json& obj, const std::string& key, const GridSpec& grid) {
    if (!obj.contains(key) || !obj[key].is_string())
        throw ConfigError("missing expression field \"" + key + "\"");
    return eval_expression(obj[key].get<std::string>(), grid);
}

LoadedConfig load_config(const Cli& cli, const std::string& subcommand) {
    std::ifstream in(cli.config_path);
    if (!in) throw ConfigError("cannot open config " + cli.config_path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    if (doc.contains("experiment") && doc["experiment"].get<std::string>() != subcommand)
        throw ConfigError("config experiment \"" + doc["experiment"].get<std::string>() +
                          "\" does not match subcommand \"" + subcommand + "\"");

    int n = 64;
    DiffMode mode = DiffMode::spectral;
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        if (g.contains("n")) n = g["n"].get<int>();
        if (g.contains("mode")) {
            const std::string m = g["mode"].get<std::string>();
            if (m == "spectral") mode = DiffMode::spectral;
            else if (m == "fd4") mode = DiffMode::fd4;
            else throw ConfigError("grid.mode must be \"spectral\" or \"fd4\"");
        }
    }
    if (cli.n_override > 0) n = cli.n_override;
    if (!cli.mode_override.empty()) {
        if (cli.mode_override == "spectral") mode = DiffMode::spectral;
        else if (cli.mode_override == "fd4") mode = DiffMode::fd4;
        else throw ConfigError("--mode must be spectral or fd4");
    }
    const GridSpec grid(n, mode);

    if (!doc.contains("metric") || !doc["metric"].contains("kind"))
        throw ConfigError("config needs metric.kind");
    const json& mj = doc["metric"];
    const std::string kind = mj["kind"].get<std::string>();

    std::string metric_id;
    std::optional<MetricField> metric;
    if (kind == "flat") {
        metric = MetricField::flat(grid);
        metric_id = "flat";
    } else if (kind == "conformal") {
        if (!mj.contains("phi")) throw ConfigError("conformal metric needs a phi expression");
        const std::string phi = mj["phi"].get<std::string>();
        metric = MetricField::conformal(eval_expression(phi, grid));
        metric_id = "conformal(phi=" + phi + ")";
    } else if (kind == "general") {
        const ScalarField g11 = require_expr_field(mj, "g11", grid);
        const ScalarField g12 = require_expr_field(mj, "g12", grid);
        const ScalarField g22 = require_expr_field(mj, "g22", grid);
        metric = MetricField(grid, g11.values, g12.values, g22.values);
        metric_id = "general(g11=" + mj["g11"].get<std::string>() +
                    ";g12=" + mj["g12"].get<std::string>() +
                    ";g22=" + mj["g22"].get<std::string>() + ")";
    } else {
        throw ConfigError("metric.kind must be flat, conformal or general");
    }

    LoadedConfig out{std::move(doc), grid, std::move(*metric), metric_id, {}, false, false};
    std::string dir = "out";
    if (out.doc.contains("output")) {
        const json& o = out.doc["output"];
        if (o.contains("dir")) dir = o["dir"].get<std::string>();
        if (o.contains("snapshots")) out.snapshots = o["snapshots"].get<bool>();
        if (o.contains("heatmaps")) out.heatmaps = o["heatmaps"].get<bool>();
    }
    if (!cli.out_dir.empty()) dir = cli.out_dir;
    out.out = dir;
    fs::create_directories(out.out);
    fs::copy_file(cli.config_path, out.out / "config.json", fs::copy_options::overwrite_existing);
    return out;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
}

json grid_json(const GridSpec& g) {
    return {{"n", g.n}, {"mode", g.mode == DiffMode::spectral ? "spectral" : "fd4"}};
}

// ---------------------------------------------------------------------------

int cmd_verify(const LoadedConfig& cfg) {
    double pass_tol = 1e-6, fail_tol = 1e-4;
    if (cfg.doc.contains("verify")) {
        const json& v = cfg.doc["verify"];
        if (v.contains("pass_tol")) pass_tol = v["pass_tol"].get<double>();
        if (v.contains("fail_tol")) fail_tol = v["fail_tol"].get<double>();
    }
    const CriteriaReport report =
        run_criteria_suite(cfg.metric, cfg.metric_id, pass_tol, fail_tol);

    json conditions = json::array();
    for (const ConditionResult& c : report.conditions)
        conditions.push_back({{"name", c.name},
                              {"residual", c.residual},
                              {"threshold", c.threshold},
                              {"verdict", verdict_name(c.verdict)}});
    write_json(cfg.out / "report.json",
               {{"schema_version", 1},
                {"metric_id", report.metric_id},
                {"grid", grid_json(cfg.grid)},
                {"tolerances", {{"pass", report.pass_tol}, {"fail", report.fail_tol}}},
                {"conditions", conditions},
                {"theorem_consistency", report.theorem_consistency}});

    for (const ConditionResult& c : report.conditions)
        std::printf("%-20s residual %.3e  %s\n", c.name.c_str(), c.residual,
                    verdict_name(c.verdict));
    if (report.all_pass) return 0;
    if (report.all_fail) return 1;
    return 2;
}

int cmd_evolve(const LoadedConfig& cfg) {
    if (!cfg.doc.contains("evolve")) throw ConfigError("config needs an evolve block");
    const json& e = cfg.doc["evolve"];
    const ScalarField f0 = require_expr_field(e, "f0", cfg.grid);

    IntegratorConfig icfg;
    if (e.contains("dt")) icfg.dt = e["dt"].get<double>();
    if (e.contains("t_end")) icfg.t_end = e["t_end"].get<double>();
    if (e.contains("reproject_every")) icfg.reproject_every = e["reproject_every"].get<int>();
    if (e.contains("record_every")) icfg.record_every = e["record_every"].get<int>();
    if (e.contains("group")) {
        const std::string g = e["group"].get<std::string>();
        if (g == "full") icfg.group = Group::full;
        else if (g == "vol") icfg.group = Group::vol;
        else if (g == "sym") icfg.group = Group::sym;
        else throw ConfigError("evolve.group must be full, vol or sym");
    }

    const EvolveContext ctx(cfg.metric);
    const VectorField x0 = sharp_omega(d0(f0), cfg.metric);
    const Trajectory traj = evolve(x0, icfg, ctx);

    write_trajectory_csv((cfg.out / "trajectory.csv").string(), traj);

    double max_drift = 0.0, max_div = 0.0;
    for (const GeodesicState& s : traj.records) {
        max_drift = std::max({max_drift, std::abs(s.c1), std::abs(s.c2)});
        max_div = std::max(max_div, s.div_norm);
    }
    const double e0 = traj.records.front().energy;
    double energy_drift = 0.0;
    for (const GeodesicState& s : traj.records)
        energy_drift = std::max(energy_drift, std::abs(s.energy - e0));
    if (e0 > 0.0) energy_drift /= e0;

    json heatmaps = json::array();
    if (cfg.snapshots || cfg.heatmaps) {
        for (std::size_t k = 0; k < traj.records.size(); ++k) {
            const GeodesicState& s = traj.records[k];
            char tag[32];
            std::snprintf(tag, sizeof(tag), "%06zu", k);
            if (cfg.snapshots) {
                write_field_csv((cfg.out / (std::string("velocity_") + tag + "_x.csv")).string(),
                                s.X.comp_x, "comp_x");
                write_field_csv((cfg.out / (std::string("velocity_") + tag + "_y.csv")).string(),
                                s.X.comp_y, "comp_y");
            }
            if (cfg.heatmaps) {
                const ScalarField psi =
                    poisson_solve(delta1(flat_omega(s.X, cfg.metric), cfg.metric), cfg.metric);
                const std::string name = std::string("stream_") + tag + ".pgm";
                const auto [lo, hi] = write_pgm((cfg.out / name).string(), psi.values);
                heatmaps.push_back({{"file", name}, {"t", s.t}, {"min", lo}, {"max", hi}});
            }
        }
    }

    write_json(cfg.out / "summary.json",
               {{"schema_version", 1},
                {"metric_id", cfg.metric_id},
                {"grid", grid_json(cfg.grid)},
                {"steps", traj.steps},
                {"max_harmonic_drift", max_drift},
                {"energy_drift_rel", energy_drift},
                {"max_div_norm", max_div},
                {"max_drift_before_reproject", traj.max_drift_before_reproject},
                {"heatmaps", heatmaps}});
    std::printf("evolve: %zu steps, max harmonic drift %.3e, energy drift %.3e\n", traj.steps,
                max_drift, energy_drift);
    return 0;
}

int cmd_decompose(const LoadedConfig& cfg) {
    if (!cfg.doc.contains("decompose")) throw ConfigError("config needs a decompose block");
    const json& d = cfg.doc["decompose"];
    OneFormField phi(cfg.grid);
    phi.comp_x = require_expr_field(d, "phi_x", cfg.grid).values;
    phi.comp_y = require_expr_field(d, "phi_y", cfg.grid).values;

    const HarmonicBasis basis = harmonic_basis(cfg.metric);
    const HodgeSplit split = hodge_decompose(phi, cfg.metric, basis);

    const struct {
        const char* name;
        const OneFormField& part;
    } parts[] = {{"exact", split.exact}, {"coexact", split.coexact}, {"harmonic", split.harmonic}};
    for (const auto& p : parts) {
        write_field_csv((cfg.out / (std::string(p.name) + "_x.csv")).string(), p.part.comp_x,
                        "comp_x");
        write_field_csv((cfg.out / (std::string(p.name) + "_y.csv")).string(), p.part.comp_y,
                        "comp_y");
    }
    write_field_csv((cfg.out / "potential_f.csv").string(), split.potential_f.values, "f");
    write_field_csv((cfg.out / "potential_a.csv").string(), split.potential_a.density, "density");

    const double scale = std::max(1e-300, l2_norm(phi, cfg.metric));
    json ortho = json::array();
    for (const auto& a : parts) {
        json row = json::array();
        for (const auto& b : parts)
            row.push_back(inner_product(a.part, b.part, cfg.metric) / (scale * scale));
        ortho.push_back(row);
    }
    const double recon =
        l2_norm(split.exact + split.coexact + split.harmonic - phi, cfg.metric) / scale;

    if (cfg.heatmaps) {
        write_pgm((cfg.out / "potential_f.pgm").string(), split.potential_f.values);
        write_pgm((cfg.out / "potential_a.pgm").string(), split.potential_a.density);
    }

    write_json(cfg.out / "report.json",
               {{"schema_version", 1},
                {"metric_id", cfg.metric_id},
                {"grid", grid_json(cfg.grid)},
                {"reconstruction_residual", recon},
                {"orthogonality_normalized", ortho},
                {"harmonic_coefficients", {split.harmonic_c1, split.harmonic_c2}},
                {"basis_gram_residual", basis.gram_residual}});
    std::printf("decompose: reconstruction residual %.3e\n", recon);
    return 0;
}

int cmd_detect(const LoadedConfig& cfg) {
    if (!cfg.doc.contains("detect")) throw ConfigError("config needs a detect block");
    const json& d = cfg.doc["detect"];

    SymTensorField tensor(cfg.grid);
    std::function<double(double)> t22_line;
    double cx = std::numbers::pi, cy = std::numbers::pi;
    if (d.contains("center")) {
        cx = d["center"][0].get<double>();
        cy = d["center"][1].get<double>();
    }
    BumpSpec spec;
    spec.center_i = static_cast<int>(std::llround(cx / cfg.grid.spacing())) % cfg.grid.n;
    spec.center_j = static_cast<int>(std::llround(cy / cfg.grid.spacing())) % cfg.grid.n;

    if (d.contains("tensor") && d["tensor"].is_string()) {
        if (d["tensor"].get<std::string>() != "metric")
            throw ConfigError("detect.tensor must be \"metric\" or an expression object");
        tensor = metric_tensor(cfg.metric);
        // detection requires a flat chart around the bump, where g22 = 1
        t22_line = [](double) { return 1.0; };
    } else if (d.contains("tensor")) {
        const json& t = d["tensor"];
        tensor.t11 = require_expr_field(t, "t11", cfg.grid).values;
        tensor.t12 = require_expr_field(t, "t12", cfg.grid).values;
        tensor.t22 = require_expr_field(t, "t22", cfg.grid).values;
        auto ast = std::shared_ptr<fieldexpr::Expr>(fieldexpr::parse(t["t22"].get<std::string>()));
        const double x0 = cfg.grid.x(spec.center_i), y0 = cfg.grid.y(spec.center_j);
        t22_line = [ast, x0, y0](double v) { return fieldexpr::evaluate_at(*ast, x0, y0 + v); };
    } else {
        throw ConfigError("detect block needs a tensor");
    }

    std::vector<double> eps_list = {1.0, 0.5, 0.25};
    if (d.contains("eps")) eps_list = d["eps"].get<std::vector<double>>();

    const double target = detection_limit_target(t22_line);

    std::ofstream csv(cfg.out / "detect.csv");
    csv << "eps,value,limit_target\n";
    json rows = json::array();
    bool monotone = true;
    double prev = 0.0;
    std::vector<double> diffs;
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        spec.epsilon = eps_list[k];
        const double v = detection_integral(tensor, spec, cfg.metric);
        char line[128];
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", spec.epsilon, v, target);
        csv << line;
        rows.push_back({{"eps", spec.epsilon}, {"value", v}});
        if (k && std::abs(v - target) > std::abs(prev - target)) monotone = false;
        diffs.push_back(v - target);
        prev = v;
    }
    json ratios = json::array();
    for (std::size_t k = 0; k + 1 < diffs.size(); ++k)
        if (diffs[k + 1] != 0.0) ratios.push_back(diffs[k] / diffs[k + 1]);

    write_json(cfg.out / "report.json", {{"schema_version", 1},
                                         {"metric_id", cfg.metric_id},
                                         {"grid", grid_json(cfg.grid)},
                                         {"center_node", {spec.center_i, spec.center_j}},
                                         {"limit_target", target},
                                         {"rows", rows},
                                         {"monotone_approach", monotone},
                                         {"error_ratios", ratios}});
    std::printf("detect: limit target %.6e, %zu widths, monotone=%d\n", target, eps_list.size(),
                monotone ? 1 : 0);
    return 0;
}

int cmd_identities(const LoadedConfig& cfg) {
    const GridSpec& grid = cfg.grid;
    const MetricField& g = cfg.metric;
    const EvolveContext ctx(g);

    json entries = json::array();
    bool all_ok = true;
    auto add = [&](const std::string& name, double value, double threshold) {
        const bool ok = value <= threshold;
        all_ok = all_ok && ok;
        entries.push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"ok", ok}});
    };

    const ScalarField f = trig_scalar(grid, 1001);
    const OneFormField psi = trig_oneform(grid, 1002);
    TwoFormField alpha(grid);
    alpha.density = trig_scalar(grid, 1003).values;

    add("adjointness_d0_delta1",
        std::abs(inner_product(d0(f), psi, g) - inner_product(f, delta1(psi, g), g)) /
            std::max(1e-300, l2_norm(d0(f), g) * l2_norm(psi, g)),
        1e-12);
    add("adjointness_d1_delta2",
        std::abs(inner_product(d1(psi), alpha, g) - inner_product(psi, delta2(alpha, g), g)) /
            std::max(1e-300, l2_norm(d1(psi), g) * l2_norm(alpha, g)),
        1e-12);
    add("dd_zero", max_abs(d1(d0(f))) / std::max(1.0, max_abs(f)), 1e-12);
    {
        const OneFormField ss = star1(star1(psi, g), g);
        add("star_star_one_forms", max_abs(ss + psi) / std::max(1.0, max_abs(psi)), 1e-12);
        add("musical_roundtrip", max_abs(flat_g(sharp_g(psi, g), g) - psi) / std::max(1.0, max_abs(psi)),
            1e-12);
        const ScalarField n1 = oneform_pairing(psi, psi, g);
        const ScalarField n2 = vector_pairing(sharp_omega(psi, g), sharp_omega(psi, g), g);
        add("sharp_omega_isometry", max_abs(n1 - n2) / std::max(1.0, max_abs(n1)), 1e-12);
    }
    {
        const VectorField X = trig_vector(grid, 1004);
        const VectorField Y = trig_vector(grid, 1005);
        const VectorField Z = trig_vector(grid, 1006);
        const VectorField jac = lie_bracket(X, lie_bracket(Y, Z)) +
                                lie_bracket(Y, lie_bracket(Z, X)) +
                                lie_bracket(Z, lie_bracket(X, Y));
        add("jacobi_identity", max_abs(jac) / std::max(1.0, max_abs(X) * max_abs(Y) * max_abs(Z)),
            1e-8);
        add("trace_identity", trace_identity_residual(Y, g, ctx.gam), 1e-8);
        double worst = 0.0;
        for (std::uint64_t s = 1; s <= 5; ++s)
            worst = std::max(worst, lemma2_residual(trig_vector(grid, 2000 + s),
                                                    trig_vector(grid, 3000 + s), g, ctx.gam));
        add("lemma2_identity", worst, 1e-6);
    }
    add("bochner_beta1", bochner_residual(ctx.basis.beta1, g, ctx.gam), 1e-6);
    add("bochner_beta2", bochner_residual(ctx.basis.beta2, g, ctx.gam), 1e-6);
    {
        double worst_flat = 0.0, worst_omega = 0.0;
        for (std::uint64_t s = 1; s <= 3; ++s) {
            const OneFormField p1 = closed_trig_oneform(grid, 4000 + s);
            const OneFormField p2 = closed_trig_oneform(grid, 5000 + s);
            worst_flat = std::max(worst_flat, bracket_identity_flat(p1, p2, g));
            worst_omega = std::max(worst_omega, bracket_identity_omega(p1, p2, g));
        }
        add("bracket_identity_wedge", worst_flat, 1e-8);
        add("bracket_identity_omega", worst_omega, 1e-8);
    }

    write_json(cfg.out / "residuals.json", {{"schema_version", 1},
                                            {"metric_id", cfg.metric_id},
                                            {"grid", grid_json(cfg.grid)},
                                            {"residuals", entries},
                                            {"all_ok", all_ok}});
    for (const auto& e : entries)
        std::printf("%-28s %.3e (<= %.0e) %s\n", e["name"].get<std::string>().c_str(),
                    e["value"].get<double>(), e["threshold"].get<double>(),
                    e["ok"].get<bool>() ? "ok" : "EXCEEDED");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic experiments on diffeomorphism groups of the 2-torus"};
    app.require_subcommand(1);

    Cli cli;
    const char* names[] = {"verify", "evolve", "decompose", "detect", "identities"};
    const char* descs[] = {"evaluate the totally-geodesic criteria suite",
                           "integrate the geodesic equation",
                           "Hodge-decompose a 1-form",
                           "run the bump detection experiment",
                           "run the operator identity battery"};
    for (int k = 0; k < 5; ++k) {
        CLI::App* sub = app.add_subcommand(names[k], descs[k]);
        sub->add_option("--config", cli.config_path, "JSON config path")->required();
        sub->add_option("--out", cli.out_dir, "output directory (overrides config)");
        sub->add_option("--n", cli.n_override, "grid size override");
        sub->add_option("--mode", cli.mode_override, "differentiation mode override");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        thread_cap();
        const auto t0 = std::chrono::steady_clock::now();
        const LoadedConfig cfg = load_config(cli, sub);
        int rc = 0;
        if (sub == "verify") rc = cmd_verify(cfg);
        else if (sub == "evolve") rc = cmd_evolve(cfg);
        else if (sub == "decompose") rc = cmd_decompose(cfg);
        else if (sub == "detect") rc = cmd_detect(cfg);
        else rc = cmd_identities(cfg);
        const auto t1 = std::chrono::steady_clock::now();
        write_json(cfg.out / "run_meta.json",
                   {{"wall_time_ms",
                     std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}});
        return rc;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 64;
    } catch (const EvalError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 64;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 64;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 70;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 70;
    }
}
