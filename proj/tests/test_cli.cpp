#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "geoflow/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string binary() {
    const char* bin = std::getenv("GEOFLOW_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "geoflow_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    static int counter = 0;
    const fs::path p = dir / ("config_in_" + std::to_string(counter++) + ".json");
    std::ofstream out(p);
    out << body;
    return p;
}

int run(const std::string& args) {
    const int rc = std::system((binary() + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("verify exit codes: pass, fail, indeterminate") {
    const fs::path dir = fresh_dir("verify");
    const fs::path flat = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"flat"},"output":{"dir":")js" +
                 (dir / "flat").string() + R"js("}})js");
    CHECK(run("verify --config " + flat.string()) == 0);

    const fs::path conf = write_config(
        dir,
        R"js({"grid":{"n":64},"metric":{"kind":"conformal","phi":"0.2*cos(x)"},"output":{"dir":")js" +
            (dir / "conf").string() + R"js("}})js");
    CHECK(run("verify --config " + conf.string()) == 1);

    // a barely-curved metric lands between the pass and fail thresholds
    const fs::path tiny = write_config(
        dir,
        R"js({"grid":{"n":64},"metric":{"kind":"conformal","phi":"0.00001*cos(x)"},"output":{"dir":")js" +
            (dir / "tiny").string() + R"js("}})js");
    CHECK(run("verify --config " + tiny.string()) == 2);

    const json report = json::parse(slurp(dir / "flat" / "report.json"));
    CHECK(report["theorem_consistency"].get<bool>());
    CHECK(report["conditions"].size() == 6);
    CHECK(report["schema_version"].get<int>() == 1);
    CHECK(fs::exists(dir / "flat" / "config.json"));
    CHECK(slurp(dir / "flat" / "config.json") == slurp(flat));
    CHECK(fs::exists(dir / "flat" / "run_meta.json"));
}

TEST_CASE("config errors exit 64") {
    const fs::path dir = fresh_dir("errors");
    const fs::path bad_expr = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"conformal","phi":"0.2*qos(x)"}})js");
    CHECK(run("verify --config " + bad_expr.string()) == 64);

    const fs::path bad_json = write_config(dir, "{nope");
    CHECK(run("verify --config " + bad_json.string()) == 64);

    CHECK(run("verify --config " + (dir / "missing.json").string()) == 64);

    const fs::path wrong_exp = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"flat"},"experiment":"evolve"})js");
    CHECK(run("verify --config " + wrong_exp.string()) == 64);

    const fs::path not_spd = write_config(
        dir,
        R"js({"grid":{"n":64},"metric":{"kind":"general","g11":"cos(x)","g12":"0","g22":"1"}})js");
    CHECK(run("verify --config " + not_spd.string()) == 64);

    const fs::path odd_n = write_config(dir, R"js({"grid":{"n":63},"metric":{"kind":"flat"}})js");
    CHECK(run("verify --config " + odd_n.string()) == 64);
}

TEST_CASE("solver failures exit 70") {
    const fs::path dir = fresh_dir("solver");
    // CFL guard: |X| ~ 8 at dt = 1e-2 exceeds 0.5 h
    const fs::path cfl = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"flat"},)js"
             R"js("evolve":{"f0":"8*sin(y)","dt":0.01,"t_end":0.1},"output":{"dir":")js" +
                 (dir / "cfl").string() + R"js("}})js");
    CHECK(run("evolve --config " + cfl.string()) == 70);
}

TEST_CASE("evolve writes trajectory and summary") {
    const fs::path dir = fresh_dir("evolve");
    const fs::path cfg = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"flat"},)js"
             R"js("evolve":{"f0":"sin(x)*cos(y)","dt":0.001,"t_end":0.02},)js"
             R"js("output":{"dir":")js" +
                 (dir / "out").string() + R"js(","snapshots":true,"heatmaps":true}})js");
    CHECK(run("evolve --config " + cfg.string()) == 0);

    const json summary = json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["max_harmonic_drift"].get<double>() < 1e-8);
    CHECK(summary["steps"].get<int>() == 20);

    const std::string traj = slurp(dir / "out" / "trajectory.csv");
    CHECK(traj.rfind("t,energy,div_norm,c1,c2", 0) == 0);

    // snapshots round-trip through the field CSV format
    const auto csv = geoflow::read_field_csv((dir / "out" / "velocity_000000_x.csv").string());
    CHECK(csv.n == 64);
    CHECK(csv.component == "comp_x");
    double worst = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const double x = geoflow::GridSpec{64}.x(i), y = geoflow::GridSpec{64}.y(j);
            // X = sharp_omega d f0 = (f0_y, -f0_x) on the flat torus
            worst = std::max(worst, std::abs(csv.values(i, j) + std::sin(x) * std::sin(y)));
        }
    CHECK(worst < 1e-12);

    // PGM header
    const std::string pgm = slurp(dir / "out" / "stream_000000.pgm");
    CHECK(pgm.rfind("P5\n64 64\n255\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n64 64\n255\n").size() + 64 * 64);
    CHECK(summary["heatmaps"].size() == 3); // records at steps 0, 10, 20
}

TEST_CASE("decompose outputs orthogonal parts") {
    const fs::path dir = fresh_dir("decompose");
    const fs::path cfg = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"flat"},)js"
             R"js("decompose":{"phi_x":"1+cos(x)+sin(y)","phi_y":"0.5*sin(x+y)"},)js"
             R"js("output":{"dir":")js" +
                 (dir / "out").string() + R"js("}})js");
    CHECK(run("decompose --config " + cfg.string()) == 0);
    const json report = json::parse(slurp(dir / "out" / "report.json"));
    CHECK(report["reconstruction_residual"].get<double>() < 1e-10);
    const auto ortho = report["orthogonality_normalized"];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b) CHECK(std::abs(ortho[a][b].get<double>()) < 1e-10);
    for (const char* f : {"exact_x.csv", "exact_y.csv", "coexact_x.csv", "coexact_y.csv",
                          "harmonic_x.csv", "harmonic_y.csv", "potential_f.csv", "potential_a.csv"})
        CHECK(fs::exists(dir / "out" / f));
}

TEST_CASE("detect writes the eps table with the limit target") {
    const fs::path dir = fresh_dir("detect");
    const fs::path cfg = write_config(
        dir, R"js({"grid":{"n":256},"metric":{"kind":"flat"},)js"
             R"js("detect":{"tensor":"metric","eps":[1.0,0.5]},"output":{"dir":")js" +
                 (dir / "out").string() + R"js("}})js");
    CHECK(run("detect --config " + cfg.string()) == 0);
    const json report = json::parse(slurp(dir / "out" / "report.json"));
    CHECK(report["monotone_approach"].get<bool>());
    CHECK(report["rows"].size() == 2);
    const double ratio = report["error_ratios"][0].get<double>();
    CHECK(std::abs(ratio - 4.0) < 0.1);

    std::istringstream csv(slurp(dir / "out" / "detect.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "eps,value,limit_target");
    int rows = 0;
    while (std::getline(csv, line) && !line.empty()) ++rows;
    CHECK(rows == 2);

    // eps below the resolution guard is a solver-domain failure
    const fs::path small = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"flat"},)js"
             R"js("detect":{"tensor":"metric","eps":[0.25]},"output":{"dir":")js" +
                 (dir / "small").string() + R"js("}})js");
    CHECK(run("detect --config " + small.string()) == 70);
}

TEST_CASE("reports are byte-identical across runs") {
    const fs::path dir = fresh_dir("determinism");
    const fs::path dcfg = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"conformal","phi":"0.2*cos(x)"},)js"
             R"js("decompose":{"phi_x":"1+cos(x)+sin(y)","phi_y":"0.5*sin(x+y)"}})js");
    CHECK(run("decompose --config " + dcfg.string() + " --out " + (dir / "d1").string()) == 0);
    CHECK(run("decompose --config " + dcfg.string() + " --out " + (dir / "d2").string()) == 0);
    CHECK(slurp(dir / "d1" / "report.json") == slurp(dir / "d2" / "report.json"));
    CHECK(!slurp(dir / "d1" / "report.json").empty());

    const fs::path tcfg = write_config(
        dir, R"js({"grid":{"n":256},"metric":{"kind":"flat"},)js"
             R"js("detect":{"tensor":"metric","eps":[1.0,0.5]}})js");
    CHECK(run("detect --config " + tcfg.string() + " --out " + (dir / "t1").string()) == 0);
    CHECK(run("detect --config " + tcfg.string() + " --out " + (dir / "t2").string()) == 0);
    CHECK(slurp(dir / "t1" / "report.json") == slurp(dir / "t2" / "report.json"));
    CHECK(slurp(dir / "t1" / "detect.csv") == slurp(dir / "t2" / "detect.csv"));
}

TEST_CASE("identities run on the general metric") {
    const fs::path dir = fresh_dir("identities");
    const fs::path cfg = write_config(
        dir,
        R"js({"grid":{"n":64},"metric":{"kind":"general","g11":"1.25+0.2*cos(x)",)js"
        R"js("g12":"0.15*sin(x+y)","g22":"1.1+0.2*sin(y)"},"output":{"dir":")js" +
            (dir / "out").string() + R"js("}})js");
    CHECK(run("identities --config " + cfg.string()) == 0);
    const json res = json::parse(slurp(dir / "out" / "residuals.json"));
    CHECK(res["all_ok"].get<bool>());
    CHECK(res["residuals"].size() >= 10);
}

TEST_CASE("cli overrides and environment") {
    const fs::path dir = fresh_dir("overrides");
    const fs::path cfg = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"flat"},"output":{"dir":")js" +
                 (dir / "out").string() + R"js("}})js");
    // spectral identities stay exact at the overridden size
    CHECK(run("identities --config " + cfg.string() + " --n 32") == 0);
    const json res = json::parse(slurp(dir / "out" / "residuals.json"));
    CHECK(res["grid"]["n"].get<int>() == 32);

    const fs::path dcfg = write_config(
        dir, R"js({"grid":{"n":64},"metric":{"kind":"flat"},)js"
             R"js("decompose":{"phi_x":"cos(x)","phi_y":"0"},"output":{"dir":")js" +
                 (dir / "outd").string() + R"js("}})js");
    CHECK(run("decompose --config " + dcfg.string() + " --mode fd4") == 0);
    const json dres = json::parse(slurp(dir / "outd" / "report.json"));
    CHECK(dres["grid"]["mode"].get<std::string>() == "fd4");

    const int rc = std::system(("GEOFLOW_THREADS=0 " + binary() + " verify --config " +
                                cfg.string() + " >/dev/null 2>&1")
                                   .c_str());
    CHECK(WEXITSTATUS(rc) == 64);
}
