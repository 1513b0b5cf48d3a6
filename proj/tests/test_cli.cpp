#include <doctest.h>

#include "commands.hpp"
#include "config.hpp"

#include "hopspec/io.hpp"
#include "hopspec/oracle.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace hopspec;
using namespace hopspec::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "hopspec_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

int run_tool(const std::string& args) {
    const char* exe = std::getenv("HOPSPEC_CLI");
    if (!exe) return -1;
    const int status = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("defaults") {
    RunConfig c;
    CHECK(c.numerics.e_max == 12);
    CHECK(c.numerics.epsilon == 0.01);
    CHECK(c.numerics.omega_points == 2001);
    CHECK(c.omega_grid().front() == -4.0);
    CHECK(c.omega_grid().back() == 6.0);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("yaml parsing") {
    auto c = parse_config(R"(model:
  N: 3
  geometry: ring
  V: 0.5
bath:
  gamma: 0.05
numerics:
  omega_points: 11
sweep:
  axis: g
  min: 0
  max: 3
  count: 4
)");
    CHECK(c.model.N == 3);
    CHECK(c.model.geometry == Geometry::Ring);
    CHECK(c.bath.gamma == 0.05);
    REQUIRE(c.axis());
    CHECK(c.axis()->values == std::vector<double>{0.0, 1.0, 2.0, 3.0});
    auto m = c.to_model();
    CHECK(m.bath.per_monomer_terms[2][0].decay == cplx{0.05, 1.0});
}

TEST_CASE("json is accepted as well") {
    auto c = parse_config(R"({"model": {"N": 2, "V": 0.1}, "bath": {"g": 0.5}})");
    CHECK(c.model.N == 2);
    CHECK(c.bath.g == 0.5);
}

TEST_CASE("unknown key names the key and the line") {
    try {
        parse_config("model:\n  N: 2\nbath:\n  gama: 0.5\n");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "bath.gama");
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("gama") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("modle:\n  N: 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model: [1, 2]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model:\n  N: two\n"), ConfigError);
}

TEST_CASE("invalid values") {
    CHECK_THROWS_AS(parse_config("model:\n  N: 2\n  geometry: ring\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("numerics:\n  epsilon: 0\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep:\n  axis: gamma\n  values: []\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep:\n  axis: omega\n  values: [1]\n"), ConfigError);
}

TEST_CASE("overrides") {
    RunConfig c;
    apply_override(c, "bath.gamma=0.5");
    apply_override(c, "model.geometry=ring");
    apply_override(c, "model.N=4");
    apply_override(c, "sweep.axis=V");
    apply_override(c, "sweep.values=[0.1, 1]");
    CHECK(c.bath.gamma == 0.5);
    CHECK(c.model.N == 4);
    CHECK(c.axis()->values == std::vector<double>{0.1, 1.0});
    CHECK_THROWS_AS(apply_override(c, "bath.gamma"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "bath.gama=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "gamma=1"), ConfigError);
}

TEST_CASE("printed config parses back to itself") {
    RunConfig c;
    apply_override(c, "model.N=2");
    apply_override(c, "bath.terms=[{g: 0.5, gamma: 0.1, omega: 1}, {g: 0.25, gamma: 2, omega: 0.5}]");
    apply_override(c, "sweep.axis=gamma");
    apply_override(c, "sweep.min=0.01");
    apply_override(c, "sweep.max=10");
    apply_override(c, "sweep.count=5");
    apply_override(c, "sweep.spacing=log");
    const auto text = c.to_text();
    auto back = parse_config(text);
    CHECK(back.to_text() == text);
    CHECK(back.to_json() == c.to_json());
    CHECK(back.to_model().bath.term_count() == 4);
}

TEST_CASE("bare dimer spectrum file") {
    RunConfig c;
    apply_override(c, "model.N=2");
    apply_override(c, "bath.g=0");
    apply_override(c, "numerics.e_max=2");
    const auto stem = scratch("bare_dimer").string();
    auto out = run_spectrum(c, RunOptions{1, stem});
    auto rows = read_csv(out.csv);
    REQUIRE(rows.size() == 2001);
    auto modes = chain_modes(2, 1.0, 0.0);
    double worst = 0.0, fmax = 0.0;
    for (const auto& r : rows) {
        double ref = 0.0;
        for (const auto& e : modes.entries) ref += e.strength * 0.01 / (1e-4 + (r[0] - e.omega) * (r[0] - e.omega));
        worst = std::max(worst, std::abs(r[1] - ref));
        fmax = std::max(fmax, ref);
    }
    CHECK(worst <= 1e-8 * fmax);
}

TEST_CASE("damped monomer peaks at the origin") {
    RunConfig c;
    apply_override(c, "bath.gamma=5");
    apply_override(c, "numerics.omega_points=401");
    const auto stem = scratch("monomer_g5").string();
    auto rows = read_csv(run_spectrum(c, RunOptions{1, stem}).csv);
    auto best = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a[1] < b[1]; });
    CHECK(std::abs((*best)[0]) <= 10.0 / 400);
}

TEST_CASE("sidecar reproduces the csv bit for bit") {
    RunConfig c;
    apply_override(c, "model.N=2");
    apply_override(c, "bath.gamma=0.3");
    apply_override(c, "numerics.e_max=6");
    apply_override(c, "numerics.omega_points=101");
    const auto first = run_spectrum(c, RunOptions{1, scratch("rt_a").string()});
    auto again = load_config(first.meta);
    const auto second = run_spectrum(again, RunOptions{2, scratch("rt_b").string()});
    CHECK(slurp(first.csv) == slurp(second.csv));
}

TEST_CASE("sweep output is long format") {
    RunConfig c;
    apply_override(c, "numerics.omega_points=21");
    apply_override(c, "numerics.e_max=4");
    apply_override(c, "sweep.axis=gamma");
    apply_override(c, "sweep.values=[0.1, 1, 10]");
    auto out = run_sweep(c, RunOptions{1, scratch("sweep").string()});
    auto text = slurp(out.csv);
    CHECK(text.rfind("gamma,omega,F\n0.1,-4,", 0) == 0);
    CHECK(read_csv(out.csv).size() == 63);
    CHECK_THROWS_AS(run_spectrum(c, RunOptions{1, scratch("x").string()}), ConfigError);
    RunConfig plain;
    CHECK_THROWS_AS(run_sweep(plain, RunOptions{1, scratch("y").string()}), ConfigError);
}

TEST_CASE("command exit codes") {
    std::ostringstream out, err;
    RunConfig bad;
    bad.numerics.epsilon = -1;
    CHECK(cmd_spectrum(bad, {}, out, err) == kConfigError);

    RunConfig huge;
    huge.model.N = 4;
    huge.numerics.e_max = 40;
    huge.numerics.unknown_cap = 1000;
    CHECK(cmd_spectrum(huge, {1, scratch("huge").string()}, out, err) == kSolverError);

    AnalyticRequest ring{Geometry::Ring, 4, 1.0, 0.0, std::nullopt};
    std::ostringstream table;
    CHECK(cmd_analytic(ring, table, err) == kOk);
    CHECK(table.str().find("(N-1)^2/N") != std::string::npos);
    CHECK(table.str().find("sum f_j = 4") != std::string::npos);

    ValidateRequest v;
    v.options.only = {1, 8};
    v.options.workers = 1;
    std::ostringstream vout;
    CHECK(cmd_validate(v, vout, err) == kOk);
    CHECK(vout.str().find("2/2 criteria passed") != std::string::npos);
}

TEST_CASE("executable") {
    if (!std::getenv("HOPSPEC_CLI")) return;
    const auto cfg = scratch("typo.yaml");
    write_text_file(cfg, "bath:\n  gama: 0.5\n");
    CHECK(run_tool("spectrum -c " + cfg.string()) == 2);
    CHECK(run_tool("analytic -N 3") == 0);
    CHECK(run_tool("analytic") == 2);
    CHECK(run_tool("frobnicate") == 2);
    CHECK(run_tool("validate --only 8") == 0);
    CHECK(run_tool("validate --only 6 --force-e-max 2") == 1);
    CHECK(run_tool("--version") == 0);
}
