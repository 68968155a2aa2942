#include "viscodiff/commands.hpp"
#include "viscodiff/csv.hpp"
#include "viscodiff/galerkin.hpp"
#include "viscodiff/hysteresis.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace viscodiff;
using Catch::Approx;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("viscodiff_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

SimulationConfig linear_oracle_config() {
    SimulationConfig cfg;
    cfg.mode_count = 8;
    cfg.alpha = 1.0;
    cfg.beta = 0.1;
    cfg.t_final = 0.5;
    cfg.dt = 1e-4;
    cfg.output_every = 50;
    cfg.model = make_quadratic(1.0);
    cfg.initial.kind = InitialSpec::Kind::cosine;
    cfg.initial.cosine_coeffs = {0.0, 0.0, std::sqrt(2.0)};  // u0 = v_3 on L = 1
    return cfg;
}

}  // namespace

TEST_CASE("cmd_simulate zero run produces all-zero columns", "[cli]") {
    SimulationConfig cfg;
    cfg.mode_count = 4;
    cfg.t_final = 0.01;
    cfg.dt = 1e-3;
    cfg.model = make_double_well(1.0);
    cfg.initial.kind = InitialSpec::Kind::constant;
    cfg.initial.value = 0.0;
    const fs::path dir = fresh_dir("zero");
    std::ostringstream log;
    REQUIRE(cmd_simulate(cfg, dir, log) == kExitOk);
    const CsvTable table = read_csv_file((dir / "trajectory.csv").string());
    REQUIRE(table.rows.size() >= 2);
    for (int i = 1; i <= 4; ++i) {
        for (double v : table.column("a_" + std::to_string(i))) CHECK(v == 0.0);
        for (double v : table.column("b_" + std::to_string(i))) CHECK(v == 0.0);
    }
    for (double v : table.column("free_energy")) CHECK(v == 0.0);
}

TEST_CASE("cmd_simulate linear oracle matches the exponential in the CSV", "[cli][oracle]") {
    const SimulationConfig cfg = linear_oracle_config();
    const fs::path dir = fresh_dir("oracle");
    std::ostringstream log;
    REQUIRE(cmd_simulate(cfg, dir, log) == kExitOk);
    const CsvTable table = read_csv_file((dir / "trajectory.csv").string());
    const auto t = table.column("t");
    const auto a3 = table.column("a_3");
    const IntervalDomain dom(1.0, cfg.mode_count);
    const double lam = eigenpair(3, dom).eigenvalue;
    const double rate = lam / (1.0 + cfg.beta * lam);
    for (std::size_t j = 0; j < t.size(); ++j)
        CHECK(a3[j] == Approx(a3[0] * std::exp(-rate * t[j])).epsilon(1e-6).margin(1e-10));
}

TEST_CASE("cmd_simulate double-well free energy decays in the CSV", "[cli]") {
    SimulationConfig cfg;
    cfg.mode_count = 8;
    cfg.beta = 0.1;
    cfg.t_final = 0.25;
    cfg.dt = 1e-3;
    cfg.model = make_double_well(1.0);
    cfg.initial.kind = InitialSpec::Kind::cosine;
    cfg.initial.cosine_coeffs = {0.5, 0.3};
    const fs::path dir = fresh_dir("dw");
    std::ostringstream log;
    REQUIRE(cmd_simulate(cfg, dir, log) == kExitOk);
    const CsvTable table = read_csv_file((dir / "trajectory.csv").string());
    const auto fe = table.column("free_energy");
    const auto residual = table.column("energy_residual");
    double max_res = 0.0;
    for (double r : residual) max_res = std::max(max_res, std::abs(r));
    const double tol = 2.0 * max_res + 1e-12;
    for (std::size_t j = 1; j < fe.size(); ++j) CHECK(fe[j] <= fe[j - 1] + tol);
}

TEST_CASE("cmd_simulate is byte deterministic", "[cli]") {
    SimulationConfig cfg = linear_oracle_config();
    cfg.t_final = 0.05;
    const fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
    std::ostringstream log;
    REQUIRE(cmd_simulate(cfg, d1, log) == kExitOk);
    REQUIRE(cmd_simulate(cfg, d2, log) == kExitOk);
    CHECK(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));
}

TEST_CASE("cmd_simulate reports solver failure with partial output", "[cli]") {
    SimulationConfig cfg;
    cfg.mode_count = 16;
    cfg.beta = 0.001;
    cfg.t_final = 2.0;
    cfg.dt = 0.02;
    cfg.model = make_double_well(1.0);
    cfg.initial.kind = InitialSpec::Kind::cosine;
    cfg.initial.cosine_coeffs = {0.5, 0.4};
    const fs::path dir = fresh_dir("blowup");
    std::ostringstream log;
    CHECK(cmd_simulate(cfg, dir, log) == kExitSolver);
    CHECK(fs::exists(dir / "trajectory.csv"));
    const CsvTable table = read_csv_file((dir / "trajectory.csv").string());
    CHECK(table.rows.size() >= 1);
    CHECK(log.str().find("solver failure") != std::string::npos);
}

TEST_CASE("cmd_hysteresis emits the four artifacts", "[cli]") {
    HysteresisConfig cfg;
    cfg.amplitude = 2.0;
    cfg.gamma = 1.0;
    cfg.stiffness = 1.0;
    cfg.periods = 1;
    cfg.steps_per_period = 4000;
    const fs::path dir = fresh_dir("hyst");
    std::ostringstream log;
    REQUIRE(cmd_hysteresis(cfg, dir, log) == kExitOk);
    for (const char* name : {"timeseries.csv", "loop.csv", "timeseries.svg", "loop.svg"})
        CHECK(fs::exists(dir / name));

    const CsvTable ts = read_csv_file((dir / "timeseries.csv").string());
    const auto s = ts.column("s");
    const auto w = ts.column("w");
    const auto y = ts.column("y");
    const auto at = [&](double target) {
        for (std::size_t j = 0; j < s.size(); ++j)
            if (std::abs(s[j] - target) < 1e-12) return std::pair{w[j], y[j]};
        FAIL("grid point " << target << " missing");
        return std::pair{0.0, 0.0};
    };
    CHECK(at(0.25).second == Approx(1.0).margin(1e-12));   // y(1/4) = A - gamma
    CHECK(at(0.125).second == Approx(0.0).margin(1e-12));
    CHECK(at(0.75).second == Approx(-1.0).margin(1e-12));
    CHECK(log.str().find("loop_area") != std::string::npos);

    // the loop csv and the svg carry the same values
    const CsvTable loop = read_csv_file((dir / "loop.csv").string());
    const std::string svg = slurp(dir / "loop.svg");
    for (int row : {0, 100, 500}) {
        const std::string token = loop.rows[row][0] + "," + loop.rows[row][1];
        INFO("token " << token);
        CHECK(svg.find(token) != std::string::npos);
    }
}

TEST_CASE("cmd_hysteresis below threshold is flat with zero area", "[cli]") {
    HysteresisConfig cfg;
    cfg.amplitude = 1.0;
    cfg.gamma = 1.5;
    cfg.stiffness = 1.0;
    cfg.periods = 1;
    cfg.steps_per_period = 256;
    const fs::path dir = fresh_dir("flat");
    std::ostringstream log;
    REQUIRE(cmd_hysteresis(cfg, dir, log) == kExitOk);
    const CsvTable ts = read_csv_file((dir / "timeseries.csv").string());
    for (double v : ts.column("y")) CHECK(v == 0.0);
    CHECK(log.str().find("loop_area = 0") != std::string::npos);
}

TEST_CASE("cmd_sweep over dt: residual column decreases", "[cli][sweep]") {
    SimulationConfig base = linear_oracle_config();
    base.t_final = 0.2;
    base.output_every = 1;
    const fs::path dir = fresh_dir("sweep_dt");
    std::ostringstream log;
    const double values[] = {1e-2, 1e-3, 1e-4};
    REQUIRE(cmd_sweep(ParsedConfig{base}, "dt", values, dir, log) == kExitOk);
    const CsvTable summary = read_csv_file((dir / "summary.csv").string());
    REQUIRE(summary.rows.size() == 3);
    const auto residuals = summary.column("max_abs_energy_residual");
    CHECK(residuals[0] > residuals[1]);
    CHECK(residuals[1] > residuals[2]);
    for (const auto& row : summary.rows) CHECK(row[2] == "ok");
    // per-member artifacts exist
    CHECK(fs::exists(dir / "dt_0p01" / "trajectory.csv"));
}

TEST_CASE("cmd_sweep over n: double-well runs complete", "[cli][sweep]") {
    SimulationConfig base;
    base.mode_count = 8;
    base.beta = 0.1;
    base.t_final = 0.1;
    base.dt = 5e-4;
    base.output_every = 100;
    base.model = make_double_well(1.0);
    base.initial.kind = InitialSpec::Kind::cosine;
    base.initial.cosine_coeffs = {0.5, 0.3};
    const fs::path dir = fresh_dir("sweep_n");
    std::ostringstream log;
    const double values[] = {8, 16, 32};
    REQUIRE(cmd_sweep(ParsedConfig{base}, "n", values, dir, log) == kExitOk);
    const CsvTable summary = read_csv_file((dir / "summary.csv").string());
    for (const auto& row : summary.rows) CHECK(row[2] == "ok");
}

TEST_CASE("cmd_sweep over epsilon reports a zero derivative gap", "[cli][sweep]") {
    SimulationConfig base;
    base.mode_count = 4;
    base.t_final = 0.01;
    base.dt = 1e-3;
    base.model = make_regularized_log(1.0, 2.0, 0.1);
    base.initial.kind = InitialSpec::Kind::constant;
    base.initial.value = 0.5;
    const fs::path dir = fresh_dir("sweep_eps");
    std::ostringstream log;
    const double values[] = {1e-1, 1e-2, 1e-3};
    REQUIRE(cmd_sweep(ParsedConfig{base}, "epsilon", values, dir, log) == kExitOk);
    const CsvTable summary = read_csv_file((dir / "summary.csv").string());
    for (double gap : summary.column("psi_prime_gap")) CHECK(gap == 0.0);
}

TEST_CASE("cmd_sweep over tau: gap to the closed form shrinks", "[cli][sweep]") {
    HysteresisConfig base;
    base.variant = HysteresisConfig::Variant::viscous;
    base.amplitude = 2.0;
    base.gamma = 1.0;
    base.stiffness = 1.0;
    base.beta = 1.0;
    base.tau = 1.0;
    base.periods = 2;
    base.steps_per_period = 1000;
    const fs::path dir = fresh_dir("sweep_tau");
    std::ostringstream log;
    const double values[] = {10, 100, 1000};
    REQUIRE(cmd_sweep(ParsedConfig{base}, "tau", values, dir, log) == kExitOk);
    const CsvTable summary = read_csv_file((dir / "summary.csv").string());
    const auto gaps = summary.column("closed_form_gap");
    REQUIRE(gaps.size() == 3);
    CHECK(gaps[0] > gaps[1]);
    CHECK(gaps[1] > gaps[2]);
}

TEST_CASE("cmd_sweep records individual failures and continues", "[cli][sweep]") {
    SimulationConfig base;
    base.mode_count = 8;
    base.beta = 0.5;
    base.t_final = 0.05;
    base.dt = 1e-3;
    base.model = make_regular_solution(1.0, 2.0);
    base.initial.kind = InitialSpec::Kind::cosine;
    base.initial.cosine_coeffs = {0.5, 0.2};
    const fs::path dir = fresh_dir("sweep_fail");
    std::ostringstream log;
    // beta > 0 fine; beta = -1 invalid (config rejection inside the member)
    const double values[] = {0.5, -1.0};
    REQUIRE(cmd_sweep(ParsedConfig{base}, "beta", values, dir, log) == kExitOk);
    const CsvTable summary = read_csv_file((dir / "summary.csv").string());
    REQUIRE(summary.rows.size() == 2);
    CHECK(summary.rows[0][2] == "ok");
    CHECK(summary.rows[1][2].find("failed") != std::string::npos);
}

TEST_CASE("cmd_sweep rejects mismatched parameters", "[cli][sweep]") {
    SimulationConfig base;
    const fs::path dir = fresh_dir("sweep_bad");
    std::ostringstream log;
    const double values[] = {1.0};
    CHECK(cmd_sweep(ParsedConfig{base}, "viscosity", values, dir, log) == kExitConfig);
    // tau on a simulate config fails per member, sweep still completes
    REQUIRE(cmd_sweep(ParsedConfig{base}, "tau", values, dir, log) == kExitOk);
    const CsvTable summary = read_csv_file((dir / "summary.csv").string());
    CHECK(summary.rows[0][2].find("failed") != std::string::npos);
}

TEST_CASE("sweep honors the thread cap", "[cli][sweep]") {
    SimulationConfig base = linear_oracle_config();
    base.t_final = 0.02;
    setenv("VISCODIFF_THREADS", "1", 1);
    const fs::path dir = fresh_dir("sweep_serial");
    std::ostringstream log;
    const double values[] = {0.05, 0.1, 0.2};
    REQUIRE(cmd_sweep(ParsedConfig{base}, "beta", values, dir, log) == kExitOk);
    unsetenv("VISCODIFF_THREADS");
    const CsvTable summary = read_csv_file((dir / "summary.csv").string());
    CHECK(summary.rows.size() == 3);
}

TEST_CASE("cmd_sweep over gamma: loop area grows as the threshold shrinks", "[cli][sweep]") {
    HysteresisConfig base;
    base.amplitude = 2.0;
    base.gamma = 1.0;
    base.stiffness = 1.0;
    base.periods = 2;
    base.steps_per_period = 512;
    const fs::path dir = fresh_dir("sweep_gamma");
    std::ostringstream log;
    const double values[] = {1.5, 1.0, 0.5};
    REQUIRE(cmd_sweep(ParsedConfig{base}, "gamma", values, dir, log) == kExitOk);
    const CsvTable summary = read_csv_file((dir / "summary.csv").string());
    const auto areas = summary.column("loop_area");
    REQUIRE(areas.size() == 3);
    CHECK(areas[0] < areas[1]);
    CHECK(areas[1] < areas[2]);

    // amplitude sweep drives the same machinery
    const double amps[] = {0.5, 3.0};
    const fs::path dir2 = fresh_dir("sweep_A");
    REQUIRE(cmd_sweep(ParsedConfig{base}, "A", amps, dir2, log) == kExitOk);
    const CsvTable s2 = read_csv_file((dir2 / "summary.csv").string());
    CHECK(s2.cell(0, "loop_area") == 0.0);  // A <= gamma
    CHECK(s2.cell(1, "loop_area") > 0.0);
}

TEST_CASE("commands return the I/O exit code when the target is unwritable", "[cli]") {
    const fs::path blocker = fresh_dir("io_fail") / "file";
    {
        std::ofstream os(blocker);
        os << "x";
    }
    SimulationConfig cfg;
    cfg.mode_count = 4;
    cfg.t_final = 0.01;
    cfg.dt = 1e-3;
    std::ostringstream log;
    CHECK(cmd_simulate(cfg, blocker / "sub", log) == kExitIo);
    CHECK(log.str().find("i/o error") != std::string::npos);
}
