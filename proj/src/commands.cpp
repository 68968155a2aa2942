#include "viscodiff/commands.hpp"

#include "viscodiff/csv.hpp"
#include "viscodiff/galerkin.hpp"
#include "viscodiff/hysteresis.hpp"
#include "viscodiff/svg.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

namespace viscodiff {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
    return os;
}

void finish_output(std::ofstream& os, const fs::path& path) {
    os.flush();
    if (!os) throw std::ios_base::failure("write to '" + path.string() + "' failed");
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj, int n) {
    auto os = open_output(path);
    CsvWriter csv(os);
    std::vector<std::string> header;
    header.emplace_back("t");
    for (int i = 1; i <= n; ++i) header.push_back("a_" + std::to_string(i));
    for (int i = 1; i <= n; ++i) header.push_back("b_" + std::to_string(i));
    for (const char* name : {"mass", "free_energy", "dissipation_rate", "boundary_power",
                             "energy_residual", "energy_residual_rel", "grad_sq"})
        header.emplace_back(name);
    csv.write_row(header);

    std::vector<double> row;
    row.reserve(header.size());
    for (const auto& sample : traj.samples) {
        row.clear();
        row.push_back(sample.t);
        for (int i = 0; i < n; ++i) row.push_back(sample.a[i]);
        for (int i = 0; i < n; ++i) row.push_back(sample.b[i]);
        row.push_back(sample.diag.mass);
        row.push_back(sample.diag.free_energy);
        row.push_back(sample.diag.dissipation_rate);
        row.push_back(sample.diag.boundary_power);
        row.push_back(sample.diag.energy_residual);
        row.push_back(sample.diag.energy_residual_rel);
        row.push_back(sample.diag.grad_sq);
        csv.write_row(row);
    }
    finish_output(os, path);
}

// traj_out receives the computed trajectory so sweep members do not rerun it.
int simulate_into(const SimulationConfig& cfg, const fs::path& out_dir, std::ostream& log,
                  Trajectory* traj_out) {
    try {
        fs::create_directories(out_dir);
        Trajectory traj = run(cfg);
        write_trajectory_csv(out_dir / "trajectory.csv", traj, cfg.mode_count);
        log << "simulate: " << traj.samples.size() << " samples, projection residual "
            << traj.projection_residual << "\n";
        if (traj.stability_advisory)
            log << "advisory: explicit step may be unstable, "
                   "alpha*lambda_n*K_eff*dt/(1+alpha*beta*lambda_n) = "
                << traj.advisory_ratio << " > 2; reduce dt or use implicit_euler\n";
        const bool failed = traj.failed;
        const std::string reason = traj.failure_reason;
        if (traj_out) *traj_out = std::move(traj);
        if (failed) {
            log << "solver failure: " << reason << "\n";
            log << "partial trajectory kept in " << (out_dir / "trajectory.csv").string()
                << "\n";
            return kExitSolver;
        }
        return kExitOk;
    } catch (const ConfigError& err) {
        log << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& err) {
        log << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::ios_base::failure& err) {
        log << "i/o error: " << err.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& err) {
        log << "i/o error: " << err.what() << "\n";
        return kExitIo;
    }
}

struct HysteresisRun {
    std::vector<double> s, w, y;
    HysteresisLoop loop;
};

HysteresisRun evaluate_hysteresis(const HysteresisConfig& cfg) {
    HysteresisRun out;
    const auto grid = hysteresis_grid(cfg.periods, cfg.steps_per_period);
    if (cfg.variant == HysteresisConfig::Variant::quasi_static) {
        const auto traj = play_trajectory(cfg.amplitude, cfg.gamma, cfg.stiffness, grid);
        for (const auto& st : traj) {
            out.s.push_back(st.s);
            out.w.push_back(st.w);
            out.y.push_back(st.y);
        }
    } else {
        const auto traj = viscous_scalar_trajectory(cfg.amplitude, cfg.gamma, cfg.stiffness,
                                                    cfg.beta, cfg.tau, grid);
        for (const auto& st : traj) {
            out.s.push_back(st.s);
            out.w.push_back(st.amplitude * zigzag(st.s));
            out.y.push_back(st.stiffness * st.u);
        }
    }
    out.loop = hysteresis_loop(out.s, out.w, out.y);
    return out;
}

double closed_form_gap(const HysteresisConfig& cfg, const HysteresisRun& run) {
    double gap = 0.0;
    for (std::size_t j = 0; j < run.s.size(); ++j)
        gap = std::max(gap, std::abs(run.y[j] - closed_form_play(cfg.amplitude, cfg.gamma,
                                                                 cfg.stiffness, run.s[j])));
    return gap;
}

int hysteresis_into(const HysteresisConfig& cfg, const fs::path& out_dir, std::ostream& log,
                    HysteresisRun* run_out) {
    try {
        fs::create_directories(out_dir);
        const HysteresisRun result = evaluate_hysteresis(cfg);

        {
            auto os = open_output(out_dir / "timeseries.csv");
            CsvWriter csv(os);
            const std::vector<std::string> header = {"s", "w", "y"};
            csv.write_row(header);
            for (std::size_t j = 0; j < result.s.size(); ++j) {
                const double row[] = {result.s[j], result.w[j], result.y[j]};
                csv.write_row(row);
            }
            finish_output(os, out_dir / "timeseries.csv");
        }
        {
            auto os = open_output(out_dir / "loop.csv");
            CsvWriter csv(os);
            const std::vector<std::string> header = {"w", "y"};
            csv.write_row(header);
            for (const auto& [w, y] : result.loop.points) {
                const double row[] = {w, y};
                csv.write_row(row);
            }
            finish_output(os, out_dir / "loop.csv");
        }

        PlotSpec series_plot;
        series_plot.title = cfg.variant == HysteresisConfig::Variant::viscous
                                ? "viscous scalar response"
                                : "play operator response";
        series_plot.x_label = "s";
        series_plot.y_label = "value";
        series_plot.series.push_back({"driver w = A z(s)", result.s, result.w});
        series_plot.series.push_back({"output y = K v(s)", result.s, result.y});
        write_line_plot_file((out_dir / "timeseries.svg").string(), series_plot);

        PlotSpec loop_plot;
        loop_plot.title = "hysteresis loop";
        loop_plot.x_label = "w";
        loop_plot.y_label = "y";
        loop_plot.series.push_back({"", result.w, result.y});
        write_line_plot_file((out_dir / "loop.svg").string(), loop_plot);

        log << "hysteresis: " << result.s.size() << " samples, loop_area = "
            << format_double(result.loop.area) << "\n";
        if (run_out) *run_out = result;
        return kExitOk;
    } catch (const std::invalid_argument& err) {
        log << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const std::ios_base::failure& err) {
        log << "i/o error: " << err.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& err) {
        log << "i/o error: " << err.what() << "\n";
        return kExitIo;
    }
}

int sweep_thread_cap() {
    if (const char* env = std::getenv("VISCODIFF_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string sanitize_for_path(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '.')
            out += 'p';
        else if (c == '-')
            out += 'm';
        else if (c == '+')
            continue;
        else
            out += c;
    }
    return out;
}

std::string sanitize_message(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

struct SweepRow {
    double value = 0.0;
    std::string status = "ok";
    double final_free_energy = 0.0;
    double max_abs_energy_residual = 0.0;
    double loop_area = 0.0;
    double closed_form_gap = 0.0;
    double psi_prime_gap = 0.0;
    bool is_simulation = false;
    bool has_psi_gap = false;
    double wall_seconds = 0.0;
};

// max |psi_eps' - psi'| on [0.2, 0.8]; zero whenever eps < 0.2 because the
// log branch is active on the whole window
double psi_prime_gap_on_window(const FreeEnergyModel& model) {
    const FreeEnergyModel exact = make_regular_solution(model.k, model.chi);
    double worst = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double r = 0.2 + 0.6 * i / 600.0;
        worst = std::max(worst, std::abs(model.dpsi(r) - exact.dpsi(r)));
    }
    return worst;
}

SimulationConfig apply_parameter(SimulationConfig cfg, const std::string& parameter,
                                 double value) {
    if (parameter == "beta") {
        cfg.beta = value;
    } else if (parameter == "n") {
        cfg.mode_count = static_cast<int>(value);
        if (cfg.quad_nodes > 0 && cfg.quad_nodes < 4 * cfg.mode_count) cfg.quad_nodes = 0;
    } else if (parameter == "dt") {
        cfg.dt = value;
    } else if (parameter == "epsilon") {
        if (cfg.model.kind != EnergyKind::regularized_log)
            throw ConfigError(0, "epsilon sweep needs model = regularized_log");
        cfg.model = make_regularized_log(cfg.model.k, cfg.model.chi, value);
    } else {
        throw ConfigError(0, "parameter '" + parameter + "' does not apply to [simulate]");
    }
    return cfg;
}

HysteresisConfig apply_parameter(HysteresisConfig cfg, const std::string& parameter,
                                 double value) {
    if (parameter == "tau") {
        if (cfg.variant != HysteresisConfig::Variant::viscous)
            throw ConfigError(0, "tau sweep needs variant = viscous");
        cfg.tau = value;
    } else if (parameter == "A") {
        cfg.amplitude = value;
    } else if (parameter == "gamma") {
        cfg.gamma = value;
    } else {
        throw ConfigError(0, "parameter '" + parameter + "' does not apply to [hysteresis]");
    }
    return cfg;
}

SweepRow run_sweep_member(const ParsedConfig& base, const std::string& parameter, double value,
                          const fs::path& member_dir) {
    SweepRow row;
    row.value = value;
    const auto start = std::chrono::steady_clock::now();
    try {
        std::ostringstream sink;
        if (std::holds_alternative<SimulationConfig>(base)) {
            const SimulationConfig cfg =
                apply_parameter(std::get<SimulationConfig>(base), parameter, value);
            row.is_simulation = true;
            Trajectory traj;
            const int rc = simulate_into(cfg, member_dir, sink, &traj);
            if (rc != kExitOk)
                row.status = traj.failed ? "failed: " + sanitize_message(traj.failure_reason)
                                         : "failed: exit " + std::to_string(rc);
            if (!traj.samples.empty()) {
                row.final_free_energy = traj.samples.back().diag.free_energy;
                for (const auto& s : traj.samples)
                    row.max_abs_energy_residual =
                        std::max(row.max_abs_energy_residual, std::abs(s.diag.energy_residual));
            }
            if (cfg.model.kind == EnergyKind::regularized_log) {
                row.psi_prime_gap = psi_prime_gap_on_window(cfg.model);
                row.has_psi_gap = true;
            }
        } else {
            const HysteresisConfig cfg =
                apply_parameter(std::get<HysteresisConfig>(base), parameter, value);
            HysteresisRun result;
            const int rc = hysteresis_into(cfg, member_dir, sink, &result);
            if (rc != kExitOk) row.status = "failed: exit " + std::to_string(rc);
            row.loop_area = result.loop.area;
            row.closed_form_gap = closed_form_gap(cfg, result);
        }
    } catch (const std::exception& err) {
        row.status = "failed: " + sanitize_message(err.what());
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                           .count();
    return row;
}

}  // namespace

int cmd_simulate(const SimulationConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    return simulate_into(cfg, out_dir, log, nullptr);
}

int cmd_hysteresis(const HysteresisConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    return hysteresis_into(cfg, out_dir, log, nullptr);
}

bool sweep_parameter_supported(const std::string& parameter) {
    static const char* kParams[] = {"beta", "n", "dt", "tau", "A", "gamma", "epsilon"};
    return std::any_of(std::begin(kParams), std::end(kParams),
                       [&](const char* p) { return parameter == p; });
}

int cmd_sweep(const ParsedConfig& base, const std::string& parameter,
              std::span<const double> values, const fs::path& out_dir, std::ostream& log) {
    try {
        if (!sweep_parameter_supported(parameter)) {
            log << "config error: unsupported sweep parameter '" << parameter
                << "' (expected beta, n, dt, tau, A, gamma or epsilon)\n";
            return kExitConfig;
        }
        if (values.empty()) {
            log << "config error: sweep needs at least one value\n";
            return kExitConfig;
        }
        fs::create_directories(out_dir);

        std::vector<SweepRow> rows(values.size());
        std::vector<fs::path> dirs(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            dirs[i] = out_dir / (parameter + "_" + sanitize_for_path(format_double(values[i])));

        std::atomic<std::size_t> next{0};
        const int workers =
            std::max(1, std::min<int>(sweep_thread_cap(), static_cast<int>(values.size())));
        const auto worker = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= values.size()) return;
                rows[i] = run_sweep_member(base, parameter, values[i], dirs[i]);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        const fs::path summary_path = out_dir / "summary.csv";
        auto os = open_output(summary_path);
        CsvWriter csv(os);
        const std::vector<std::string> header = {
            "param",     "value",     "status",          "final_free_energy",
            "max_abs_energy_residual", "loop_area", "closed_form_gap", "psi_prime_gap",
            "wall_seconds"};
        csv.write_row(header);
        for (const auto& row : rows) {
            std::vector<std::string> cells;
            cells.push_back(parameter);
            cells.push_back(format_double(row.value));
            cells.push_back(row.status);
            if (row.is_simulation) {
                cells.push_back(format_double(row.final_free_energy));
                cells.push_back(format_double(row.max_abs_energy_residual));
                cells.emplace_back();
                cells.emplace_back();
            } else {
                cells.emplace_back();
                cells.emplace_back();
                cells.push_back(format_double(row.loop_area));
                cells.push_back(format_double(row.closed_form_gap));
            }
            cells.push_back(row.has_psi_gap ? format_double(row.psi_prime_gap) : std::string());
            cells.push_back(format_double(row.wall_seconds));
            csv.write_row(cells);
        }
        finish_output(os, summary_path);

        for (std::size_t i = 0; i < rows.size(); ++i)
            log << "sweep " << parameter << " = " << format_double(rows[i].value) << ": "
                << rows[i].status << "\n";
        log << "summary written to " << summary_path.string() << "\n";
        return kExitOk;
    } catch (const std::ios_base::failure& err) {
        log << "i/o error: " << err.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& err) {
        log << "i/o error: " << err.what() << "\n";
        return kExitIo;
    }
}

}  // namespace viscodiff
