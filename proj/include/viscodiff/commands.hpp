// Experiment orchestration behind the CLI: single runs, hysteresis
// experiments, and concurrent parameter sweeps, serialized to CSV/SVG.
// Exit codes: 0 ok, 2 config error, 3 solver failure, 4 I/O failure.
#pragma once

#include "viscodiff/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

namespace viscodiff {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

// Writes trajectory.csv with columns t, a_1..a_n, b_1..b_n, mass,
// free_energy, dissipation_rate, boundary_power, energy_residual,
// energy_residual_rel, grad_sq. Partial output is kept on solver failure.
int cmd_simulate(const SimulationConfig& cfg, const std::filesystem::path& out_dir,
                 std::ostream& log);

// Writes timeseries.csv (s, w, y), loop.csv (w, y), timeseries.svg, loop.svg.
int cmd_hysteresis(const HysteresisConfig& cfg, const std::filesystem::path& out_dir,
                   std::ostream& log);

// One concurrent run per value; per-run artifacts in subdirectories and a
// summary.csv with one row per value. Individual failures are recorded in
// the summary and the sweep continues. Parallelism is capped by the
// VISCODIFF_THREADS environment variable.
int cmd_sweep(const ParsedConfig& base, const std::string& parameter,
              std::span<const double> values, const std::filesystem::path& out_dir,
              std::ostream& log);

bool sweep_parameter_supported(const std::string& parameter);

}  // namespace viscodiff
