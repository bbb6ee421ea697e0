// runner.hpp
// Batch orchestration behind the CLI: resolve a RunConfig into a simulation
// (or sweep), run it, and persist manifest + CSV/JSON artifacts. All writes
// are deterministic: re-running a manifest reproduces identical bytes.

#pragma once

#include <filesystem>

#include "pfcs/config.hpp"
#include "pfcs/diagnostics.hpp"

namespace pfcs {

// Output directory: PFCS_OUTPUT_DIR env var wins over outputs.dir.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);
// Worker count: PFCS_WORKERS env var wins over config.
int resolve_workers(const RunConfig& cfg);

// Single trajectory run; writes manifest.json, trajectory.csv, mean_laws.csv,
// energy_ledger.csv (for tau > 0) and reports.json. Returns the process exit
// code (0 ok, 3 numerical failure with partial artifacts).
int run_command(const RunConfig& cfg, const std::filesystem::path& outdir);

// Sweep run; one subdirectory per point plus sweep_report.json and
// sweep_distances.csv. A tau sweep whose last value is 0 uses the limit
// solver for that point and reports direct errors against it.
int sweep_command(const RunConfig& cfg, const std::filesystem::path& outdir);

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj,
                          int store_every = 1);

} // namespace pfcs
