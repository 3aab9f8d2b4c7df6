#pragma once
// Config-driven orchestration: simulation, restriction evaluation,
// identified-set search, point estimation, and the canned reproductions.

#include <filesystem>
#include <optional>
#include <string>

#include "netform/closed_form.hpp"
#include "netform/config.hpp"
#include "netform/criterion.hpp"
#include "netform/cycles.hpp"
#include "netform/tetrad_logit.hpp"

namespace netform {

struct SeedDiagnostics {
  std::uint64_t seed = 0;
  bool converged = true;
  int sweeps = 0;
  std::size_t edges = 0;
  std::size_t active_cells = 0;
  std::size_t dropped_cells = 0;
  std::size_t packed_tetrads = 0;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<GridPoint> grid_nonparam;
  std::vector<GridPoint> grid_param;
  IdentifiedSet set_nonparam;
  IdentifiedSet set_param;
  SeedDiagnostics diag;
};

struct PointIdResult {
  std::uint64_t seed = 0;
  LogitFit fit;
  std::size_t admissible = 0;
  std::size_t classified = 0;
  std::size_t discarded = 0;
  double isolated_fraction = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SeedResult> seeds;
  std::vector<PointIdResult> point_fits;
  double runtime_seconds = 0.0;
};

// Executes the configured mode. fdelta is required for parametric criteria;
// when absent a convolution table is built on demand.
ExperimentReport run(const ExperimentConfig& cfg,
                     const DeltaDistribution* fdelta = nullptr);

// Writes criterion CSVs, interval summaries and diagnostics under out_dir.
void write_report(const ExperimentReport& report,
                  const std::filesystem::path& out_dir);

// Two-column (gamma, q) CSV for external plotting; no shift applied.
std::string emit_plot_data(const std::vector<GridPoint>& grid);

// Canned reproductions of the simulation-study artifacts. Returns pass/fail
// against the stated tolerances plus a human-readable diff summary.
struct ReproduceOutcome {
  bool pass = false;
  std::string summary;
};
ReproduceOutcome reproduce_paper(const std::string& which,
                                 const std::filesystem::path& out_dir,
                                 int jobs = 1);

std::string interval_str(const IdentifiedSet& s);

}  // namespace netform
