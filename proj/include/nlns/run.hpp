#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nlns/config.hpp"
#include "nlns/dynamics.hpp"
#include "nlns/functionals.hpp"
#include "nlns/kernel.hpp"

namespace nlns {

/// Grid, kernel and prepared initial state for a configuration.
struct RunSetup {
  TorusGrid grid;
  KernelTable kernel;
  InitialData initial;
};

/// Builds the grid, the truncated kernel and the initial data (unit-mass
/// Gaussian bump and the seeded random velocity) for a configuration.
RunSetup prepare_run(const RunConfig& config);

struct RunOptions {
  bool write_outputs = true;
  /// Upper bound on consecutive rejected attempts of one step.
  int max_rejections = 40;
};

struct RunSummary {
  State final_state;
  std::vector<DiagnosticsRecord> records;
  InitialDataReport initial_report;
  int steps = 0;
  int rejected_steps = 0;
  std::size_t max_floored_points = 0;
  double max_abs_budget_residual = 0.0;
  double last_dt = 0.0;
};

/// Integrates to T. With dt=auto the step is the running minimum of
/// suggest_dt, so it only ever shrinks; a rejected step is retried with the
/// rejection's suggested dt. Outputs go to config.output_dir: manifest.cfg,
/// diagnostics.csv (flushed row by row), snapshots and summary.json.
RunSummary run(const RunConfig& config, const RunOptions& options = {});

}  // namespace nlns
