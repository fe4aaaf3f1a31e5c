#include "nlns/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>

#include <json.hpp>

#include "nlns/error.hpp"
#include "nlns/io.hpp"

namespace nlns {
namespace {

std::string snapshot_name(int step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%06d.nlns", step);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

RunSetup prepare_run(const RunConfig& config) {
  config.validate();
  const auto& p = config.params;
  TorusGrid grid(config.dim, config.n, p.half_length);
  KernelTable kernel =
      build_kernel_table(grid, KernelSpec{p.alpha, p.half_length, true, true}, build_cutoff(p.half_length));
  InitialData initial =
      initial_data(gaussian_density(grid), random_velocity(grid, config.seed), p);
  return RunSetup{std::move(grid), std::move(kernel), std::move(initial)};
}

RunSummary run(const RunConfig& config, const RunOptions& options) {
  const RunSetup setup = prepare_run(config);
  const auto& p = config.params;
  const DiagnosticsEvaluator evaluator(p, setup.kernel);

  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  std::unique_ptr<DiagnosticsWriter> writer;
  std::string snapshot_index = "step,t,file\n";
  if (options.write_outputs) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    write_text_file((dir / "manifest.cfg").string(), manifest(config));
    writer = std::make_unique<DiagnosticsWriter>((dir / "diagnostics.csv").string());
  }

  RunSummary summary{.final_state = setup.initial.state, .records = {}, .initial_report = setup.initial.report};
  State state = setup.initial.state;

  auto record = [&](const State& s) {
    DiagnosticsRecord r = evaluator.evaluate(s);
    summary.max_floored_points =
        std::max(summary.max_floored_points, static_cast<std::size_t>(r.floored_points));
    summary.records.push_back(r);
    if (writer) writer->write(r);
  };
  auto snapshot = [&](const State& s, int step) {
    if (!options.write_outputs) return;
    const std::string name = snapshot_name(step);
    write_snapshot((dir / name).string(), state_fields(s));
    snapshot_index += std::to_string(step) + "," + format_csv_number(s.t) + "," + name + "\n";
  };

  record(state);
  std::optional<double> auto_dt;
  // A fixed dt that had to be cut after a rejection stays cut.
  std::optional<double> fixed_dt = config.dt;
  const double T = config.T;
  int step_index = 0;
  bool recorded_last = true;
  while (state.t < T && T - state.t > 1e-12 * std::max(1.0, T)) {
    double target;
    if (fixed_dt) {
      target = *fixed_dt;
    } else {
      const double suggested = suggest_dt(state, p, setup.kernel);
      auto_dt = auto_dt ? std::min(*auto_dt, suggested) : suggested;
      target = *auto_dt;
    }
    int attempts = 0;
    while (true) {
      const double h = std::min(target, T - state.t);
      try {
        state = step(state, h, p, setup.kernel);
        summary.last_dt = h;
        break;
      } catch (const StepRejected& e) {
        ++summary.rejected_steps;
        if (++attempts > options.max_rejections) throw;
        target = e.suggested_dt();
        if (auto_dt) auto_dt = target;
        if (fixed_dt) fixed_dt = target;
      }
    }
    ++step_index;
    const bool last = !(T - state.t > 1e-12 * std::max(1.0, T));
    recorded_last = false;
    if (step_index % config.diagnostics_every == 0 || last) {
      record(state);
      recorded_last = true;
    }
    if (config.snapshot_every > 0 && step_index % config.snapshot_every == 0) snapshot(state, step_index);
  }
  if (!recorded_last) record(state);
  summary.steps = step_index;
  if (config.snapshot_every == 0 || step_index % config.snapshot_every != 0) snapshot(state, step_index);

  if (summary.records.size() >= 3) {
    const auto residual = energy_budget_residual(summary.records);
    for (std::size_t i = 0; i < residual.size(); ++i)
      summary.records[i].energy_budget_residual = residual[i];
    summary.max_abs_budget_residual = max_abs(residual);
  }
  summary.final_state = state;

  if (options.write_outputs) {
    writer.reset();
    write_text_file((dir / "diagnostics.csv").string(), diagnostics_csv(summary.records));
    write_text_file((dir / "snapshots.csv").string(), snapshot_index);
    nlohmann::ordered_json j;
    j["steps"] = summary.steps;
    j["rejected_steps"] = summary.rejected_steps;
    j["final_time"] = state.t;
    j["last_dt"] = summary.last_dt;
    j["records"] = summary.records.size();
    j["max_floored_points"] = summary.max_floored_points;
    j["max_abs_budget_residual"] = summary.max_abs_budget_residual;
    const auto& ir = summary.initial_report;
    j["initial_data"] = {{"grad_sqrt_truncated", ir.grad_sqrt_truncated},
                         {"grad_sqrt_original", ir.grad_sqrt_original},
                         {"grad_sqrt_bound", ir.grad_sqrt_bound},
                         {"grad_sqrt_holds", ir.grad_sqrt_holds},
                         {"interaction_truncated", ir.interaction_truncated},
                         {"interaction_whole", ir.interaction_whole},
                         {"interaction_holds", ir.interaction_holds},
                         {"l1_truncation_error", ir.l1_truncation_error}};
    write_text_file((dir / "summary.json").string(), j.dump(2) + "\n");
  }
  return summary;
}

}  // namespace nlns
