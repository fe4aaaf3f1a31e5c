#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlns/dynamics.hpp"

namespace nlns {

/// Fully resolved run configuration. After parsing, every regularization
/// coefficient is explicit: the preset only supplies defaults for the
/// coefficients that the file leaves out.
struct RunConfig {
  int dim = 1;
  int n = 64;
  double T = 1.0;
  std::optional<double> dt;  // empty means "auto"
  std::string preset = "custom";
  RegularizationParams params;
  int snapshot_every = 0;     // steps between snapshots; 0 writes only the final state
  int diagnostics_every = 1;  // steps between diagnostics records
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  void validate() const;
};

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Names and one-line descriptions of the built-in presets.
std::vector<PresetInfo> preset_list();

/// Coefficients (epsilon, nu, eta, delta, kappa, r0, r1) set by a preset for
/// the given grid. Throws ValidationError for an unknown name.
RegularizationParams preset_coefficients(const std::string& name, int dim, int n, double L);

/// Parses key=value lines; '#' starts a comment. Errors name the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical key=value text with sorted keys and round-trip precision.
std::string manifest(const RunConfig& config);

}  // namespace nlns
