#include "nlns/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nlns/error.hpp"

namespace nlns {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value, int line) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (value.empty() || end != begin + value.size() || !std::isfinite(v))
    throw ValidationError("line " + std::to_string(line) + ": malformed number '" + value +
                          "' for key '" + key + "'");
  return v;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& value, int line) {
  Int v{};
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (value.empty() || ec != std::errc() || ptr != last)
    throw ValidationError("line " + std::to_string(line) + ": malformed integer '" + value +
                          "' for key '" + key + "'");
  return v;
}

// Works for const and non-const parameter sets.
template <class Params>
auto coefficient(Params& p, const std::string& key) -> decltype(&p.epsilon) {
  if (key == "epsilon") return &p.epsilon;
  if (key == "nu") return &p.nu;
  if (key == "eta") return &p.eta;
  if (key == "delta") return &p.delta;
  if (key == "kappa") return &p.kappa;
  if (key == "r0") return &p.r0;
  if (key == "r1") return &p.r1;
  return nullptr;
}

const char* const kCoefficientKeys[] = {"epsilon", "nu", "eta", "delta", "kappa", "r0", "r1"};

}  // namespace

void RunConfig::validate() const {
  if (dim < 1 || dim > 3) throw ValidationError("dim must be 1, 2 or 3");
  if (n < 4 || n % 2 != 0) throw ValidationError("n must be an even integer >= 4");
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  if (dt && !(*dt > 0.0)) throw ValidationError("dt must be positive or auto");
  if (snapshot_every < 0) throw ValidationError("snapshot_every must be >= 0");
  if (diagnostics_every < 1) throw ValidationError("diagnostics_every must be >= 1");
  if (output_dir.empty()) throw ValidationError("output_dir must not be empty");
  params.validate();
  if (dim == 1 && !(params.alpha < 1.0))
    throw ValidationError("alpha must lie in (0,1) for dim = 1 (singular kernel not integrable)");
  if (!(params.mollifier_width < params.half_length))
    throw ValidationError("mollifier_width must be smaller than L");
}

std::vector<PresetInfo> preset_list() {
  return {
      {"galerkin-full",
       "epsilon=1e-3 nu=1e-4 eta=1e-8 delta=1e-10*h^6 kappa=1e-4 r0=1e-3 r1=1e-3"},
      {"bd-regime", "kappa=1e-4 r0=1e-3 r1=1e-3"},
      {"limit", "kernel force and density-weighted viscosity only (all coefficients 0)"},
      {"custom", "all coefficients 0 unless set explicitly"},
  };
}

RegularizationParams preset_coefficients(const std::string& name, int dim, int n, double L) {
  (void)dim;
  RegularizationParams p;
  if (name == "galerkin-full") {
    const double h = 2.0 * L / n;
    p.epsilon = 1e-3;
    p.nu = 1e-4;
    p.eta = 1e-8;
    p.delta = 1e-10 * std::pow(h, 6);
    p.kappa = 1e-4;
    p.r0 = 1e-3;
    p.r1 = 1e-3;
  } else if (name == "bd-regime") {
    p.kappa = 1e-4;
    p.r0 = 1e-3;
    p.r1 = 1e-3;
  } else if (name != "limit" && name != "custom") {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return p;
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::pair<std::string, int>> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ValidationError("line " + std::to_string(line) + ": expected key=value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ValidationError("line " + std::to_string(line) + ": empty key");
    const auto prev = entries.find(key);
    if (prev != entries.end())
      throw ValidationError("duplicate key '" + key + "' on lines " +
                            std::to_string(prev->second.second) + " and " + std::to_string(line));
    entries.emplace(key, std::make_pair(value, line));
  }

  RunConfig c;
  RegularizationParams explicit_coeffs;
  std::map<std::string, bool> coeff_given;

  for (const auto& [key, entry] : entries) {
    const auto& [value, ln] = entry;
    if (key == "dim") {
      c.dim = parse_integer<int>(key, value, ln);
    } else if (key == "n") {
      c.n = parse_integer<int>(key, value, ln);
    } else if (key == "L") {
      c.params.half_length = parse_double(key, value, ln);
    } else if (key == "alpha") {
      c.params.alpha = parse_double(key, value, ln);
    } else if (key == "T") {
      c.T = parse_double(key, value, ln);
    } else if (key == "dt") {
      if (value == "auto")
        c.dt.reset();
      else
        c.dt = parse_double(key, value, ln);
    } else if (key == "preset") {
      c.preset = value;
    } else if (double* slot = coefficient(explicit_coeffs, key)) {
      *slot = parse_double(key, value, ln);
      coeff_given[key] = true;
    } else if (key == "m1") {
      c.params.m1 = parse_double(key, value, ln);
    } else if (key == "mollifier_width") {
      c.params.mollifier_width = parse_double(key, value, ln);
    } else if (key == "snapshot_every") {
      c.snapshot_every = parse_integer<int>(key, value, ln);
    } else if (key == "diagnostics_every") {
      c.diagnostics_every = parse_integer<int>(key, value, ln);
    } else if (key == "seed") {
      c.seed = parse_integer<std::uint64_t>(key, value, ln);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else {
      throw ValidationError("line " + std::to_string(ln) + ": unknown key '" + key + "'");
    }
  }

  // Range checks that the preset expansion depends on come first.
  if (c.dim < 1 || c.dim > 3) throw ValidationError("dim must be 1, 2 or 3");
  if (c.n < 4 || c.n % 2 != 0) throw ValidationError("n must be an even integer >= 4");
  if (!(c.params.half_length > 0.0)) throw ValidationError("L must be positive");

  const RegularizationParams preset =
      preset_coefficients(c.preset, c.dim, c.n, c.params.half_length);
  for (const char* key : kCoefficientKeys) {
    *coefficient(c.params, key) = coeff_given.count(key) ? *coefficient(explicit_coeffs, key)
                                                         : *coefficient(preset, key);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string manifest(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  const auto& p = c.params;
  kv["L"] = format_double(p.half_length);
  kv["T"] = format_double(c.T);
  kv["alpha"] = format_double(p.alpha);
  kv["delta"] = format_double(p.delta);
  kv["diagnostics_every"] = std::to_string(c.diagnostics_every);
  kv["dim"] = std::to_string(c.dim);
  kv["dt"] = c.dt ? format_double(*c.dt) : "auto";
  kv["epsilon"] = format_double(p.epsilon);
  kv["eta"] = format_double(p.eta);
  kv["kappa"] = format_double(p.kappa);
  kv["m1"] = format_double(p.m1);
  kv["mollifier_width"] = format_double(p.mollifier_width);
  kv["n"] = std::to_string(c.n);
  kv["nu"] = format_double(p.nu);
  kv["output_dir"] = c.output_dir;
  kv["preset"] = c.preset;
  kv["r0"] = format_double(p.r0);
  kv["r1"] = format_double(p.r1);
  kv["seed"] = std::to_string(c.seed);
  kv["snapshot_every"] = std::to_string(c.snapshot_every);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

}  // namespace nlns
