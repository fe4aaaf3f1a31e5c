// Command-line driver. Talks to the simulator only through the C interface.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlns/nlns.h"

namespace {

struct ConfigDeleter {
  void operator()(nlns_config* c) const { nlns_config_free(c); }
};
using ConfigHandle = std::unique_ptr<nlns_config, ConfigDeleter>;

int exit_code(nlns_status s) {
  switch (s) {
    case NLNS_OK:
      return 0;
    case NLNS_ERR_NUMERICAL:
      return 2;
    default:
      return 1;
  }
}

const char* status_name(nlns_status s) {
  switch (s) {
    case NLNS_OK:
      return "ok";
    case NLNS_ERR_VALIDATION:
      return "validation";
    case NLNS_ERR_NUMERICAL:
      return "numerical";
    case NLNS_ERR_IO:
      return "io";
    default:
      return "internal";
  }
}

// One JSON object per line on stderr so callers can parse failures.
void report_error(const std::string& kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

int fail(nlns_status s) {
  report_error(status_name(s), nlns_last_error());
  return exit_code(s);
}

// Prints and frees a JSON string produced by the library.
int print_result(nlns_status s, char** json) {
  if (s != NLNS_OK) return fail(s);
  std::cout << *json << "\n";
  nlns_string_free(*json);
  return 0;
}

nlns_status load(const std::string& path, ConfigHandle& out) {
  nlns_config* raw = nullptr;
  const nlns_status s = nlns_config_load(path.c_str(), &raw);
  out.reset(raw);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlns: regularized pressureless Navier-Stokes with nonlocal interaction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nlns_version());

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Run a simulation and write its artifacts");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--output-dir", output_dir, "Override output_dir from the config");

  app.add_subcommand("presets", "List the parameter presets");

  auto* rhs = app.add_subcommand("rhs-check", "Compare every right-hand-side term with finite differences");
  rhs->add_option("--config", config_path, "Configuration file")->required();

  int dim = 3;
  int n = 16;
  double half_length = 8.0;
  double alpha = 1.25;
  auto* kernel = app.add_subcommand("kernel-report", "Fourier positivity and cutoff constants of the kernel table");
  kernel->add_option("--dim", dim, "Spatial dimension")->capture_default_str();
  kernel->add_option("--n", n, "Points per axis")->capture_default_str();
  kernel->add_option("--L", half_length, "Torus half-length")->capture_default_str();
  kernel->add_option("--alpha", alpha, "Repulsion exponent")->capture_default_str();

  int level = 16;
  double m = 4.0;
  double k = 8.0;
  double M = 10.0;
  double delta = 0.1;
  auto* scalar = app.add_subcommand("scalar-check", "Certify the scalar renormalization functions");
  scalar->add_option("--n", level, "Renormalization level")->capture_default_str();
  scalar->add_option("--m", m, "Low-density cutoff level")->capture_default_str();
  scalar->add_option("--k", k, "High-density cutoff level")->capture_default_str();
  scalar->add_option("--M", M, "Velocity truncation level")->capture_default_str();
  scalar->add_option("--delta", delta, "Growth exponent margin")->capture_default_str();

  int conv_dim = 1;
  int conv_n = 32;
  double conv_alpha = 0.5;
  std::uint64_t seed = 1;
  auto* conv = app.add_subcommand("oracle-convolve", "FFT convolution against the direct sum");
  conv->add_option("--dim", conv_dim, "Spatial dimension")->capture_default_str();
  conv->add_option("--n", conv_n, "Points per axis")->capture_default_str();
  conv->add_option("--L", half_length, "Torus half-length")->capture_default_str();
  conv->add_option("--alpha", conv_alpha, "Repulsion exponent")->capture_default_str();
  conv->add_option("--seed", seed, "Random seed")->capture_default_str();

  std::string csv_path;
  auto* budget = app.add_subcommand("budget", "Energy budget residual of a diagnostics CSV");
  budget->add_option("--diagnostics", csv_path, "diagnostics.csv path")->required();

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
    std::cerr << app.help() << "\n";
    report_error("usage", std::string("unknown subcommand '") + argv[1] + "'");
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "\n";
    report_error("usage", e.what());
    return 1;
  }

  char* json = nullptr;
  if (*run) {
    ConfigHandle cfg;
    if (nlns_status s = load(config_path, cfg); s != NLNS_OK) return fail(s);
    if (!output_dir.empty())
      if (nlns_status s = nlns_config_set_output_dir(cfg.get(), output_dir.c_str()); s != NLNS_OK)
        return fail(s);
    return print_result(nlns_run(cfg.get(), &json), &json);
  }
  if (app.got_subcommand("presets")) return print_result(nlns_presets(&json), &json);
  if (*rhs) {
    ConfigHandle cfg;
    if (nlns_status s = load(config_path, cfg); s != NLNS_OK) return fail(s);
    return print_result(nlns_rhs_check(cfg.get(), &json), &json);
  }
  if (*kernel) return print_result(nlns_kernel_report(dim, n, half_length, alpha, &json), &json);
  if (*scalar) return print_result(nlns_scalar_check(level, m, k, M, delta, &json), &json);
  if (*conv)
    return print_result(nlns_oracle_convolve(conv_dim, conv_n, half_length, conv_alpha, seed, &json), &json);
  if (*budget) return print_result(nlns_budget(csv_path.c_str(), &json), &json);
  return 1;
}
