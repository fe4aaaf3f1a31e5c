#include "nlns/nlns.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "nlns/config.hpp"
#include "nlns/error.hpp"
#include "nlns/functionals.hpp"
#include "nlns/reports.hpp"
#include "nlns/run.hpp"

struct nlns_config {
  nlns::RunConfig config;
};

struct nlns_sim {
  nlns::RunConfig config;
  std::unique_ptr<nlns::RunSetup> setup;
  std::unique_ptr<nlns::DiagnosticsEvaluator> evaluator;
  nlns::State state;
};

namespace {

thread_local std::string last_error;

template <class Fn>
nlns_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return NLNS_OK;
  } catch (const nlns::ValidationError& e) {
    last_error = e.what();
    return NLNS_ERR_VALIDATION;
  } catch (const nlns::NumericalError& e) {
    last_error = e.what();
    return NLNS_ERR_NUMERICAL;
  } catch (const nlns::IoError& e) {
    last_error = e.what();
    return NLNS_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NLNS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NLNS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return NLNS_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw nlns::ValidationError(std::string(what) + " must not be null");
}

void emit(char** out, const nlns::Json& j) { *out = copy_string(j.dump(2)); }

}  // namespace

extern "C" {

const char* nlns_version(void) { return "1.0.0"; }

const char* nlns_last_error(void) { return last_error.c_str(); }

void nlns_string_free(char* s) { std::free(s); }

nlns_status nlns_config_parse(const char* text, nlns_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new nlns_config{nlns::parse_config(text)};
  });
}

nlns_status nlns_config_load(const char* path, nlns_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new nlns_config{nlns::load_config(path)};
  });
}

nlns_status nlns_config_manifest(const nlns_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = copy_string(nlns::manifest(config->config));
  });
}

nlns_status nlns_config_set_output_dir(nlns_config* config, const char* dir) {
  return guarded([&] {
    require(config, "config");
    require(dir, "dir");
    if (!*dir) throw nlns::ValidationError("output_dir must not be empty");
    config->config.output_dir = dir;
  });
}

void nlns_config_free(nlns_config* config) { delete config; }

nlns_status nlns_run(const nlns_config* config, char** summary_json) {
  return guarded([&] {
    require(config, "config");
    const nlns::RunSummary s = nlns::run(config->config);
    if (summary_json) {
      nlns::Json j;
      j["steps"] = s.steps;
      j["rejected_steps"] = s.rejected_steps;
      j["final_time"] = s.final_state.t;
      j["records"] = s.records.size();
      j["max_floored_points"] = s.max_floored_points;
      j["max_abs_budget_residual"] = s.max_abs_budget_residual;
      j["output_dir"] = config->config.output_dir;
      emit(summary_json, j);
    }
  });
}

nlns_status nlns_sim_create(const nlns_config* config, nlns_sim** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    auto setup = std::make_unique<nlns::RunSetup>(nlns::prepare_run(config->config));
    auto evaluator =
        std::make_unique<nlns::DiagnosticsEvaluator>(config->config.params, setup->kernel);
    nlns::State state = setup->initial.state;
    *out = new nlns_sim{config->config, std::move(setup), std::move(evaluator), std::move(state)};
  });
}

void nlns_sim_destroy(nlns_sim* sim) { delete sim; }

nlns_status nlns_sim_suggest_dt(const nlns_sim* sim, double* dt) {
  return guarded([&] {
    require(sim, "sim");
    require(dt, "dt");
    *dt = nlns::suggest_dt(sim->state, sim->config.params, sim->setup->kernel);
  });
}

nlns_status nlns_sim_step(nlns_sim* sim, double dt) {
  return guarded([&] {
    require(sim, "sim");
    sim->state = nlns::step(sim->state, dt, sim->config.params, sim->setup->kernel);
  });
}

nlns_status nlns_sim_time(const nlns_sim* sim, double* t) {
  return guarded([&] {
    require(sim, "sim");
    require(t, "t");
    *t = sim->state.t;
  });
}

nlns_status nlns_sim_size(const nlns_sim* sim, size_t* points) {
  return guarded([&] {
    require(sim, "sim");
    require(points, "points");
    *points = sim->state.rho.size();
  });
}

nlns_status nlns_sim_density(const nlns_sim* sim, double* out, size_t len) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    if (len != sim->state.rho.size())
      throw nlns::ValidationError("buffer length " + std::to_string(len) + " does not match " +
                                  std::to_string(sim->state.rho.size()) + " grid points");
    std::memcpy(out, sim->state.rho.data().data(), len * sizeof(double));
  });
}

nlns_status nlns_sim_diagnostics(const nlns_sim* sim, char** json) {
  return guarded([&] {
    require(sim, "sim");
    require(json, "json");
    const nlns::DiagnosticsRecord r = sim->evaluator->evaluate(sim->state);
    const auto header = nlns::csv_header();
    const auto values = nlns::csv_values(r);
    nlns::Json j;
    for (std::size_t i = 0; i < header.size(); ++i) j[header[i]] = values[i];
    emit(json, j);
  });
}

nlns_status nlns_presets(char** json) {
  return guarded([&] {
    require(json, "json");
    emit(json, nlns::presets_report());
  });
}

nlns_status nlns_kernel_report(int dim, int n, double half_length, double alpha, char** json) {
  return guarded([&] {
    require(json, "json");
    emit(json, nlns::kernel_report(dim, n, half_length, alpha));
  });
}

nlns_status nlns_scalar_check(int n, double m, double k, double M, double delta, char** json) {
  return guarded([&] {
    require(json, "json");
    emit(json, nlns::scalar_check(n, m, k, M, delta));
  });
}

nlns_status nlns_oracle_convolve(int dim, int n, double half_length, double alpha, uint64_t seed,
                                 char** json) {
  return guarded([&] {
    require(json, "json");
    emit(json, nlns::oracle_convolve(dim, n, half_length, alpha, seed));
  });
}

nlns_status nlns_rhs_check(const nlns_config* config, char** json) {
  return guarded([&] {
    require(config, "config");
    require(json, "json");
    emit(json, nlns::rhs_check(config->config));
  });
}

nlns_status nlns_budget(const char* csv_path, char** json) {
  return guarded([&] {
    require(csv_path, "csv_path");
    require(json, "json");
    emit(json, nlns::budget_report(csv_path));
  });
}

}  // extern "C"
