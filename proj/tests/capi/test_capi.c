/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "nlns/nlns.h"

static int failures = 0;

#define EXPECT(cond)                                            \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                               \
    }                                                           \
  } while (0)

int main(void) {
  char* json = NULL;
  nlns_config* cfg = NULL;

  EXPECT(strlen(nlns_version()) > 0);

  EXPECT(nlns_presets(&json) == NLNS_OK);
  EXPECT(strstr(json, "galerkin-full") != NULL);
  EXPECT(strstr(json, "bd-regime") != NULL);
  EXPECT(strstr(json, "limit") != NULL);
  nlns_string_free(json);

  EXPECT(nlns_config_parse("alpha=2.5\n", &cfg) == NLNS_ERR_VALIDATION);
  EXPECT(strstr(nlns_last_error(), "alpha must lie in (0,2)") != NULL);
  EXPECT(nlns_config_load("/nonexistent.cfg", &cfg) == NLNS_ERR_IO);
  EXPECT(strstr(nlns_last_error(), "config not found") != NULL);
  EXPECT(nlns_presets(NULL) == NLNS_ERR_VALIDATION);

  EXPECT(nlns_config_parse("dim=1\nn=32\nL=8\nalpha=0.5\npreset=limit\nT=0.1\n", &cfg) == NLNS_OK);
  EXPECT(nlns_config_manifest(cfg, &json) == NLNS_OK);
  EXPECT(strstr(json, "preset=limit") != NULL);
  nlns_string_free(json);

  nlns_sim* sim = NULL;
  EXPECT(nlns_sim_create(cfg, &sim) == NLNS_OK);
  size_t points = 0;
  EXPECT(nlns_sim_size(sim, &points) == NLNS_OK);
  EXPECT(points == 32);
  double* rho = malloc(points * sizeof(double));
  EXPECT(nlns_sim_density(sim, rho, points) == NLNS_OK);
  double mass0 = 0.0;
  for (size_t i = 0; i < points; ++i) mass0 += rho[i] * 0.5;
  EXPECT(nlns_sim_density(sim, rho, points - 1) == NLNS_ERR_VALIDATION);

  double dt = 0.0, t = 0.0;
  EXPECT(nlns_sim_suggest_dt(sim, &dt) == NLNS_OK);
  EXPECT(dt > 0.0 && dt <= 0.05);
  for (int i = 0; i < 5; ++i) EXPECT(nlns_sim_step(sim, dt) == NLNS_OK);
  EXPECT(nlns_sim_time(sim, &t) == NLNS_OK);
  EXPECT(fabs(t - 5 * dt) < 1e-14);
  EXPECT(nlns_sim_density(sim, rho, points) == NLNS_OK);
  double mass = 0.0;
  for (size_t i = 0; i < points; ++i) mass += rho[i] * 0.5;
  EXPECT(fabs(mass - mass0) <= 1e-12 * mass0);
  EXPECT(nlns_sim_diagnostics(sim, &json) == NLNS_OK);
  EXPECT(strstr(json, "\"energy_E\"") != NULL);
  nlns_string_free(json);
  nlns_sim_destroy(sim);
  free(rho);

  EXPECT(nlns_kernel_report(3, 16, 8.0, 1.5, &json) == NLNS_OK);
  EXPECT(strstr(json, "\"positivity_pass\": true") != NULL);
  nlns_string_free(json);
  EXPECT(nlns_kernel_report(3, 16, 8.0, 2.5, &json) == NLNS_ERR_VALIDATION);

  EXPECT(nlns_oracle_convolve(1, 16, 4.0, 0.5, 3, &json) == NLNS_OK);
  EXPECT(strstr(json, "\"pass\": true") != NULL);
  nlns_string_free(json);

  EXPECT(nlns_budget("/nonexistent.csv", &json) == NLNS_ERR_IO);

  nlns_config_free(cfg);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("C API checks passed\n");
  return failures ? 1 : 0;
}
