/* C interface to the nlns simulator.
 *
 * Every function returns an nlns_status. On failure the message of the most
 * recent error on the calling thread is available from nlns_last_error().
 * Strings handed out through char** parameters are owned by the caller and
 * must be released with nlns_string_free(). */
#ifndef NLNS_H
#define NLNS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NLNS_API __declspec(dllexport)
#else
#define NLNS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlns_status {
  NLNS_OK = 0,
  NLNS_ERR_VALIDATION = 1, /* bad arguments or configuration */
  NLNS_ERR_NUMERICAL = 2,  /* non-finite values or density floor violation */
  NLNS_ERR_IO = 3,         /* missing or unreadable files */
  NLNS_ERR_INTERNAL = 4
} nlns_status;

typedef struct nlns_config nlns_config;
typedef struct nlns_sim nlns_sim;

NLNS_API const char* nlns_version(void);
NLNS_API const char* nlns_last_error(void);
NLNS_API void nlns_string_free(char* s);

/* Configuration */
NLNS_API nlns_status nlns_config_parse(const char* text, nlns_config** out);
NLNS_API nlns_status nlns_config_load(const char* path, nlns_config** out);
NLNS_API nlns_status nlns_config_manifest(const nlns_config* config, char** out);
/* Overrides output_dir. */
NLNS_API nlns_status nlns_config_set_output_dir(nlns_config* config, const char* dir);
NLNS_API void nlns_config_free(nlns_config* config);

/* Full run to T with outputs in the configured directory; the JSON summary
 * is returned in *summary_json. */
NLNS_API nlns_status nlns_run(const nlns_config* config, char** summary_json);

/* Step-by-step simulation handle. */
NLNS_API nlns_status nlns_sim_create(const nlns_config* config, nlns_sim** out);
NLNS_API void nlns_sim_destroy(nlns_sim* sim);
NLNS_API nlns_status nlns_sim_suggest_dt(const nlns_sim* sim, double* dt);
NLNS_API nlns_status nlns_sim_step(nlns_sim* sim, double dt);
NLNS_API nlns_status nlns_sim_time(const nlns_sim* sim, double* t);
NLNS_API nlns_status nlns_sim_size(const nlns_sim* sim, size_t* points);
NLNS_API nlns_status nlns_sim_density(const nlns_sim* sim, double* out, size_t len);
NLNS_API nlns_status nlns_sim_diagnostics(const nlns_sim* sim, char** json);

/* JSON reports */
NLNS_API nlns_status nlns_presets(char** json);
NLNS_API nlns_status nlns_kernel_report(int dim, int n, double half_length, double alpha,
                                        char** json);
NLNS_API nlns_status nlns_scalar_check(int n, double m, double k, double M, double delta,
                                       char** json);
NLNS_API nlns_status nlns_oracle_convolve(int dim, int n, double half_length, double alpha,
                                          uint64_t seed, char** json);
NLNS_API nlns_status nlns_rhs_check(const nlns_config* config, char** json);
NLNS_API nlns_status nlns_budget(const char* csv_path, char** json);

#ifdef __cplusplus
}
#endif

#endif /* NLNS_H */
