#ifndef BLINDINV_BLINDINV_H
#define BLINDINV_BLINDINV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BI_API __declspec(dllexport)
#elif defined(__GNUC__)
#define BI_API __attribute__((visibility("default")))
#else
#define BI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bi_status {
  BI_OK = 0,
  BI_ERR_LEVEL_MISMATCH = 1,
  BI_ERR_INDEX_OUT_OF_THETA = 2,
  BI_ERR_MODEL_MISMATCH = 3,
  BI_ERR_SINGULAR_OPERATOR = 4,
  BI_ERR_CHAIN_DIVERGED = 5,
  BI_ERR_SHAPE_MISMATCH = 6,
  BI_ERR_EMPTY_GRID = 7,
  BI_ERR_UNSUPPORTED = 8,
  BI_ERR_CONFIG = 9,
  BI_ERR_IO = 10,
  BI_ERR_PARSE = 11,
  BI_ERR_INVALID_ARGUMENT = 12,
  BI_ERR_INTERNAL = 13
} bi_status;

typedef struct bi_config bi_config;
typedef struct bi_report bi_report;
typedef struct bi_observation bi_observation;

typedef struct bi_cell_summary {
  double eps;
  double delta;
  int n_mc;
  double rmise_post;
  double rmise_galerkin;
  double rmse_theta;
} bi_cell_summary;

typedef struct bi_replication {
  uint64_t seed;
  int level;
  double err2_post;
  double err2_galerkin;
  double err2_theta;
  /* Negative when no Metropolis step was taken. */
  double acceptance;
  int cutoff_tripped;
} bi_replication;

enum { BI_REPORT_CSV = 1u, BI_REPORT_SVG = 2u };

/* Message of the last failed call on this thread; "" after a success. */
BI_API const char* bi_last_error(void);
BI_API const char* bi_status_name(bi_status status);
BI_API const char* bi_version(void);

/* preset: "heat", "deconv" or "custom". */
BI_API bi_status bi_config_create(const char* preset, bi_config** out);
BI_API void bi_config_destroy(bi_config* cfg);
BI_API bi_status bi_config_load_file(bi_config* cfg, const char* path);
BI_API bi_status bi_config_set(bi_config* cfg, const char* key, const char* value);
BI_API bi_status bi_config_validate(const bi_config* cfg);
/* Copies the settings echo into buf (NUL-terminated, truncated to cap);
   *needed receives the full length including the terminator. */
BI_API bi_status bi_config_echo(const bi_config* cfg, char* buf, size_t cap, size_t* needed);
/* Output directory configured by the `out` key. Same buffer contract as above. */
BI_API bi_status bi_config_output_dir(const bi_config* cfg, char* buf, size_t cap, size_t* needed);

/* Runs the Monte Carlo experiment described by cfg. A cancelled run still
   returns BI_OK with a report flagged partial. */
BI_API bi_status bi_run(const bi_config* cfg, bi_report** out);
BI_API void bi_report_destroy(bi_report* report);
BI_API size_t bi_report_cell_count(const bi_report* report);
BI_API int bi_report_partial(const bi_report* report);
BI_API double bi_report_wall_seconds(const bi_report* report);
BI_API bi_status bi_report_cell(const bi_report* report, size_t cell, bi_cell_summary* out);
/* Level histogram of one cell as parallel arrays. *n receives the number of
   distinct levels; at most cap entries are written. */
BI_API bi_status bi_report_cell_levels(const bi_report* report, size_t cell, int* levels, int* counts, size_t cap,
                                       size_t* n);
BI_API bi_status bi_report_emit(const bi_report* report, const char* dir, unsigned formats);

/* Re-runs one replication and writes its observation, Galerkin and posterior
   summaries and the chain trace into dir. */
BI_API bi_status bi_replay(const bi_config* cfg, double eps, double delta, size_t rep, const char* dir,
                           bi_replication* out);

/* Thread-safe; running experiments stop after the replications in flight. */
BI_API void bi_cancel(void);
BI_API void bi_reset_cancel(void);

/* Sine coefficients of the test function up to level (level entries). */
BI_API bi_status bi_f0_coefficients(int level, double* out, size_t cap);

BI_API bi_status bi_observation_simulate_heat(double t_time, double theta0, double eps, double delta, int n_sim,
                                              uint64_t seed, int noiseless, bi_observation** out);
BI_API bi_status bi_observation_simulate_deconv(double bandwidth, double eps, double delta, int n_sim, uint64_t seed,
                                                int noiseless, bi_observation** out);
BI_API bi_status bi_observation_load(const char* dir, bi_observation** out);
BI_API bi_status bi_observation_save(const bi_observation* obs, const char* dir);
BI_API void bi_observation_destroy(bi_observation* obs);
/* Y coefficients; *n receives their count, at most cap are copied. */
BI_API bi_status bi_observation_y(const bi_observation* obs, double* out, size_t cap, size_t* n);
BI_API bi_status bi_galerkin(const bi_observation* obs, int level, double tau, double* out, size_t cap, size_t* n,
                             int* cutoff_tripped);
/* Lepski level with the selection settings of cfg (which must enable lepski). */
BI_API bi_status bi_lepski(const bi_observation* obs, const bi_config* cfg, int* selected);

#ifdef __cplusplus
}
#endif

#endif
