/* danebench: distributed approximate-Newton benchmark engine.
 *
 * C interface to the simulation core.  Handles are opaque; every fallible
 * call returns a db_status and leaves a human-readable message for the
 * calling thread in db_last_error().  All functions are thread-compatible:
 * distinct handles may be used from distinct threads, a single handle must
 * not be shared without external synchronization.
 */
#ifndef DANEBENCH_H
#define DANEBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DB_API __declspec(dllexport)
#else
#define DB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum db_status {
  DB_OK = 0,
  DB_ERROR_CONFIG = 2,   /* bad configuration or malformed input file */
  DB_ERROR_NUMERIC = 3,  /* numerical failure while running */
  DB_ERROR_USAGE = 4,    /* null handle, bad index, buffer too small */
  DB_ERROR_IO = 5        /* file system failure */
} db_status;

/* An experiment: one synthetic problem plus named algorithm runs.
 * Keys are flat and dotted ("problem.d", "run.<name>.T", ...). */
typedef struct db_config db_config;

/* The outcome of one run: a per-round trace and its cost ledger. */
typedef struct db_result db_result;

typedef struct db_trace_point {
  int64_t round;
  double max_grads_per_machine; /* fractional after ideal rescaling */
  uint64_t comm_rounds;
  uint64_t floats_communicated;
  double train_subopt;
  double log10_subopt;
  double pop_error;
} db_trace_point;

typedef struct db_cost_summary {
  uint64_t max_grads_per_machine;
  uint64_t comm_rounds;
  uint64_t floats_communicated;
  uint64_t exact_solve_events;
} db_cost_summary;

DB_API const char* db_version(void);

/* Message for the calling thread's most recent failing call. Never NULL. */
DB_API const char* db_last_error(void);

/* --- configuration ------------------------------------------------- */

DB_API db_config* db_config_new(void);
DB_API db_config* db_config_load(const char* path); /* NULL on failure */
DB_API db_config* db_config_clone(const db_config* cfg);
DB_API void db_config_free(db_config* cfg);

DB_API db_status db_config_set(db_config* cfg, const char* key, const char* value);
/* Resolved value (defaults applied) rendered as text. */
DB_API db_status db_config_get(const db_config* cfg, const char* key, char* buf,
                               size_t buf_len);
/* Apply DANEBENCH_* environment overrides (PROBLEM__N_TOTAL -> problem.n_total). */
DB_API db_status db_config_apply_env(db_config* cfg);
DB_API db_status db_config_validate(const db_config* cfg);

DB_API int db_config_run_count(const db_config* cfg); /* -1 on error */
DB_API db_status db_config_run_name(const db_config* cfg, int index, char* buf,
                                    size_t buf_len);

/* Resolved snapshot (tool version, conventions, every default made explicit,
 * one entry per run).  Free with db_string_free. */
DB_API char* db_config_manifest_json(const db_config* cfg);
DB_API void db_string_free(char* s);

/* --- execution ------------------------------------------------------ */

DB_API db_status db_execute(const db_config* cfg, const char* run_name, db_result** out);

/* Condition number of the full-data curvature matrix; diagnostic only. */
DB_API db_status db_condition_estimate(const db_config* cfg, double* out);

/* Generate the configured problem data and dump it as CSV ("y,x1,...,xd"). */
DB_API db_status db_dataset_write_csv(const db_config* cfg, const char* path);

/* --- results ---------------------------------------------------------- */

DB_API size_t db_result_trace_size(const db_result* res);
DB_API db_status db_result_trace_point(const db_result* res, size_t index,
                                       db_trace_point* out);
DB_API const char* db_result_algorithm(const db_result* res);
DB_API db_status db_result_cost_summary(const db_result* res, db_cost_summary* out);
/* First round reaching target log10 suboptimality; *out_round = -1 if never. */
DB_API db_status db_result_rounds_to_target(const db_result* res, double target_log10,
                                            int64_t* out_round);
DB_API db_status db_result_write_csv(const db_result* res, const char* path);
DB_API void db_result_free(db_result* res);

/* Parse a trace CSV back into a result (trace only, no cost summary). */
DB_API db_status db_trace_read_csv(const char* path, db_result** out);

#ifdef __cplusplus
}
#endif

#endif /* DANEBENCH_H */
