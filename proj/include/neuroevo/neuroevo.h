/*
 * C interface of the neuroevo library.
 *
 * All functions return an ne_status; on failure a description of the last
 * error on the calling thread is available from ne_last_error(). Handles are
 * opaque and owned by the caller, who releases them with the matching
 * *_free function. Passing NULL to a *_free function is a no-op.
 */
#ifndef NEUROEVO_H
#define NEUROEVO_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(NEUROEVO_BUILDING)
#    define NE_API __declspec(dllexport)
#  else
#    define NE_API __declspec(dllimport)
#  endif
#else
#  define NE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ne_status {
    NE_OK = 0,
    NE_ERR_INVALID_ARGUMENT = 1,
    NE_ERR_CONFIG = 2,
    NE_ERR_DATA = 3,
    NE_ERR_BUDGET = 4,
    NE_ERR_IO = 5,
    NE_ERR_RUNTIME = 6
} ne_status;

typedef struct ne_config ne_config;
typedef struct ne_report ne_report;

NE_API const char* ne_version(void);
NE_API const char* ne_status_name(ne_status status);
/* Message of the most recent failure on this thread, "" if none. */
NE_API const char* ne_last_error(void);

/* Experiment configuration (flat `key = value` text). */
NE_API ne_status ne_config_load(const char* path, ne_config** out);
NE_API ne_status ne_config_parse(const char* text, const char* base_dir, ne_config** out);
NE_API ne_status ne_config_set(ne_config* config, const char* key, const char* value);
NE_API void ne_config_free(ne_config* config);

/* Runs the configured experiment. When out_dir is non-NULL the report, split
 * manifest and best genotype are written there. `out` may be NULL. */
NE_API ne_status ne_run(const ne_config* config, const char* out_dir, ne_report** out);

NE_API ne_status ne_report_load(const char* path, ne_report** out);
NE_API ne_status ne_report_save(const ne_report* report, const char* path, int include_timing);
NE_API ne_status ne_report_accuracy(const ne_report* report, double* train, double* validation, double* test);
NE_API ne_status ne_report_fes(const ne_report* report, size_t* charged, size_t* budget);
NE_API ne_status ne_report_generations(const ne_report* report, size_t* count);
NE_API ne_status ne_report_wall_clock(const ne_report* report, double* seconds);
NE_API void ne_report_free(ne_report* report);

/* Per-generation accuracy-vs-FE series as tab-separated files. */
NE_API ne_status ne_emit_curves(const ne_report* report, const char* out_dir);

/* Median/variance table over every *.report.json in in_dir. */
NE_API ne_status ne_aggregate_dir(const char* in_dir, const char* out_file);

NE_API ne_status ne_genotype_len(size_t n_inputs, size_t n_hidden, size_t n_outputs, size_t* out);

#ifdef __cplusplus
}
#endif

#endif /* NEUROEVO_H */
