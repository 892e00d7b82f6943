/* hdbench — half-distortion robustness benchmark for image classifiers.
 *
 * C API of the shared library. All functions return hdb_status; every
 * other result travels through out-parameters or files. Handles are opaque
 * and must be released with the matching destroy function. On any non-OK
 * status, hdb_last_error() returns a message describing what went wrong
 * (thread-local, valid until the next API call on the same thread).
 */
#ifndef HDBENCH_H
#define HDBENCH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define HDBENCH_API_VERSION 1

/* Status codes double as CLI exit codes. */
typedef enum hdb_status {
  HDB_OK = 0,
  HDB_ERROR = 1,            /* invalid argument, I/O failure */
  HDB_ERROR_CONFIG = 2,     /* bad configuration key/value */
  HDB_ERROR_MODEL_DATA = 3, /* model load / dataset problems */
  HDB_ERROR_FIT = 4         /* curve fit failed */
} hdb_status;

typedef struct hdb_config hdb_config;
typedef struct hdb_report hdb_report;

const char* hdb_version(void);
const char* hdb_last_error(void);

/* Configuration: starts from documented defaults; key=value files and
 * individual overrides share one validated key set. Unknown keys are
 * rejected by name. */
hdb_status hdb_config_create(hdb_config** out);
hdb_status hdb_config_load_file(hdb_config* cfg, const char* path);
hdb_status hdb_config_load_text(hdb_config* cfg, const char* text);
hdb_status hdb_config_set(hdb_config* cfg, const char* key, const char* value);
/* Writes the current value of `key` into buf (NUL-terminated). */
hdb_status hdb_config_get(const hdb_config* cfg, const char* key, char* buf,
                          size_t buflen);
void hdb_config_destroy(hdb_config* cfg);

/* Trains the model the config describes and writes a checkpoint. */
hdb_status hdb_train(const hdb_config* cfg, const char* checkpoint_path);

/* Runs one attack ("bp", "pgd" or "boundary") over the configured test set
 * and writes records.csv plus trajectories under out_dir. */
hdb_status hdb_attack(const hdb_config* cfg, const char* attack,
                      const char* out_dir);

/* Full benchmark: model, both attacks, curve fits, audits. */
hdb_status hdb_bench(const hdb_config* cfg, hdb_report** out);
hdb_status hdb_report_write(const hdb_report* report, const char* out_dir);
/* Deterministic payload as JSON; free with hdb_free. */
hdb_status hdb_report_payload(const hdb_report* report, char** out_json);
void hdb_report_destroy(hdb_report* report);

/* Plot data (scatter + budget curves) from previously written reports. */
hdb_status hdb_plot_data(const char* const* report_json_paths, size_t count,
                         const char* out_dir);

void hdb_free(char* p);

#ifdef __cplusplus
}
#endif

#endif /* HDBENCH_H */
