/*
 * C interface to the adaptive piecewise kernel approximation library.
 *
 * All objects are opaque handles created by *_new / *_from_* functions and
 * released by the matching *_free. Every fallible call returns an
 * adaptseg_status; on failure a message for the calling thread is available
 * from adaptseg_last_error() until the next failing call on that thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with adaptseg_string_free().
 */
#ifndef ADAPTSEG_ADAPTSEG_H
#define ADAPTSEG_ADAPTSEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ADAPTSEG_BUILDING_LIBRARY)
#    define ADAPTSEG_API __declspec(dllexport)
#  else
#    define ADAPTSEG_API __declspec(dllimport)
#  endif
#else
#  define ADAPTSEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum adaptseg_status {
  ADAPTSEG_OK = 0,
  ADAPTSEG_ERR_INVALID_ARGUMENT = 1,
  ADAPTSEG_ERR_CONFIG = 2,
  ADAPTSEG_ERR_NUMERIC = 3,
  ADAPTSEG_ERR_IO = 4,
  ADAPTSEG_ERR_INTERNAL = 5
} adaptseg_status;

typedef struct adaptseg_config adaptseg_config;
typedef struct adaptseg_dataset adaptseg_dataset;
typedef struct adaptseg_result adaptseg_result;

ADAPTSEG_API const char* adaptseg_version(void);
ADAPTSEG_API const char* adaptseg_last_error(void);
ADAPTSEG_API const char* adaptseg_status_name(adaptseg_status status);
ADAPTSEG_API void adaptseg_string_free(char* s);

/* Configuration. Keys and values as in the JSON config file, e.g.
 * ("delta", "0.35"), ("blowup_mode", "single-pass"), ("skip_phase3", "true"). */
ADAPTSEG_API adaptseg_status adaptseg_config_new(adaptseg_config** out);
ADAPTSEG_API void adaptseg_config_free(adaptseg_config* cfg);
ADAPTSEG_API adaptseg_status adaptseg_config_set(adaptseg_config* cfg, const char* key, const char* value);
ADAPTSEG_API adaptseg_status adaptseg_config_merge_json(adaptseg_config* cfg, const char* json_text);
ADAPTSEG_API adaptseg_status adaptseg_config_load_file(adaptseg_config* cfg, const char* path);
ADAPTSEG_API adaptseg_status adaptseg_config_to_json(const adaptseg_config* cfg, char** out);

/* Datasets. A benchmark dataset ("f1".."f4") is synthesized from the site
 * options in cfg and carries its ground truth; CSV and array datasets do not. */
ADAPTSEG_API adaptseg_status adaptseg_dataset_from_case(const char* case_name, const adaptseg_config* cfg,
                                                        adaptseg_dataset** out);
ADAPTSEG_API adaptseg_status adaptseg_dataset_from_csv(const char* path, adaptseg_dataset** out);
ADAPTSEG_API adaptseg_status adaptseg_dataset_from_arrays(const double* x, const double* y, const double* f,
                                                          size_t count, adaptseg_dataset** out);
ADAPTSEG_API void adaptseg_dataset_free(adaptseg_dataset* data);
ADAPTSEG_API size_t adaptseg_dataset_size(const adaptseg_dataset* data);
/* x,y,f,true_class CSV; fails for datasets without ground truth. */
ADAPTSEG_API adaptseg_status adaptseg_dataset_case_csv(const adaptseg_dataset* data, char** out);

/* Runs the whole pipeline. The result keeps its own copy of the dataset. */
ADAPTSEG_API adaptseg_status adaptseg_run(const adaptseg_config* cfg, const adaptseg_dataset* data,
                                          adaptseg_result** out);
ADAPTSEG_API void adaptseg_result_free(adaptseg_result* res);
ADAPTSEG_API int adaptseg_result_class_count(const adaptseg_result* res);
/* Copies final labels (0 = unlabeled) for the first `count` sites. */
ADAPTSEG_API adaptseg_status adaptseg_result_labels(const adaptseg_result* res, int* labels, size_t count);
/* Artifact names: "report", "classes", "sigma", "seeds", "blowup-trace",
 * "grid-errors". */
ADAPTSEG_API adaptseg_status adaptseg_result_artifact(const adaptseg_result* res, const char* name, char** out);
ADAPTSEG_API adaptseg_status adaptseg_result_write(const adaptseg_result* res, const char* name, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* ADAPTSEG_ADAPTSEG_H */
