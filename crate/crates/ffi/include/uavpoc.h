#ifndef UAVPOC_H
#define UAVPOC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum UavpocStatus {
  UAVPOC_STATUS_OK = 0,
  UAVPOC_STATUS_NULL_POINTER = 1,
  UAVPOC_STATUS_INVALID_ARGUMENT = 2,
  UAVPOC_STATUS_INVALID_UTF8 = 3,
  UAVPOC_STATUS_PARSE = 4,
  UAVPOC_STATUS_IO = 5,
  UAVPOC_STATUS_NOT_CONVERGED = 6,
  UAVPOC_STATUS_OUT_OF_RANGE = 7,
  UAVPOC_STATUS_PANIC = 8,
} UavpocStatus;

/**
 * Allocation scheme of a run record.
 */
typedef enum UavpocScheme {
  UAVPOC_SCHEME_FUZZY = 0,
  UAVPOC_SCHEME_CRISP = 1,
  UAVPOC_SCHEME_RANDOM = 2,
} UavpocScheme;

/**
 * Opaque scenario configuration.
 */
typedef struct UavpocConfig UavpocConfig;

/**
 * Opaque experiment result.
 */
typedef struct UavpocExperiment UavpocExperiment;

/**
 * One run of one scheme on one (topology, trial) cell.
 */
typedef struct UavpocRunRecord {
  enum UavpocScheme scheme;
  size_t n;
  size_t topo;
  size_t trial;
  size_t iters;
  bool converged;
  double rate;
  double throughput;
  size_t active_links;
  double qos_pass;
} UavpocRunRecord;

/**
 * Triangular fuzzy number `(center, left, right)`.
 */
typedef struct UavpocTfn {
  double center;
  double left;
  double right;
} UavpocTfn;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next failing call on the same thread.
 */
const char *uavpoc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void uavpoc_string_free(char *s);

/**
 * Default scenario.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum UavpocStatus uavpoc_config_default(struct UavpocConfig **out_config);

/**
 * Scenario from a JSON document; missing keys take defaults, unknown keys are rejected.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_config` a valid pointer.
 */
enum UavpocStatus uavpoc_config_from_json(const char *json, struct UavpocConfig **out_config);

/**
 * Scenario as JSON; free the result with [`uavpoc_string_free`].
 *
 * # Safety
 * `config` must be a live handle and `out_json` a valid pointer.
 */
enum UavpocStatus uavpoc_config_to_json(const struct UavpocConfig *config, char **out_json);

/**
 * Sets network size, topology count, trials per topology and master seed.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum UavpocStatus uavpoc_config_set_scale(struct UavpocConfig *config,
                                          size_t n_nodes,
                                          size_t topologies,
                                          size_t trials,
                                          uint64_t master_seed);

/**
 * Releases a configuration. Null is ignored.
 *
 * # Safety
 * `config` must come from this library and not have been freed.
 */
void uavpoc_config_free(struct UavpocConfig *config);

/**
 * Runs every configured scheme over all (topology, trial) cells.
 *
 * # Safety
 * `config` must be a live handle and `out_experiment` a valid pointer.
 */
enum UavpocStatus uavpoc_experiment_run(const struct UavpocConfig *config,
                                        struct UavpocExperiment **out_experiment);

/**
 * Number of completed runs.
 *
 * # Safety
 * `experiment` must be a live handle and `out_count` a valid pointer.
 */
enum UavpocStatus uavpoc_experiment_record_count(const struct UavpocExperiment *experiment,
                                                 size_t *out_count);

/**
 * Number of runs that returned an error.
 *
 * # Safety
 * `experiment` must be a live handle and `out_count` a valid pointer.
 */
enum UavpocStatus uavpoc_experiment_failure_count(const struct UavpocExperiment *experiment,
                                                  size_t *out_count);

/**
 * Copies record `index` in canonical order (topology, trial, scheme).
 *
 * # Safety
 * `experiment` must be a live handle and `out_record` a valid pointer.
 */
enum UavpocStatus uavpoc_experiment_record(const struct UavpocExperiment *experiment,
                                           size_t index,
                                           struct UavpocRunRecord *out_record);

/**
 * Per-scheme, per-N summary with the configuration, as JSON.
 * Free the result with [`uavpoc_string_free`].
 *
 * # Safety
 * Both handles must be live and `out_json` a valid pointer.
 */
enum UavpocStatus uavpoc_experiment_summary_json(const struct UavpocExperiment *experiment,
                                                 const struct UavpocConfig *config,
                                                 char **out_json);

/**
 * Writes `runs.csv` and `summary.json` into `dir`, creating it if needed.
 *
 * # Safety
 * Both handles must be live and `dir` a NUL-terminated path.
 */
enum UavpocStatus uavpoc_experiment_write(const struct UavpocExperiment *experiment,
                                          const struct UavpocConfig *config,
                                          const char *dir);

/**
 * Releases an experiment. Null is ignored.
 *
 * # Safety
 * `experiment` must come from this library and not have been freed.
 */
void uavpoc_experiment_free(struct UavpocExperiment *experiment);

/**
 * Satisfaction degree `SF(a < b)` when `greater` is false, `SF(a > b)` otherwise.
 *
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum UavpocStatus uavpoc_satisfaction(struct UavpocTfn a,
                                      struct UavpocTfn b,
                                      bool greater,
                                      double *out_value);

/**
 * Priority weights from relative indices (largest equal to 1): builds the
 * preference relation with `zeta` and runs least deviation to `eta` from
 * uniform weights. Writes `len` weights to `out_weights`.
 *
 * # Safety
 * `indices` must point to `len` readable values and `out_weights` to `len` writable ones.
 */
enum UavpocStatus uavpoc_priority_vector(const double *indices,
                                         size_t len,
                                         double zeta,
                                         double eta,
                                         double *out_weights);

/**
 * Interference factor for channel separation `delta` at `distance` metres:
 * 0 when orthogonal or out of range, infinite when co-located.
 */
double uavpoc_interference_factor(size_t delta, double distance);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UAVPOC_H */
