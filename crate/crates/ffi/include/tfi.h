#ifndef TFI_H
#define TFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Input format for [`tfi_config_parse`].
 */
typedef enum TfiFormat {
  TFI_FORMAT_TOML = 0,
  TFI_FORMAT_JSON = 1,
} TfiFormat;

/**
 * Result codes shared by every entry point.
 */
typedef enum TfiStatus {
  TFI_STATUS_OK = 0,
  TFI_STATUS_NULL_POINTER = 1,
  TFI_STATUS_INVALID_UTF8 = 2,
  TFI_STATUS_INVALID_ARGUMENT = 3,
  TFI_STATUS_CONFIG = 4,
  TFI_STATUS_NUMERICAL = 5,
  TFI_STATUS_IO = 6,
  TFI_STATUS_OUT_OF_RANGE = 7,
  TFI_STATUS_PANIC = 8,
} TfiStatus;

/**
 * Parsed and validated scenario file.
 */
typedef struct TfiConfig TfiConfig;

/**
 * Validated density operator.
 */
typedef struct TfiDensity TfiDensity;

/**
 * Markov jump process generator.
 */
typedef struct TfiMarkov TfiMarkov;

/**
 * Outcome of running a config: per-scenario summaries and CSV series.
 */
typedef struct TfiRun TfiRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or NULL. The pointer stays
 * valid until the next call into the library on the same thread.
 */
const char *tfi_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library, freed once.
 */
void tfi_string_free(char *s);

/**
 * Parses and validates a scenario document.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum TfiStatus tfi_config_parse(const char *text, enum TfiFormat format, struct TfiConfig **out);

/**
 * # Safety
 * `config` must be NULL or a handle from [`tfi_config_parse`], freed once.
 */
void tfi_config_free(struct TfiConfig *config);

/**
 * # Safety
 * `config` must be a live handle; `out` must be writable.
 */
enum TfiStatus tfi_config_scenario_count(const struct TfiConfig *config, size_t *out);

/**
 * Runs every scenario of `config` on `jobs` worker threads (0 = one per
 * core). `seed` replaces every scenario seed when `override_seed` is
 * non-zero. Scenario failures are recorded in the run, not returned here.
 *
 * # Safety
 * `config` must be a live handle; `out` must be writable.
 */
enum TfiStatus tfi_run(const struct TfiConfig *config,
                       size_t jobs,
                       int32_t override_seed,
                       uint64_t seed,
                       struct TfiRun **out);

/**
 * # Safety
 * `run` must be NULL or a handle from [`tfi_run`], freed once.
 */
void tfi_run_free(struct TfiRun *run);

/**
 * 0 when every check passed, 1 on a bound violation, 2 on a scenario error.
 *
 * # Safety
 * `run` must be a live handle; `out` must be writable.
 */
enum TfiStatus tfi_run_exit_status(const struct TfiRun *run, int32_t *out);

/**
 * Number of scenarios in the run.
 *
 * # Safety
 * `run` must be a live handle; `out` must be writable.
 */
enum TfiStatus tfi_run_scenario_count(const struct TfiRun *run, size_t *out);

/**
 * Whether scenario `index` passed every check (1) or not (0).
 *
 * # Safety
 * `run` must be a live handle; `out` must be writable.
 */
enum TfiStatus tfi_run_scenario_passed(const struct TfiRun *run, size_t index, int32_t *out);

/**
 * The summary JSON document (same schema as `summary.json`).
 *
 * # Safety
 * `run` must be a live handle; `out` must be writable. Free the result
 * with [`tfi_string_free`].
 */
enum TfiStatus tfi_run_summary_json(const struct TfiRun *run, char **out);

/**
 * The CSV time series of scenario `index`.
 *
 * # Safety
 * `run` must be a live handle; `out` must be writable. Free the result
 * with [`tfi_string_free`].
 */
enum TfiStatus tfi_run_scenario_csv(const struct TfiRun *run, size_t index, char **out);

/**
 * Temporal Fisher information `Σᵢ ṗᵢ²/pᵢ` of a probability vector.
 *
 * # Safety
 * `p` and `dp_dt` must point to `n` readable doubles; `out` must be writable.
 */
enum TfiStatus tfi_temporal_fisher(const double *p, const double *dp_dt, size_t n, double *out);

/**
 * Bhattacharyya arccos distance `arccos Σ √(pᵢqᵢ)`.
 *
 * # Safety
 * `p` and `q` must point to `n` readable doubles; `out` must be writable.
 */
enum TfiStatus tfi_bhattacharyya_arccos(const double *p, const double *q, size_t n, double *out);

/**
 * Creates a Markov model from an `n×n` row-major generator (`W[i][j]` is
 * the rate `j → i`; columns sum to zero).
 *
 * # Safety
 * `generator` must point to `n*n` readable doubles; `out` must be writable.
 */
enum TfiStatus tfi_markov_new(const double *generator, size_t n, struct TfiMarkov **out);

/**
 * # Safety
 * `model` must be NULL or a handle from [`tfi_markov_new`], freed once.
 */
void tfi_markov_free(struct TfiMarkov *model);

/**
 * Entropy production, pseudo-entropy production and dynamical activity
 * rates of `model` at distribution `p`.
 *
 * # Safety
 * `model` must be a live handle, `p` must point to `n` readable doubles
 * and the three output pointers must be writable.
 */
enum TfiStatus tfi_markov_rates(const struct TfiMarkov *model,
                                const double *p,
                                size_t n,
                                double *entropy,
                                double *pseudo_entropy,
                                double *activity);

/**
 * Creates a density operator from `dim×dim` row-major real and imaginary
 * parts. `imag` may be NULL for a real matrix.
 *
 * # Safety
 * `real` (and `imag` if non-NULL) must point to `dim*dim` readable
 * doubles; `out` must be writable.
 */
enum TfiStatus tfi_density_new(const double *real,
                               const double *imag,
                               size_t dim,
                               struct TfiDensity **out);

/**
 * # Safety
 * `rho` must be NULL or a handle from [`tfi_density_new`], freed once.
 */
void tfi_density_free(struct TfiDensity *rho);

/**
 * `Tr ρ²`.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum TfiStatus tfi_density_purity(const struct TfiDensity *rho, double *out);

/**
 * Bures angle `arccos √F(ρ, σ)`.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum TfiStatus tfi_bures_angle(const struct TfiDensity *rho,
                               const struct TfiDensity *sigma,
                               double *out);

/**
 * Distance between the sorted spectra of `ρ` and `σ`, invariant under
 * unitary conjugation of either argument.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum TfiStatus tfi_residual_bures(const struct TfiDensity *rho,
                                  const struct TfiDensity *sigma,
                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TFI_H */
