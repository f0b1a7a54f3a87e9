#ifndef ALC_H
#define ALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes. Non-zero values mirror the CLI exit codes where they overlap.
 */
typedef enum AlcStatus {
  ALC_STATUS_OK = 0,
  ALC_STATUS_NULL_POINTER = 1,
  ALC_STATUS_INPUT = 2,
  ALC_STATUS_CONSTRAINT = 3,
  ALC_STATUS_INTERNAL = 4,
  ALC_STATUS_PANIC = 5,
} AlcStatus;

/*
 Validated correlation matrix.
 */
typedef struct AlcCorrelation AlcCorrelation;

/*
 Outcome of one clustering run.
 */
typedef struct AlcResult AlcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Builds a handle from an `n x n` row-major matrix. Entries must form a
 symmetric matrix in `[-1, 1]` with a unit diagonal.

 # Safety
 `entries` must point to `n * n` readable doubles; `out` must be writable.
 */
enum AlcStatus alc_correlation_from_matrix(const double *entries,
                                           size_t n,
                                           struct AlcCorrelation **out);

/*
 Estimates Pearson correlations between the rows of a `rows x cols`
 row-major series matrix.

 # Safety
 `values` must point to `rows * cols` readable doubles; `out` must be writable.
 */
enum AlcStatus alc_correlation_from_series(const double *values,
                                           size_t rows,
                                           size_t cols,
                                           struct AlcCorrelation **out);

/*
 Number of objects, or 0 for a null handle.

 # Safety
 `corr` must be null or a live handle.
 */
size_t alc_correlation_size(const struct AlcCorrelation *corr);

/*
 # Safety
 `corr` must be null or a handle not yet freed.
 */
void alc_correlation_free(struct AlcCorrelation *corr);

/*
 Runs the clustering engine. Initiators are drawn from `seed` unless
 `deterministic` is set.

 # Safety
 `corr` must be a live handle and `out` writable.
 */
enum AlcStatus alc_cluster(const struct AlcCorrelation *corr,
                           uint64_t seed,
                           bool deterministic,
                           struct AlcResult **out);

/*
 Number of clustered objects, or 0 for a null handle.

 # Safety
 `result` must be null or a live handle.
 */
size_t alc_result_len(const struct AlcResult *result);

/*
 # Safety
 `result` must be null or a live handle.
 */
size_t alc_result_num_clusters(const struct AlcResult *result);

/*
 Copies canonical labels (first-occurrence order, starting at 0) into
 `out`, which must hold exactly `alc_result_len` entries.

 # Safety
 `result` must be a live handle and `out` must point to `len` writable slots.
 */
enum AlcStatus alc_result_labels(const struct AlcResult *result, size_t *out, size_t len);

/*
 Final log-likelihood, or NaN for a null handle.

 # Safety
 `result` must be null or a live handle.
 */
double alc_result_likelihood(const struct AlcResult *result);

/*
 # Safety
 `result` must be null or a live handle.
 */
size_t alc_result_merges(const struct AlcResult *result);

/*
 True when a near-perfectly correlated cluster had its coupling clamped.

 # Safety
 `result` must be null or a live handle.
 */
bool alc_result_clamped(const struct AlcResult *result);

/*
 # Safety
 `result` must be null or a handle not yet freed.
 */
void alc_result_free(struct AlcResult *result);

/*
 Adjusted Rand index between two labelings of `n` objects.

 # Safety
 `a` and `b` must point to `n` readable labels; `out` must be writable.
 */
enum AlcStatus alc_adjusted_rand_index(const size_t *a, const size_t *b, size_t n, double *out);

/*
 Copies the calling thread's last error message into `buf` as a
 nul-terminated string, truncating to fit. Returns the buffer size needed
 for the whole message, or 0 when there is no error. `buf` may be null to
 query the size.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
size_t alc_last_error_message(char *buf, size_t len);

/*
 Library version as a static nul-terminated string.
 */
const char *alc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALC_H */
