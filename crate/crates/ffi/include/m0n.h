#ifndef M0N_H
#define M0N_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which series of a table to read.
 */
typedef enum M0nSeries {
  M0N_SERIES_QPLUS = 0,
  M0N_SERIES_Q = 1,
  M0N_SERIES_P = 2,
} M0nSeries;

typedef enum M0nStatus {
  M0N_STATUS_OK = 0,
  M0N_STATUS_NULL_POINTER = 1,
  M0N_STATUS_INVALID_ARGUMENT = 2,
  M0N_STATUS_OUT_OF_RANGE = 3,
  /**
   * The engine contradicted itself (non-integral value, inexact division, mismatch).
   */
  M0N_STATUS_INCONSISTENCY = 4,
  M0N_STATUS_IO = 5,
  M0N_STATUS_PANIC = 6,
} M0nStatus;

/**
 * 𝔮⁺, 𝔮 and 𝔭 under fixed caps.
 */
typedef struct M0nInvSeries M0nInvSeries;

/**
 * Q⁺, Q and P under fixed caps.
 */
typedef struct M0nRepTable M0nRepTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Computes the representation tables for n ≤ cap_n and t-degree ≤ cap_k.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum M0nStatus m0n_rep_table_new(uint32_t cap_n, uint32_t cap_k, struct M0nRepTable **out);

/**
 * # Safety
 * `table` must come from `m0n_rep_table_new` and not be freed twice. Null is ignored.
 */
void m0n_rep_table_free(struct M0nRepTable *table);

/**
 * JSON for the degree-n part of a series, in the h basis:
 * `{"basis","cap_n","cap_k","terms":[{"lambda","t","c"}]}`.
 *
 * # Safety
 * `table` must be a live handle; `out` must be writable. Free the result
 * with `m0n_string_free`.
 */
enum M0nStatus m0n_rep_table_json(const struct M0nRepTable *table,
                                  enum M0nSeries series,
                                  uint32_t n,
                                  char **out);

/**
 * Multiplicity of the irreducible s_λ·t^k in a series, λ given by its parts
 * (nonincreasing) and n = |λ|.
 *
 * # Safety
 * `table` must be a live handle, `parts` must point to `len` values, and
 * `out` must be writable.
 */
enum M0nStatus m0n_rep_table_mult(const struct M0nRepTable *table,
                                  enum M0nSeries series,
                                  const uint32_t *parts,
                                  size_t len,
                                  uint32_t k,
                                  int64_t *out);

/**
 * Computes 𝔮⁺, 𝔮, 𝔭 for n ≤ cap_n and t-degree ≤ cap_k.
 *
 * # Safety
 * `out` must be writable.
 */
enum M0nStatus m0n_inv_series_new(uint32_t cap_n, uint32_t cap_k, struct M0nInvSeries **out);

/**
 * # Safety
 * `series` must come from `m0n_inv_series_new` and not be freed twice. Null is ignored.
 */
void m0n_inv_series_free(struct M0nInvSeries *series);

/**
 * The coefficient of qⁿtᵏ as a decimal string (values outgrow 64 bits quickly).
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable. Free the result
 * with `m0n_string_free`.
 */
enum M0nStatus m0n_inv_series_coeff(const struct M0nInvSeries *series,
                                    enum M0nSeries which,
                                    uint32_t n,
                                    uint32_t k,
                                    char **out);

/**
 * Whether a_k² ≥ a_{k−1}a_{k+1} at every interior k.
 *
 * # Safety
 * `values` must point to `len` values; `out` must be writable.
 */
enum M0nStatus m0n_log_concave(const int64_t *values, size_t len, bool *out);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void m0n_string_free(char *s);

/**
 * The message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *m0n_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *m0n_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* M0N_H */
