/* C interface to the wtangle entanglement toolkit. */

#ifndef WTANGLE_H
#define WTANGLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of one FFI call.
 */
typedef enum WtangleStatus {
  /**
   * Success.
   */
  WTANGLE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  WTANGLE_STATUS_NULL_POINTER = 1,
  /**
   * The input failed validation (shape, trace, positivity, JSON, ...).
   */
  WTANGLE_STATUS_INVALID_INPUT = 2,
  /**
   * The zero-coherence separability hypothesis does not hold.
   */
  WTANGLE_STATUS_HYPOTHESIS_VIOLATED = 3,
  /**
   * The numerical backend failed or produced unusable output.
   */
  WTANGLE_STATUS_NUMERICAL_FAILURE = 4,
  /**
   * A panic was caught at the boundary; state may be fine, result is not.
   */
  WTANGLE_STATUS_INTERNAL = 5,
} WtangleStatus;

/**
 * Opaque handle around one subspace state.
 */
typedef struct WtangleState WtangleState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing this thread's most recent failure. Valid until the
 * next failing call on the same thread; never null.
 */
const char *wtangle_last_error_message(void);

/**
 * Library version as a static string; do not free.
 */
const char *wtangle_version(void);

/**
 * Release a string allocated by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void wtangle_string_free(char *s);

/**
 * Release a state handle.
 *
 * # Safety
 * `state` must come from this library and not have been freed already.
 */
void wtangle_state_free(struct WtangleState *state);

/**
 * Permutation-symmetric pure state with vacuum amplitude a = a_re + i a_im.
 *
 * # Safety
 * `out` must be a valid pointer; on `Ok` it receives a new handle.
 */
enum WtangleStatus wtangle_state_symmetric(uint32_t n,
                                           double a_re,
                                           double a_im,
                                           struct WtangleState **out);

/**
 * Pure single-excitation state from `len` complex amplitudes. `k_im` may be
 * null for real amplitudes.
 *
 * # Safety
 * `k_re` (and `k_im` when non-null) must point to `len` doubles; `out` must
 * be valid.
 */
enum WtangleStatus wtangle_state_asymmetric(const double *k_re,
                                            const double *k_im,
                                            size_t len,
                                            struct WtangleState **out);

/**
 * Parse a state from its JSON form.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be valid.
 */
enum WtangleStatus wtangle_state_from_json(const char *json, struct WtangleState **out);

/**
 * Serialize a state to JSON; free the result with `wtangle_string_free`.
 *
 * # Safety
 * `state` must be a live handle; `out_json` must be valid.
 */
enum WtangleStatus wtangle_state_to_json(const struct WtangleState *state, char **out_json);

/**
 * Qubit count of a state; 0 if the handle is null.
 *
 * # Safety
 * `state` must be a live handle or null.
 */
uint32_t wtangle_state_qubits(const struct WtangleState *state);

/**
 * Full measure report as JSON, both sums normalized by `z`.
 *
 * # Safety
 * `state` must be a live handle; `out_json` must be valid.
 */
enum WtangleStatus wtangle_measure_json(const struct WtangleState *state,
                                        double z,
                                        double tol,
                                        size_t cap,
                                        char **out_json);

/**
 * Z-normalized sum of squared pair concurrences.
 *
 * # Safety
 * `state` must be a live handle; `out` must be valid.
 */
enum WtangleStatus wtangle_sum_two_tangles(const struct WtangleState *state,
                                           double z,
                                           double tol,
                                           double *out);

/**
 * Z-normalized sum of pi-tangles over all pivots.
 *
 * # Safety
 * `state` must be a live handle; `out` must be valid.
 */
enum WtangleStatus wtangle_sum_pi_tangles(const struct WtangleState *state,
                                          double z,
                                          double tol,
                                          size_t cap,
                                          double *out);

/**
 * Pi-tangle of one pivot qubit.
 *
 * # Safety
 * `state` must be a live handle; `out` must be valid.
 */
enum WtangleStatus wtangle_pi_tangle(const struct WtangleState *state,
                                     uint32_t pivot,
                                     double tol,
                                     size_t cap,
                                     double *out);

/**
 * Separability certificate as JSON. Fails with `HypothesisViolated` when
 * the state carries excitation-excitation coherences above `tol`.
 *
 * # Safety
 * `state` must be a live handle; `out_json` must be valid.
 */
enum WtangleStatus wtangle_certify_json(const struct WtangleState *state,
                                        double tol,
                                        char **out_json);

/**
 * Run the randomized separability audit. On `Ok`, `out_passed` and
 * `out_total` receive the sample counts; the full JSON report lands in
 * `out_json` when that pointer is non-null.
 *
 * # Safety
 * `ns` must point to `ns_len` u32 values; `out_passed` and `out_total`
 * must be valid; `out_json` may be null.
 */
enum WtangleStatus wtangle_audit(const uint32_t *ns,
                                 size_t ns_len,
                                 uint32_t samples_per_n,
                                 uint64_t seed,
                                 double tol,
                                 uint64_t *out_passed,
                                 uint64_t *out_total,
                                 char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WTANGLE_H */
