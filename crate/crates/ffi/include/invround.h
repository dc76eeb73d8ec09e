#ifndef INVROUND_H
#define INVROUND_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum InvAlgorithm {
  INV_ALGORITHM_AUTO = 0,
  INV_ALGORITHM_SJRP = 1,
  INV_ALGORITHM_IRP = 2,
} InvAlgorithm;

typedef enum InvLp {
  INV_LP_AUTO = 0,
  INV_LP_CONFIG = 1,
  INV_LP_LOVASZ = 2,
} InvLp;

/**
 * Result codes.
 */
typedef enum InvStatus {
  INV_STATUS_OK = 0,
  INV_STATUS_VERIFICATION_FAILED = 1,
  INV_STATUS_USAGE = 2,
  INV_STATUS_CAPACITY = 3,
  INV_STATUS_MALFORMED = 4,
  INV_STATUS_INFEASIBLE = 5,
  INV_STATUS_NON_TERMINATION = 6,
  INV_STATUS_NULL_POINTER = 7,
  INV_STATUS_INTERNAL = 8,
} InvStatus;

/**
 * A parsed cover or inventory instance.
 */
typedef struct InvInstance InvInstance;

/**
 * A solved schedule with its cost breakdown.
 */
typedef struct InvSolution InvSolution;

/**
 * Solver options. `k_constant == 0` and `alpha_den == 0` select defaults.
 */
typedef struct InvSolveOptions {
  enum InvAlgorithm algorithm;
  enum InvLp lp;
  uint64_t seed;
  uint32_t k_constant;
  int64_t alpha_num;
  int64_t alpha_den;
} InvSolveOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options: automatic algorithm and relaxation, seed 0.
 */
struct InvSolveOptions inv_default_options(void);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *inv_last_error(void);

/**
 * Parses an instance from a NUL-terminated JSON document.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum InvStatus inv_instance_from_json(const char *json, struct InvInstance **out);

/**
 * # Safety
 * `inst` must come from [`inv_instance_from_json`] and not be freed twice.
 */
void inv_instance_free(struct InvInstance *inst);

/**
 * Solves an instance. `opts` may be null for defaults.
 *
 * # Safety
 * `inst` must be a live instance handle; `opts` null or valid; `out` writable.
 */
enum InvStatus inv_solve(const struct InvInstance *inst,
                         const struct InvSolveOptions *opts,
                         struct InvSolution **out);

/**
 * # Safety
 * `sol` must come from [`inv_solve`] and not be freed twice.
 */
void inv_solution_free(struct InvSolution *sol);

/**
 * Total cost as a double (the JSON form carries the exact value).
 *
 * # Safety
 * `sol` must be a live handle; `out` writable.
 */
enum InvStatus inv_solution_cost(const struct InvSolution *sol, double *out);

/**
 * Number of days with a nonempty order.
 *
 * # Safety
 * `sol` must be a live handle; `out` writable.
 */
enum InvStatus inv_solution_order_days(const struct InvSolution *sol, size_t *out);

/**
 * Serializes a solution. Release the string with [`inv_string_free`].
 *
 * # Safety
 * `sol` must be a live handle; `out` writable.
 */
enum InvStatus inv_solution_to_json(const struct InvSolution *sol, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void inv_string_free(char *s);

/**
 * Checks a solution document against an instance document. Returns
 * `Ok` when clean and `VerificationFailed` otherwise, with the violations
 * in [`inv_last_error`].
 *
 * # Safety
 * Both arguments must be valid C strings.
 */
enum InvStatus inv_verify_json(const char *instance_json, const char *solution_json);

/**
 * Library version as a static C string.
 */
const char *inv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INVROUND_H */
