#ifndef AODE_H
#define AODE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum AodeStatus {
  AODE_STATUS_OK = 0,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  AODE_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Parse errors, reducible equations, points off the curve and similar.
   */
  AODE_STATUS_VALIDATION_FAILED = 2,
  /**
   * An extension degree cap or precision limit was hit.
   */
  AODE_STATUS_RESOURCE_LIMIT = 3,
  /**
   * Unexpected internal failure.
   */
  AODE_STATUS_INTERNAL = 4,
} AodeStatus;

/**
 * A parsed and validated equation `F(y, y') = 0`.
 */
typedef struct AodeEquation AodeEquation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates `ode`, a polynomial in `y` and `y'`. On success
 * `*out` receives a handle to release with [`aode_equation_free`].
 *
 * # Safety
 * `ode` must be a nul-terminated string and `out` a valid pointer.
 */
enum AodeStatus aode_equation_new(const char *ode, struct AodeEquation **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `eq` must come from [`aode_equation_new`] and not be used afterwards.
 */
void aode_equation_free(struct AodeEquation *eq);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void aode_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *aode_last_error(void);

/**
 * `2(deg_y F - 1) deg_y' F + 1`.
 *
 * # Safety
 * `eq` must be a live handle and `out` a valid pointer.
 */
enum AodeStatus aode_default_bound(const struct AodeEquation *eq, uintptr_t *out);

/**
 * Solutions with initial tuple `at` (text such as `"1, sqrt(2)"`) as a
 * JSON array of solution records. `order` 0 selects twice the
 * multiplicity of the point.
 *
 * # Safety
 * Pointers must be valid; `at` nul-terminated.
 */
enum AodeStatus aode_solve(const struct AodeEquation *eq,
                           const char *at,
                           uintptr_t order,
                           char **out);

/**
 * Places centered at `at` as a JSON array. `order` 0 selects the default
 * bound.
 *
 * # Safety
 * Pointers must be valid; `at` nul-terminated.
 */
enum AodeStatus aode_places(const struct AodeEquation *eq,
                            const char *at,
                            uintptr_t order,
                            char **out);

/**
 * Separant recursion at `at` through `t^order` (`order` >= 1).
 *
 * # Safety
 * Pointers must be valid; `at` nul-terminated.
 */
enum AodeStatus aode_direct(const struct AodeEquation *eq,
                            const char *at,
                            uintptr_t order,
                            char **out);

/**
 * Classification record as JSON, using up to `jobs` threads.
 *
 * # Safety
 * Pointers must be valid.
 */
enum AodeStatus aode_classify(const struct AodeEquation *eq, uintptr_t jobs, char **out);

/**
 * Critical set as a JSON array of tagged points.
 *
 * # Safety
 * Pointers must be valid.
 */
enum AodeStatus aode_critical(const struct AodeEquation *eq, char **out);

/**
 * Constant solutions as a JSON array of numbers.
 *
 * # Safety
 * Pointers must be valid.
 */
enum AodeStatus aode_constants(const struct AodeEquation *eq, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AODE_H */
