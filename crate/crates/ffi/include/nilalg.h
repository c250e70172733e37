#ifndef NILALG_H
#define NILALG_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes.
 */
typedef enum NilalgStatus {
  NILALG_STATUS_OK = 0,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  NILALG_STATUS_NULL_OR_INVALID_ARGUMENT = 1,
  /**
   * Text input did not parse.
   */
  NILALG_STATUS_PARSE = 2,
  /**
   * Parameters were rejected.
   */
  NILALG_STATUS_INVALID_PARAMS = 3,
  /**
   * A computation exceeded a degree or word-length limit.
   */
  NILALG_STATUS_CAPACITY = 4,
  /**
   * The tower is too shallow for the request.
   */
  NILALG_STATUS_DEPTH = 5,
  /**
   * No exact value is available at this size.
   */
  NILALG_STATUS_UNAVAILABLE = 6,
  NILALG_STATUS_INTERNAL = 7,
  /**
   * A panic was caught at the boundary.
   */
  NILALG_STATUS_PANIC = 8,
} NilalgStatus;

/**
 * Opaque tower handle.
 */
typedef struct NilalgTower NilalgTower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *nilalg_last_error(void);

/**
 * Library version as a static string.
 */
const char *nilalg_version(void);

/**
 * Builds a tower from a JSON tower description
 * (`{"f": ["2"], "g": ["1"], "slots": [{"words": ["xxxx"]}]}`) over GF(p)
 * up to `max_level`.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string and `out` writable.
 */
enum NilalgStatus nilalg_tower_build(const char *spec_json,
                                     uint64_t p,
                                     uint32_t max_level,
                                     struct NilalgTower **out);

/**
 * Releases a tower. Null is ignored.
 *
 * # Safety
 * `tower` must come from [`nilalg_tower_build`] and not be used afterwards.
 */
void nilalg_tower_free(struct NilalgTower *tower);

/**
 * Highest level of the tower.
 *
 * # Safety
 * `tower` must be a live handle and `out` writable.
 */
enum NilalgStatus nilalg_tower_max_level(const struct NilalgTower *tower, uint32_t *out);

/**
 * Dimension of the level-`level` quotient.
 *
 * # Safety
 * `tower` must be a live handle and `out` writable.
 */
enum NilalgStatus nilalg_tower_level_dim(const struct NilalgTower *tower,
                                         uint32_t level,
                                         size_t *out);

/**
 * Whether the homogeneous element `element` (e.g. `"x + 2*y"`) lies in the
 * ideal.
 *
 * # Safety
 * `tower` must be a live handle, `element` NUL-terminated, `out` writable.
 */
enum NilalgStatus nilalg_ideal_contains(const struct NilalgTower *tower,
                                        const char *element,
                                        bool *out);

/**
 * Whether `element^exponent` lies in the ideal.
 *
 * # Safety
 * `tower` must be a live handle, `element` NUL-terminated, `out` writable.
 */
enum NilalgStatus nilalg_nil_check(const struct NilalgTower *tower,
                                   const char *element,
                                   uint32_t exponent,
                                   bool *out);

/**
 * Exact dimension of the degree-`n` quotient by the ideal, or
 * `Unavailable` when `n` is beyond exact reach.
 *
 * # Safety
 * `tower` must be a live handle and `out` writable.
 */
enum NilalgStatus nilalg_quotient_dim(const struct NilalgTower *tower, uint32_t n, size_t *out);

/**
 * Hilbert series CSV for degrees `0..=n_max`. `alpha` is one of
 * `log2log2`, `log2`, `sqrt-log`, `table:...`. The string is released with
 * [`nilalg_string_free`].
 *
 * # Safety
 * `tower` must be a live handle, `alpha` NUL-terminated, `out` writable.
 */
enum NilalgStatus nilalg_hilbert_csv(const struct NilalgTower *tower,
                                     uint32_t n_max,
                                     uint32_t exact_max,
                                     const char *alpha,
                                     char **out);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void nilalg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILALG_H */
