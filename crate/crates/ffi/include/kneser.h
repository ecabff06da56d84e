#ifndef KNESER_H
#define KNESER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum KnStatus {
  KN_STATUS_OK = 0,
  KN_STATUS_NULL_POINTER = 1,
  KN_STATUS_INVALID_UTF8 = 2,
  KN_STATUS_PARSE = 3,
  KN_STATUS_INVALID_GROUP = 4,
  KN_STATUS_TOO_LARGE = 5,
  KN_STATUS_DOMAIN_MISMATCH = 6,
  KN_STATUS_EMPTY_SET = 7,
  KN_STATUS_PRECONDITION = 8,
  KN_STATUS_CERTIFICATE = 9,
  KN_STATUS_INTERNAL = 10,
  KN_STATUS_PANIC = 11,
} KnStatus;

/**
 * A finite abelian group.
 */
typedef struct KnGroup KnGroup;

/**
 * A subset of a group.
 */
typedef struct KnSet KnSet;

/**
 * Both sides of `|A+B| >= |A+K| + |B+K| - |K|`.
 */
typedef struct KnBoundReport {
  /**
   * `|A+B|`
   */
  size_t lhs;
  /**
   * `|A+K| + |B+K| - |K|`
   */
  size_t rhs;
  /**
   * `|K|`, the order of the stabilizer of `A+B`
   */
  size_t k_order;
  bool holds;
  bool equality;
} KnBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds `Z_{orders[0]} x ... x Z_{orders[len-1]}`.
 *
 * # Safety
 * `orders` must point to `len` readable values; `out` must be writable.
 */
enum KnStatus kn_group_new(const uint32_t *orders, size_t len, struct KnGroup **out);

/**
 * Parses a spec such as `"Z6"` or `"Z2xZ4"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum KnStatus kn_group_parse(const char *spec, struct KnGroup **out);

/**
 * Order of the group, or 0 for a null handle.
 *
 * # Safety
 * `group` must be null or a live handle.
 */
size_t kn_group_order(const struct KnGroup *group);

/**
 * # Safety
 * `group` must be null or a handle from this library, not yet freed.
 * Sets created in the group stay valid.
 */
void kn_group_free(struct KnGroup *group);

/**
 * Parses a set literal such as `"{0,1,3}"` or `"{(0,1),(1,0)}"`.
 *
 * # Safety
 * `group` must be a live handle, `literal` a NUL-terminated string and
 * `out` writable.
 */
enum KnStatus kn_set_parse(const struct KnGroup *group, const char *literal, struct KnSet **out);

/**
 * Cardinality of the set, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t kn_set_len(const struct KnSet *set);

/**
 * Writes the set literal, e.g. `"{0,3}"`. Free with [`kn_string_free`].
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum KnStatus kn_set_to_string(const struct KnSet *set, char **out);

/**
 * # Safety
 * `set` must be null or a handle from this library, not yet freed.
 */
void kn_set_free(struct KnSet *set);

/**
 * `A + B` as a new set.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum KnStatus kn_sumset(const struct KnSet *a, const struct KnSet *b, struct KnSet **out);

/**
 * The stabilizer `{g : g + A = A}` as a new set.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum KnStatus kn_stabilizer(const struct KnSet *set, struct KnSet **out);

/**
 * Evaluates the Kneser bound for nonempty `A` and `B`.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum KnStatus kn_kneser_bound(const struct KnSet *a,
                              const struct KnSet *b,
                              struct KnBoundReport *out);

/**
 * Builds a certificate and writes it as JSON. Free with [`kn_string_free`].
 *
 * # Safety
 * `a` and `b` must be live handles and `out_json` writable.
 */
enum KnStatus kn_certify(const struct KnSet *a, const struct KnSet *b, char **out_json);

/**
 * Replays a JSON certificate against `A` and `B`.
 *
 * A malformed document is a rejection, not an error. On rejection
 * `*out_reason` receives the reason (free with [`kn_string_free`]); on
 * acceptance it is set to null. `out_reason` may itself be null.
 *
 * # Safety
 * `a` and `b` must be live handles, `json` a NUL-terminated string and
 * `out_accepted` writable.
 */
enum KnStatus kn_verify(const struct KnSet *a,
                        const struct KnSet *b,
                        const char *json,
                        bool *out_accepted,
                        char **out_reason);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void kn_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or `""`. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *kn_last_error_message(void);

/**
 * Library version and certificate format, as a static string.
 */
const char *kn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNESER_H */
