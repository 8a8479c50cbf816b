/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef MLCP_H
#define MLCP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum MlcpStatus {
  MLCP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MLCP_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MLCP_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed net text.
   */
  MLCP_STATUS_PARSE = 3,
  /**
   * The net is cyclic or its tables do not partition the parent space.
   */
  MLCP_STATUS_VALIDATION = 4,
  /**
   * The query needs a more-or-less net.
   */
  MLCP_STATUS_NOT_MORE_OR_LESS = 5,
  /**
   * An outcome or expansion budget was exceeded.
   */
  MLCP_STATUS_RESOURCE = 6,
  /**
   * An outcome literal does not fit the net.
   */
  MLCP_STATUS_INVALID_OUTCOME = 7,
  /**
   * A library invariant failed.
   */
  MLCP_STATUS_INTERNAL = 8,
  /**
   * A panic was caught at the boundary.
   */
  MLCP_STATUS_PANIC = 9,
} MlcpStatus;

/**
 * Opaque net handle.
 */
typedef struct MlcpNet MlcpNet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates a net. On success `*out` receives a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum MlcpStatus mlcp_net_parse(const char *text, struct MlcpNet **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `net` must be null or a handle from [`mlcp_net_parse`] not yet freed.
 */
void mlcp_net_free(struct MlcpNet *net);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void mlcp_string_free(char *s);

/**
 * Canonical text of the net.
 *
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum MlcpStatus mlcp_net_serialize(const struct MlcpNet *net, char **out);

/**
 * Whether every variable of the net is monotonic.
 *
 * # Safety
 * `net` must be a live handle; `out` must be writable.
 */
enum MlcpStatus mlcp_net_is_more_or_less(const struct MlcpNet *net, bool *out);

/**
 * Does `better` dominate `worse`? Uses the restricted search, so the net must
 * be more-or-less. `nodes_expanded` may be null.
 *
 * # Safety
 * `net` must be a live handle; strings NUL-terminated; `entailed` writable;
 * `nodes_expanded` null or writable.
 */
enum MlcpStatus mlcp_dominates(const struct MlcpNet *net,
                               const char *better,
                               const char *worse,
                               bool *entailed,
                               uint64_t *nodes_expanded);

/**
 * Dominance by brute-force reachability over at most `cap` outcomes.
 *
 * # Safety
 * As for [`mlcp_dominates`].
 */
enum MlcpStatus mlcp_oracle_dominates(const struct MlcpNet *net,
                                      const char *better,
                                      const char *worse,
                                      uint64_t cap,
                                      bool *entailed);

/**
 * Best completion of a partial assignment (`given` may be null or empty).
 * `*out` receives the outcome literal.
 *
 * # Safety
 * `net` must be a live handle; `given` null or NUL-terminated; `out` writable.
 */
enum MlcpStatus mlcp_optimize(const struct MlcpNet *net, const char *given, char **out);

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *mlcp_last_error_message(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MLCP_H */
