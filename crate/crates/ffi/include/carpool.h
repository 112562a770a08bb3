#ifndef CARPOOL_H
#define CARPOOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum CarpoolStatus {
  CARPOOL_STATUS_OK = 0,
  CARPOOL_STATUS_NULL_POINTER = 1,
  CARPOOL_STATUS_INVALID_SIZE = 2,
  CARPOOL_STATUS_VERTEX_OUT_OF_RANGE = 3,
  CARPOOL_STATUS_SELF_LOOP = 4,
  CARPOOL_STATUS_UNKNOWN_EDGE = 5,
  CARPOOL_STATUS_DEAD_EDGE = 6,
  CARPOOL_STATUS_NO_LIVE_EDGE = 7,
  CARPOOL_STATUS_INVARIANT_VIOLATION = 8,
  CARPOOL_STATUS_POISONED = 9,
  CARPOOL_STATUS_BUFFER_TOO_SMALL = 10,
  CARPOOL_STATUS_PANIC = 11,
  CARPOOL_STATUS_INTERNAL = 12,
} CarpoolStatus;

/**
 * Opaque engine handle.
 */
typedef struct CarpoolEngine CarpoolEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an engine for `n` vertices and stores the handle in `*out`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum CarpoolStatus carpool_engine_new(uint32_t n, struct CarpoolEngine **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `handle` must be null or a live handle from `carpool_engine_new`, and is
 * invalid afterwards.
 */
void carpool_engine_free(struct CarpoolEngine *handle);

/**
 * Inserts an edge between `u` and `v`; its id goes to `*out_edge` when
 * that is non-null.
 *
 * # Safety
 * `handle` must be null or live; `out_edge` null or valid for writes.
 */
enum CarpoolStatus carpool_insert(struct CarpoolEngine *handle,
                                  uint32_t u,
                                  uint32_t v,
                                  uint64_t *out_edge);

/**
 * Deletes the edge with the given id.
 *
 * # Safety
 * `handle` must be null or live.
 */
enum CarpoolStatus carpool_delete(struct CarpoolEngine *handle, uint64_t edge);

/**
 * Deletes the most recently inserted live edge between `u` and `v`; the
 * removed id goes to `*out_edge` when that is non-null.
 *
 * # Safety
 * `handle` must be null or live; `out_edge` null or valid for writes.
 */
enum CarpoolStatus carpool_delete_pair(struct CarpoolEngine *handle,
                                       uint32_t u,
                                       uint32_t v,
                                       uint64_t *out_edge);

/**
 * Copies the ids of edges flipped by the last successful update into
 * `buf`. `*out_len` always receives the number of flips; if it exceeds
 * `cap`, nothing is copied and `BufferTooSmall` is returned.
 *
 * # Safety
 * `buf` must be valid for `cap` writes (or null when `cap` is 0);
 * `out_len` must be valid for writes.
 */
enum CarpoolStatus carpool_last_flips(struct CarpoolEngine *handle,
                                      uint64_t *buf,
                                      size_t cap,
                                      size_t *out_len);

/**
 * Largest `|out - in|` over all vertices.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CarpoolStatus carpool_max_discrepancy(struct CarpoolEngine *handle, uint32_t *out);

/**
 * Current direction of a live edge.
 *
 * # Safety
 * `tail` and `head` must be valid for writes.
 */
enum CarpoolStatus carpool_edge_direction(struct CarpoolEngine *handle,
                                          uint64_t edge,
                                          uint32_t *tail,
                                          uint32_t *head);

/**
 * Number of live edges.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CarpoolStatus carpool_live_edges(struct CarpoolEngine *handle, size_t *out);

/**
 * Recomputes every invariant from scratch. `*out_violations` receives the
 * number of violations; a non-zero count also returns
 * `InvariantViolation` with the details in `carpool_last_error`.
 *
 * # Safety
 * `out_violations` must be null or valid for writes.
 */
enum CarpoolStatus carpool_check_invariants(struct CarpoolEngine *handle, size_t *out_violations);

/**
 * Message for the last failed call on this handle, or null. The pointer
 * stays valid until the next call on the handle.
 *
 * # Safety
 * `handle` must be null or live.
 */
const char *carpool_last_error(const struct CarpoolEngine *handle);

/**
 * Static name of a status code.
 */
const char *carpool_status_name(enum CarpoolStatus status);

/**
 * Library version as a static string.
 */
const char *carpool_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARPOOL_H */
