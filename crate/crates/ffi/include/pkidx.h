#ifndef PKIDX_H
#define PKIDX_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PkidxStatus {
  PKIDX_STATUS_OK = 0,
  PKIDX_STATUS_NULL_ARGUMENT = 1,
  PKIDX_STATUS_EMPTY_TEXT = 2,
  PKIDX_STATUS_IO = 3,
  PKIDX_STATUS_FORMAT = 4,
  PKIDX_STATUS_INVALID_ARGUMENT = 5,
  PKIDX_STATUS_PANIC = 6,
} PkidxStatus;

/**
 * Opaque index handle.
 */
typedef struct PkidxIndex PkidxIndex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or an empty string.
 * Valid until the next call on the same thread.
 */
const char *pkidx_last_error(void);

/**
 * Builds an index over `len` bytes. `force_threshold` of 0 picks the
 * default heavy-node threshold.
 *
 * # Safety
 * `text` must point to `len` readable bytes and `out` to a writable handle slot.
 */
enum PkidxStatus pkidx_build(const uint8_t *text,
                             size_t len,
                             size_t force_threshold,
                             struct PkidxIndex **out);

/**
 * Loads an index file written by `pkidx_save` or the `pkidx build` tool.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable handle slot.
 */
enum PkidxStatus pkidx_load(const char *path, struct PkidxIndex **out);

/**
 * # Safety
 * `idx` must be a live handle and `path` a NUL-terminated string.
 */
enum PkidxStatus pkidx_save(const struct PkidxIndex *idx, const char *path);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `idx` must be null or a handle not yet freed.
 */
void pkidx_free(struct PkidxIndex *idx);

/**
 * Length of the indexed text, or 0 for a null handle.
 *
 * # Safety
 * `idx` must be null or a live handle.
 */
size_t pkidx_len(const struct PkidxIndex *idx);

/**
 * # Safety
 * `pattern` must point to `len` readable bytes and `count` be writable.
 */
enum PkidxStatus pkidx_count(const struct PkidxIndex *idx,
                             const uint8_t *pattern,
                             size_t len,
                             size_t *count);

/**
 * Occurrence positions in suffix order. The array is owned by the caller
 * and must be released with `pkidx_positions_free`; it is null when there
 * are no occurrences.
 *
 * # Safety
 * `pattern` must point to `len` readable bytes; `positions` and `count`
 * must be writable.
 */
enum PkidxStatus pkidx_locate(const struct PkidxIndex *idx,
                              const uint8_t *pattern,
                              size_t len,
                              size_t **positions,
                              size_t *count);

/**
 * # Safety
 * `positions` and `count` must come from one `pkidx_locate` call, or
 * `positions` must be null.
 */
void pkidx_positions_free(size_t *positions, size_t count);

/**
 * Start of the largest suffix smaller than the pattern. `*found` is false
 * when every suffix is at least the pattern.
 *
 * # Safety
 * `pattern` must point to `len` readable bytes; `found` and `position`
 * must be writable.
 */
enum PkidxStatus pkidx_predecessor(const struct PkidxIndex *idx,
                                   const uint8_t *pattern,
                                   size_t len,
                                   bool *found,
                                   size_t *position);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PKIDX_H */
