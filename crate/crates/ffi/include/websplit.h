#ifndef WEBSPLIT_H
#define WEBSPLIT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
#include <stddef.h>

typedef enum WsStatus {
  WS_STATUS_OK = 0,
  WS_STATUS_NULL_POINTER = 1,
  WS_STATUS_INVALID_UTF8 = 2,
  WS_STATUS_INVALID_INPUT = 3,
  WS_STATUS_IO = 4,
  WS_STATUS_PANIC = 5,
} WsStatus;

/**
 * Opaque retrieval index handle.
 */
typedef struct WsIndex WsIndex;

/**
 * Opaque split model handle.
 */
typedef struct WsSplitModel WsSplitModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *ws_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ws_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void ws_string_free(char *s);

/**
 * Parses a split model from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum WsStatus ws_split_model_from_json(const char *json, struct WsSplitModel **out);

/**
 * Loads a split model file written by `websplit train-split`.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum WsStatus ws_split_model_load(const char *path, struct WsSplitModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from this library not yet freed.
 */
void ws_split_model_free(struct WsSplitModel *model);

/**
 * Parses a retrieval index from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum WsStatus ws_index_from_json(const char *json, struct WsIndex **out);

/**
 * Loads an index file written by `websplit train-gen`.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum WsStatus ws_index_load(const char *path, struct WsIndex **out);

/**
 * # Safety
 * `index` must be NULL or a handle from this library not yet freed.
 */
void ws_index_free(struct WsIndex *index);

/**
 * Predicts a partition of `mr_json` and writes it as a JSON array of blocks,
 * each a JSON array of triple strings.
 *
 * # Safety
 * `model` must be a live handle; `mr_json` a NUL-terminated string; `out`
 * writable.
 */
enum WsStatus ws_predict_partition(const struct WsSplitModel *model,
                                   const char *mr_json,
                                   char **out);

/**
 * Splits and rephrases one complex sentence. A NULL `model` splits into
 * single triples; a NULL `index` uses the template generator.
 *
 * # Safety
 * Handles must be NULL or live; `complex` and `mr_json` NUL-terminated
 * strings; `out` writable.
 */
enum WsStatus ws_split_and_rephrase(const struct WsSplitModel *model,
                                    const struct WsIndex *index,
                                    const char *complex,
                                    const char *mr_json,
                                    char **out);

/**
 * Sentence-level BLEU-4 (0 to 100) of `hyp` against `n_refs` references.
 *
 * # Safety
 * `hyp` must be a NUL-terminated string, `refs` an array of `n_refs` such
 * strings, `out` writable.
 */
enum WsStatus ws_bleu4(const char *hyp, const char *const *refs, size_t n_refs, double *out);

/**
 * Splits `text` into sentences with the default abbreviation lexicon and
 * writes them as a JSON array of strings.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` writable.
 */
enum WsStatus ws_segment(const char *text, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEBSPLIT_H */
