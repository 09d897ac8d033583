#ifndef CONFLUENCE_LAB_H
#define CONFLUENCE_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ClStatus {
  CL_STATUS_OK = 0,
  /**
   * A check failed or a counterexample was found.
   */
  CL_STATUS_FAIL = 1,
  /**
   * A check ran out of budget on some instance.
   */
  CL_STATUS_INCONCLUSIVE = 2,
  CL_STATUS_NULL_ARGUMENT = -1,
  CL_STATUS_INVALID_UTF8 = -2,
  CL_STATUS_PARSE = -3,
  CL_STATUS_TERM = -4,
  CL_STATUS_RELATION = -5,
  CL_STATUS_TYPE = -6,
  CL_STATUS_JSON = -7,
  CL_STATUS_UNKNOWN_NAME = -8,
  CL_STATUS_PANIC = -9,
  CL_STATUS_INVALID_ARGUMENT = -10,
} ClStatus;

/**
 * An untyped term.
 */
typedef struct ClTerm ClTerm;

/**
 * A list of terms, in reduct order.
 */
typedef struct ClTermList ClTermList;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last error on this thread, or null. Free with
 * `cl_string_free`.
 */
char *cl_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void cl_string_free(char *s);

/**
 * Parses `text` with free names `ctx` (comma-separated, may be null).
 *
 * # Safety
 * `text` and `ctx` must be null or NUL-terminated; `out` must be writable.
 */
enum ClStatus cl_term_parse(const char *text, const char *ctx, struct ClTerm **out);

/**
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum ClStatus cl_term_from_json(const char *json, struct ClTerm **out);

/**
 * # Safety
 * `t` must be null or a handle from this library that was not freed yet.
 */
void cl_term_free(struct ClTerm *t);

/**
 * # Safety
 * `t` must be a live handle; `ctx` null or NUL-terminated; `out` writable.
 */
enum ClStatus cl_term_pretty(const struct ClTerm *t, const char *ctx, char **out);

/**
 * # Safety
 * `t` must be a live handle; `out` writable.
 */
enum ClStatus cl_term_to_json(const struct ClTerm *t, char **out);

/**
 * Structural (α-) equality; false if either handle is null.
 *
 * # Safety
 * Non-null arguments must be live handles.
 */
bool cl_term_equal(const struct ClTerm *a, const struct ClTerm *b);

/**
 * # Safety
 * `t` must be null or a live handle. Returns 0 for null.
 */
size_t cl_term_height(const struct ClTerm *t);

/**
 * One-step reducts under `rel` ("beta", "eta", "betaeta", "par", or a
 * `+`-joined union).
 *
 * # Safety
 * `t` must be a live handle; `rel` NUL-terminated; `out` writable.
 */
enum ClStatus cl_reducts(const struct ClTerm *t, const char *rel, struct ClTermList **out);

/**
 * # Safety
 * `list` must be null or a live list.
 */
size_t cl_term_list_len(const struct ClTermList *list);

/**
 * Borrowed element `i`, or null when out of range. The handle stays owned
 * by the list.
 *
 * # Safety
 * `list` must be null or a live list.
 */
const struct ClTerm *cl_term_list_get(const struct ClTermList *list, size_t i);

/**
 * # Safety
 * `list` must be null or a live list.
 */
void cl_term_list_free(struct ClTermList *list);

/**
 * # Safety
 * `t` must be a live handle; `out` writable.
 */
enum ClStatus cl_complete_dev(const struct ClTerm *t, struct ClTerm **out);

/**
 * Leftmost-outermost normalization with at most `fuel` steps. Returns
 * `CL_STATUS_FAIL` (with the last term in `out`) when fuel runs out.
 *
 * # Safety
 * `t` must be a live handle; `rel` NUL-terminated; `out` writable.
 */
enum ClStatus cl_normalize(const struct ClTerm *t,
                           const char *rel,
                           size_t fuel,
                           struct ClTerm **out);

/**
 * Whether `m` parallel-reduces to `n` in one step; false on null.
 *
 * # Safety
 * Non-null arguments must be live handles.
 */
bool cl_par_step(const struct ClTerm *m, const struct ClTerm *n);

/**
 * Runs a property check over all terms of height at most `height` with
 * `free_vars` free variables and writes the JSON report to `report`.
 * `property` is one of "diamond", "strong-comm", "comm", "confluence",
 * "strip"; `rel2` may be null for single-relation properties.
 *
 * # Safety
 * String arguments must be NUL-terminated (`rel2` may be null); `report`
 * writable.
 */
enum ClStatus cl_check(const char *property,
                       const char *rel,
                       const char *rel2,
                       size_t height,
                       size_t free_vars,
                       size_t depth,
                       size_t nodes,
                       char **report);

/**
 * Searches for a diamond counterexample. On `CL_STATUS_FAIL` the
 * counterexample JSON is written to `cex`; on `CL_STATUS_OK` none exists in
 * the corpus and `cex` is set to null.
 *
 * # Safety
 * `rel` must be NUL-terminated; `cex` writable.
 */
enum ClStatus cl_find_diamond_cex(const char *rel, size_t height, size_t free_vars, char **cex);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONFLUENCE_LAB_H */
