#ifndef BUNDLE_EMBED_H
#define BUNDLE_EMBED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BeConvention {
  BE_CONVENTION_POSITIVE = 0,
  BE_CONVENTION_INCLUDE_ZERO = 1,
} BeConvention;

typedef enum BeEmbedding {
  BE_EMBEDDING_LINF = 0,
  BE_EMBEDDING_L1 = 1,
  BE_EMBEDDING_ESA = 2,
} BeEmbedding;

typedef enum BeStatus {
  BE_STATUS_OK = 0,
  BE_STATUS_NULL_ARGUMENT = 1,
  BE_STATUS_INVALID_UTF8 = 2,
  BE_STATUS_PARSE = 3,
  BE_STATUS_INVALID_CODE = 4,
  BE_STATUS_INVALID_VERTEX = 5,
  BE_STATUS_SIZE_GUARD = 6,
  BE_STATUS_OVERFLOW = 7,
  BE_STATUS_ESA_CAP = 8,
  BE_STATUS_EMBEDDING = 9,
  BE_STATUS_USAGE = 10,
  BE_STATUS_PANIC = 11,
} BeStatus;

/*
 A validated depth code.
 */
typedef struct BeCode BeCode;

/*
 A materialized bundle graph.
 */
typedef struct BeGraph BeGraph;

/*
 A distortion report.
 */
typedef struct BeReport BeReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *be_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void be_string_free(char *s);

/*
 Parses a depth word such as `"0,1,0"`.

 # Safety
 `text` must be a NUL-terminated string; `out` must be writable.
 */
enum BeStatus be_code_parse(const char *s, struct BeCode **out);

/*
 # Safety
 `code` must come from this library and not have been freed.
 */
void be_code_free(struct BeCode *code);

/*
 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_code_to_string(const struct BeCode *code, char **out);

/*
 Top height `M + 1`.

 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_code_height(const struct BeCode *code, size_t *out);

/*
 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_p_param(const struct BeCode *code, enum BeConvention convention, size_t *out);

/*
 Closed-form distance between vertices written as `r:(a1,a2,..)`.

 # Safety
 Handles and strings must be valid; `out` must be writable.
 */
enum BeStatus be_dist(const struct BeCode *code, const char *u, const char *v, size_t *out);

/*
 `W ⊘ W'`.

 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_oslash(const struct BeCode *w, const struct BeCode *w2, struct BeCode **out);

/*
 The `k`-th member of the family generated by `w`, `k >= 1`.

 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_family(const struct BeCode *w, size_t k, struct BeCode **out);

/*
 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_graph_materialize(const struct BeCode *code, uint32_t kappa, struct BeGraph **out);

/*
 # Safety
 `graph` must come from this library and not have been freed.
 */
void be_graph_free(struct BeGraph *graph);

/*
 # Safety
 Handles must be valid; out-parameters must be writable.
 */
enum BeStatus be_graph_size(const struct BeGraph *graph, size_t *vertices, size_t *edges);

/*
 Vertex and edge listing, one per line.

 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_graph_dump(const struct BeGraph *graph, char **out);

/*
 Breadth-first distance.

 # Safety
 Handles and strings must be valid; `out` must be writable.
 */
enum BeStatus be_graph_dist_bfs(const struct BeGraph *graph,
                                const char *u,
                                const char *v,
                                size_t *out);

/*
 Builds an embedding and evaluates its distortion. `pairs` is `"all"`,
 `"sample:N"` or `"sample:N:SEED"`; NULL means all pairs.

 # Safety
 Handles and strings must be valid; `out` must be writable.
 */
enum BeStatus be_evaluate(enum BeEmbedding embedding,
                          const struct BeCode *code,
                          uint32_t kappa,
                          const char *pairs,
                          struct BeReport **out);

/*
 # Safety
 `report` must come from this library and not have been freed.
 */
void be_report_free(struct BeReport *report);

/*
 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_report_pass(const struct BeReport *report, bool *out);

/*
 Exact distortion as `"a/b"`, or `"inf"`.

 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_report_distortion(const struct BeReport *report, char **out);

/*
 The report in the same JSON layout the command-line tool prints.

 # Safety
 Handles must be valid; `out` must be writable.
 */
enum BeStatus be_report_json(const struct BeReport *report, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BUNDLE_EMBED_H */
