/* C interface to the covercount edge-cover engine. */

#ifndef COVERCOUNT_H
#define COVERCOUNT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CcStatus {
  CC_STATUS_OK = 0,
  CC_STATUS_INVALID_GRAPH = 1,
  CC_STATUS_INVALID_ARGUMENT = 2,
  CC_STATUS_GUARD_EXCEEDED = 3,
  CC_STATUS_OVERFLOW = 4,
  CC_STATUS_PARSE_ERROR = 5,
  CC_STATUS_IO_ERROR = 6,
  CC_STATUS_NULL_POINTER = 7,
  CC_STATUS_BUFFER_TOO_SMALL = 8,
  CC_STATUS_INTERNAL_PANIC = 9,
} CcStatus;

// Classification of one value in a finished search.
typedef enum CcValueStatus {
  CC_VALUE_STATUS_ACHIEVABLE = 0,
  CC_VALUE_STATUS_CERTIFIED_IMPOSSIBLE = 1,
  CC_VALUE_STATUS_UNRESOLVED = 2,
} CcValueStatus;

// An immutable graph handle.
typedef struct CcGraph CcGraph;

// A finished search: the pool flattened into per-value rows.
typedef struct CcSearch CcSearch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the most recent error message of this thread into `buf` as a
// NUL-terminated string; empty string if no error was recorded.
//
// # Safety
// `buf` must point to `buf_len` writable bytes.
enum CcStatus cc_last_error(char *buf, size_t buf_len);

// Builds a graph on `n` vertices from `edge_pairs` edges given as a flat
// `u0 v0 u1 v1 ...` array, and stores the new handle in `*out`.
//
// # Safety
// `edges` must point to `2 * edge_pairs` readable u32 values (or be null
// when `edge_pairs` is 0); `out` must be a valid pointer.
enum CcStatus cc_graph_new(uint32_t n,
                           const uint32_t *edges,
                           size_t edge_pairs,
                           struct CcGraph **out);

// Parses a graph from edge-list text, or graph6 when the text carries the
// `>>graph6<<` header or `force_graph6` is nonzero.
//
// # Safety
// `text` must be a valid NUL-terminated string; `out` must be valid.
enum CcStatus cc_graph_parse(const char *text, int32_t force_graph6, struct CcGraph **out);

// Frees a graph handle; null is ignored.
//
// # Safety
// `g` must have come from this library and not been freed before.
void cc_graph_free(struct CcGraph *g);

// Vertex count; 0 for a null handle.
//
// # Safety
// `g` must be a live handle or null.
uint32_t cc_graph_vertex_count(const struct CcGraph *g);

// Edge count; 0 for a null handle.
//
// # Safety
// `g` must be a live handle or null.
uint32_t cc_graph_edge_count(const struct CcGraph *g);

// Stores 1 in `*out` iff the graph is connected.
//
// # Safety
// `g` must be a live handle; `out` must be valid.
enum CcStatus cc_graph_is_connected(const struct CcGraph *g, int32_t *out);

// Stores 1 in `*out` iff the graph is bipartite.
//
// # Safety
// `g` must be a live handle; `out` must be valid.
enum CcStatus cc_graph_is_bipartite(const struct CcGraph *g, int32_t *out);

// Stores 1 in `*out` iff the graph is atomic (connected, at least one
// edge, no cut vertex).
//
// # Safety
// `g` must be a live handle; `out` must be valid.
enum CcStatus cc_graph_is_atomic(const struct CcGraph *g, int32_t *out);

// Writes the number of edge coverings as a decimal string. The count is
// exact and unbounded, hence the string interface.
//
// # Safety
// `g` must be a live handle; `buf` must point to `buf_len` writable bytes.
enum CcStatus cc_count_covers(const struct CcGraph *g, char *buf, size_t buf_len);

// Stores the number of edge coverings in `*out`; fails with Overflow when
// it does not fit in 64 bits.
//
// # Safety
// `g` must be a live handle; `out` must be valid.
enum CcStatus cc_count_covers_u64(const struct CcGraph *g, uint64_t *out);

// Computes the rooted profile: `*out_alpha` coverings of the graph,
// `*out_beta` coverings with the root removed, `*out_s` their sum. The
// graph must be connected. Fails with Overflow if any value needs more
// than 64 bits.
//
// # Safety
// `g` must be a live handle; the three out pointers must be valid.
enum CcStatus cc_rooted_profile_u64(const struct CcGraph *g,
                                    uint32_t root,
                                    uint64_t *out_alpha,
                                    uint64_t *out_beta,
                                    uint64_t *out_s);

// Runs the bipartite search over the built-in seven-atom set and stores a
// handle to the finished report. Impossibility is certified only up to 67.
//
// # Safety
// `out` must be valid.
enum CcStatus cc_search_bipartite(uint64_t max_alpha, struct CcSearch **out);

// Runs the tree search (single-edge atom set).
//
// # Safety
// `out` must be valid.
enum CcStatus cc_search_trees(uint64_t max_alpha, struct CcSearch **out);

// Frees a search handle; null is ignored.
//
// # Safety
// `s` must have come from this library and not been freed before.
void cc_search_free(struct CcSearch *s);

// Stores the classification of `value` (which must lie in 1..=L) in
// `*out`.
//
// # Safety
// `s` must be a live handle; `out` must be valid.
enum CcStatus cc_search_status_of(const struct CcSearch *s,
                                  uint64_t value,
                                  enum CcValueStatus *out);

// Writes the witness term of an achievable `value` as a NUL-terminated
// string; fails with InvalidArgument when the value is not achievable.
//
// # Safety
// `s` must be a live handle; `buf` must point to `buf_len` writable bytes.
enum CcStatus cc_search_witness(const struct CcSearch *s,
                                uint64_t value,
                                char *buf,
                                size_t buf_len);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* COVERCOUNT_H */
