#ifndef KEYNET_H
#define KEYNET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum KnStatus {
  KN_STATUS_OK = 0,
  KN_STATUS_NULL_POINTER = 1,
  KN_STATUS_INVALID_ARGUMENT = 2,
  KN_STATUS_IO = 3,
  KN_STATUS_PARSE = 4,
  // The graph has no edges, so modularity is undefined.
  KN_STATUS_EMPTY_GRAPH = 5,
  KN_STATUS_NO_VERTICES = 6,
  KN_STATUS_PARTITION_MISMATCH = 7,
  KN_STATUS_NO_DATA = 8,
  KN_STATUS_PANIC = 99,
} KnStatus;

// Opaque weighted keyword graph.
typedef struct KnGraph KnGraph;

// Opaque stabilized community-count result.
typedef struct KnStabilized KnStabilized;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *kn_last_error(void);

// Library version as a static NUL-terminated string.
const char *kn_version(void);

// Builds a graph on `vertex_count` vertices from `edge_count` edges given
// as parallel arrays. Repeated pairs accumulate; self-loops are rejected.
//
// # Safety
// The three arrays must hold `edge_count` elements each, and `out` must be
// a valid pointer. Free the result with [`kn_graph_free`].
enum KnStatus kn_graph_from_edges(size_t vertex_count,
                                  const size_t *sources,
                                  const size_t *targets,
                                  const uint64_t *weights,
                                  size_t edge_count,
                                  struct KnGraph **out);

// # Safety
// `g` must come from [`kn_graph_from_edges`] and not be freed twice. Null is ignored.
void kn_graph_free(struct KnGraph *g);

// # Safety
// `g` must be a live graph handle or null (which yields 0).
size_t kn_graph_vertex_count(const struct KnGraph *g);

// Total edge weight `m`.
//
// # Safety
// `g` must be a live graph handle or null (which yields 0).
uint64_t kn_graph_total_weight(const struct KnGraph *g);

// Modularity of the partition given by `assignment` (one community label
// per vertex).
//
// # Safety
// `assignment` must hold `len` elements and `out` must be valid.
enum KnStatus kn_modularity(const struct KnGraph *g,
                            const size_t *assignment,
                            size_t len,
                            double *out);

// One seeded Louvain run. Writes one community label per vertex into
// `assignment` (labels numbered by first appearance) and the community
// count into `community_count`.
//
// # Safety
// `assignment` must have room for `len` elements, `len` must equal the
// vertex count, and `community_count` must be valid.
enum KnStatus kn_louvain(const struct KnGraph *g,
                         uint64_t seed,
                         size_t *assignment,
                         size_t len,
                         size_t *community_count);

// Modal community count over `runs` seeded Louvain runs.
//
// # Safety
// `g` must be a live graph handle and `out` valid. Free the result with
// [`kn_stabilized_free`].
enum KnStatus kn_stabilize(const struct KnGraph *g,
                           size_t runs,
                           uint64_t master_seed,
                           bool parallel,
                           struct KnStabilized **out);

// # Safety
// `r` must come from [`kn_stabilize`] and not be freed twice. Null is ignored.
void kn_stabilized_free(struct KnStabilized *r);

// # Safety
// `r` must be a live handle or null (which yields 0).
size_t kn_stabilized_modal_count(const struct KnStabilized *r);

// Number of runs that produced `count` communities.
//
// # Safety
// `r` must be a live handle or null (which yields 0).
size_t kn_stabilized_runs_with_count(const struct KnStabilized *r, size_t count);

// Modularity of the representative partition; `KN_STATUS_EMPTY_GRAPH`
// when the graph has no edges.
//
// # Safety
// `r` must be a live handle and `out` valid.
enum KnStatus kn_stabilized_modularity(const struct KnStabilized *r, double *out);

// Copies the representative partition into `assignment`.
//
// # Safety
// `r` must be a live handle; `assignment` must have room for `len`
// elements, and `len` must equal the vertex count.
enum KnStatus kn_stabilized_assignment(const struct KnStabilized *r,
                                       size_t *assignment,
                                       size_t len);

// Runs the full pipeline on JSONL corpus text and returns the report as a
// JSON string. `config_json` may be null for defaults or hold any subset
// of `period`, `top_k`, `runs`, `master_seed`, `filter`, `label` and
// `parallel`. The bundled English stop words are used.
//
// # Safety
// Both strings must be NUL-terminated (or `config_json` null) and `out`
// valid. Free the result with [`kn_string_free`].
enum KnStatus kn_analyze_jsonl(const char *corpus_jsonl, const char *config_json, char **out);

// # Safety
// `s` must come from this library and not be freed twice. Null is ignored.
void kn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KEYNET_H */
