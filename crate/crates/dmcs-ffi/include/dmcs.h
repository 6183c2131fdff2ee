/* C interface for the density-modularity community search library. */

#ifndef DMCS_H
#define DMCS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call. Zero means success;
// `dmcs_last_error` describes the most recent failure on this thread.
typedef enum DmcsStatus {
  DMCS_STATUS_OK = 0,
  DMCS_STATUS_NULL_ARGUMENT = 1,
  DMCS_STATUS_INVALID_UTF8 = 2,
  DMCS_STATUS_IO = 3,
  DMCS_STATUS_PARSE = 4,
  DMCS_STATUS_INVALID_ARGUMENT = 5,
  DMCS_STATUS_UNKNOWN_NODE = 6,
  DMCS_STATUS_QUERIES_DISCONNECTED = 7,
  DMCS_STATUS_INFEASIBLE = 8,
  DMCS_STATUS_TOO_LARGE = 9,
  DMCS_STATUS_BUFFER_TOO_SMALL = 10,
} DmcsStatus;

// Search algorithm selector.
typedef enum DmcsAlgorithm {
  DMCS_ALGORITHM_FPA = 0,
  DMCS_ALGORITHM_FPA_NO_PRUNING = 1,
  DMCS_ALGORITHM_NCA = 2,
  DMCS_ALGORITHM_KCORE = 3,
  DMCS_ALGORITHM_HIGHCORE = 4,
  DMCS_ALGORITHM_EXACT = 5,
} DmcsAlgorithm;

// Opaque graph handle; create with `dmcs_graph_load` or
// `dmcs_graph_parse`, release with `dmcs_graph_free`.
typedef struct DmcsGraph DmcsGraph;

// Opaque search result; release with `dmcs_result_free`.
typedef struct DmcsResult DmcsResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the most recent error message for this thread into `buffer` and
// returns the full message length in bytes (excluding the terminator).
// Passing a null buffer or zero capacity just queries the length.
//
// # Safety
// `buffer`, when non-null, must point to at least `capacity` bytes.
size_t dmcs_last_error(char *buffer, size_t capacity);

// Loads an edge-list file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum DmcsStatus dmcs_graph_load(const char *path, bool weighted, struct DmcsGraph **out);

// Parses an edge list held in memory.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum DmcsStatus dmcs_graph_parse(const char *text, bool weighted, struct DmcsGraph **out);

// Releases a graph handle; accepts null.
//
// # Safety
// `graph` must have come from `dmcs_graph_load`/`dmcs_graph_parse`.
void dmcs_graph_free(struct DmcsGraph *graph);

// Number of nodes, or 0 for a null handle.
//
// # Safety
// `graph` must be a live handle or null.
uint64_t dmcs_graph_node_count(const struct DmcsGraph *graph);

// Number of edges, or 0 for a null handle.
//
// # Safety
// `graph` must be a live handle or null.
uint64_t dmcs_graph_edge_count(const struct DmcsGraph *graph);

// Runs a community search. `k` is only read for `Kcore`; `node_limit`
// (0 = default 16) only for `Exact`. Queries are external ids.
//
// # Safety
// `graph` must be a live handle, `queries` must point to `query_count`
// ids, and `out` must be a valid pointer.
enum DmcsStatus dmcs_search(const struct DmcsGraph *graph,
                            const uint64_t *queries,
                            size_t query_count,
                            enum DmcsAlgorithm algorithm,
                            uint32_t k,
                            size_t node_limit,
                            struct DmcsResult **out);

// Number of nodes in the community, or 0 for a null handle.
//
// # Safety
// `result` must be a live handle or null.
size_t dmcs_result_size(const struct DmcsResult *result);

// Copies the community's external node ids (ascending) into `buffer`.
//
// # Safety
// `result` must be a live handle and `buffer` must hold `capacity` ids.
enum DmcsStatus dmcs_result_nodes(const struct DmcsResult *result,
                                  uint64_t *buffer,
                                  size_t capacity);

// Density modularity of the community (NaN for a null handle).
//
// # Safety
// `result` must be a live handle or null.
double dmcs_result_dm(const struct DmcsResult *result);

// Classic modularity of the community (NaN for a null handle).
//
// # Safety
// `result` must be a live handle or null.
double dmcs_result_cm(const struct DmcsResult *result);

// Index of the best intermediate subgraph (number of removals applied).
//
// # Safety
// `result` must be a live handle or null.
size_t dmcs_result_best_iteration(const struct DmcsResult *result);

// Total nodes removed during the search.
//
// # Safety
// `result` must be a live handle or null.
size_t dmcs_result_removals(const struct DmcsResult *result);

// Releases a result handle; accepts null.
//
// # Safety
// `result` must have come from `dmcs_search`.
void dmcs_result_free(struct DmcsResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DMCS_H */
