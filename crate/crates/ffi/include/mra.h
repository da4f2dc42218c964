#ifndef MRA_H
#define MRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MraStatus {
  MRA_STATUS_OK = 0,
  MRA_STATUS_NULL_POINTER = 1,
  MRA_STATUS_INVALID_ARGUMENT = 2,
  MRA_STATUS_GENERATION_FAILED = 3,
  MRA_STATUS_PARSE_ERROR = 4,
  MRA_STATUS_ROUTING_ERROR = 5,
  MRA_STATUS_REFINE_ERROR = 6,
  MRA_STATUS_SOLVER_ERROR = 7,
  MRA_STATUS_SIMULATION_ERROR = 8,
  MRA_STATUS_METRICS_ERROR = 9,
  MRA_STATUS_PANIC = 10,
} MraStatus;

/**
 * Opaque mesh handle.
 */
typedef struct MraNetwork MraNetwork;

/**
 * Opaque path-set handle; remembers the routing setup that produced it so
 * refinement can enlarge single paths the same way.
 */
typedef struct MraPathSet MraPathSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *mra_last_error_message(void);

void mra_string_free(char *s);

enum MraStatus mra_comm_radius(size_t n, size_t delta, double *out);

enum MraStatus mra_network_generate(size_t n, size_t delta, uint64_t seed, struct MraNetwork **out);

enum MraStatus mra_network_from_json(const char *json, struct MraNetwork **out);

enum MraStatus mra_network_to_json(const struct MraNetwork *net, char **out);

/**
 * Number of nodes, or 0 for a NULL handle.
 */
size_t mra_network_node_count(const struct MraNetwork *net);

enum MraStatus mra_network_are_neighbors(const struct MraNetwork *net,
                                         size_t u,
                                         size_t v,
                                         bool *out);

void mra_network_free(struct MraNetwork *net);

/**
 * Routes `i -> j`. `method` is one of `SPA`, `K_DISJOINT`, `MPR_SPA`,
 * `MPR_K_DISJOINT`; `k = 0` picks the method's default path budget.
 */
enum MraStatus mra_route(const struct MraNetwork *net,
                         size_t i,
                         size_t j,
                         const char *method,
                         size_t k,
                         struct MraPathSet **out);

/**
 * Number of paths, or 0 for a NULL handle.
 */
size_t mra_path_set_len(const struct MraPathSet *ps);

/**
 * Borrows the node sequence of path `index`; valid while `ps` lives.
 */
enum MraStatus mra_path_set_path(const struct MraPathSet *ps,
                                 size_t index,
                                 const size_t **nodes,
                                 size_t *len);

enum MraStatus mra_path_set_to_json(const struct MraPathSet *ps, char **out);

enum MraStatus mra_path_set_from_json(const char *json, struct MraPathSet **out);

void mra_path_set_free(struct MraPathSet *ps);

/**
 * Refines a path set in `net`; the result is a new handle.
 */
enum MraStatus mra_refine(const struct MraNetwork *net,
                          const struct MraPathSet *ps,
                          struct MraPathSet **out);

/**
 * Exact maximum-weight independent set. Weights are `numer[v] / denom[v]`;
 * `edges` holds `edge_count` pairs as `2 * edge_count` vertex indices.
 * `out_vertices` must have room for `order` entries; the selection is
 * written in ascending order and its size to `out_count`.
 */
enum MraStatus mra_mwis_solve(size_t order,
                              const uint64_t *numer,
                              const uint64_t *denom,
                              const size_t *edges,
                              size_t edge_count,
                              size_t *out_vertices,
                              size_t *out_count,
                              double *out_weight);

/**
 * Jain fairness index of `len` nonnegative counts.
 */
enum MraStatus mra_jain_index(const uint64_t *counts, size_t len, double *out);

/**
 * Simulates the union of `count` path sets and reports delivered packets
 * per measured slot. Other simulation settings take their defaults.
 */
enum MraStatus mra_simulate(const struct MraNetwork *net,
                            const struct MraPathSet *const *sets,
                            size_t count,
                            uint64_t total_slots,
                            uint64_t warmup_slots,
                            double *out_packets_per_slot);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MRA_H */
