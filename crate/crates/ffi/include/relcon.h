#ifndef RELCON_H
#define RELCON_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum RelconStatus {
  RELCON_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RELCON_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  RELCON_STATUS_INVALID_UTF8 = 2,
  /**
   * A document failed to parse or violated a precondition.
   */
  RELCON_STATUS_INVALID_INPUT = 3,
  /**
   * Operands live on different universes or in different dimensions.
   */
  RELCON_STATUS_INCOMPATIBLE = 4,
  /**
   * The operands are inconsistent, so no completion exists.
   */
  RELCON_STATUS_INCONSISTENT = 5,
  /**
   * An internal failure inside the library; the message describes it.
   */
  RELCON_STATUS_INTERNAL = 6,
} RelconStatus;

/**
 * A finitely generated rational cone.
 */
typedef struct RelconCone RelconCone;

/**
 * A validated market of fair exchanges and down-trades.
 */
typedef struct RelconMarket RelconMarket;

/**
 * A relation on a finite universe.
 */
typedef struct RelconRelation RelconRelation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *relcon_version(void);

/**
 * Message of the last failed call on this thread, or null after a
 * successful call. Valid until the next call on this thread.
 */
const char *relcon_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string obtained from this library and not yet freed.
 */
void relcon_string_free(char *s);

/**
 * Builds a relation from a `{"universe": [..], "pairs": [[a, b], ..]}`
 * document.
 *
 * # Safety
 * `json` must be null or NUL-terminated; `out` must be null or writable.
 */
enum RelconStatus relcon_relation_from_json(const char *json, struct RelconRelation **out);

/**
 * Builds both relations of a `{"universe", "relation_1", "relation_2"}`
 * document.
 *
 * # Safety
 * `json` must be null or NUL-terminated; `out1` and `out2` must be null or
 * writable.
 */
enum RelconStatus relcon_relation_pair_from_json(const char *json,
                                                 struct RelconRelation **out1,
                                                 struct RelconRelation **out2);

/**
 * # Safety
 * `r` must be null or a relation from this library not yet freed.
 */
void relcon_relation_free(struct RelconRelation *r);

/**
 * Serializes a relation as a relation document.
 *
 * # Safety
 * `r` must be null or a live relation; `out_json` must be null or writable.
 */
enum RelconStatus relcon_relation_to_json(const struct RelconRelation *r, char **out_json);

/**
 * Reports which order axioms a relation satisfies, as a JSON object of
 * booleans.
 *
 * # Safety
 * `r` must be null or a live relation; `out_json` must be null or writable.
 */
enum RelconStatus relcon_relation_classify(const struct RelconRelation *r, char **out_json);

/**
 * Decides chain consistency of two transitive relations. When inconsistent
 * and `out_witness_json` is non-null, it receives the witness chain as
 * `{"nodes": [..], "tags": [..]}`; otherwise it is set to null.
 *
 * # Safety
 * Handles must be null or live; `out_consistent` must be null or writable;
 * `out_witness_json` is optional.
 */
enum RelconStatus relcon_chain_consistent(const struct RelconRelation *r1,
                                          const struct RelconRelation *r2,
                                          bool *out_consistent,
                                          char **out_witness_json);

/**
 * Total preorder consistently extending both relations. Fails with
 * `RELCON_STATUS_INCONSISTENT` when the pair is not chain-consistent.
 *
 * # Safety
 * Handles must be null or live; `out` must be null or writable.
 */
enum RelconStatus relcon_common_completion(const struct RelconRelation *r1,
                                           const struct RelconRelation *r2,
                                           struct RelconRelation **out);

/**
 * Whether the common completion of a consistent pair is unique.
 *
 * # Safety
 * Handles must be null or live; `out_unique` must be null or writable.
 */
enum RelconStatus relcon_completion_unique(const struct RelconRelation *r1,
                                           const struct RelconRelation *r2,
                                           bool *out_unique);

/**
 * Builds a cone from a `{"dim": d, "generators": [[..], ..]}` document.
 *
 * # Safety
 * `json` must be null or NUL-terminated; `out` must be null or writable.
 */
enum RelconStatus relcon_cone_from_json(const char *json, struct RelconCone **out);

/**
 * Builds both cones of a `{"dim", "cone_1", "cone_2"}` document.
 *
 * # Safety
 * `json` must be null or NUL-terminated; `out1` and `out2` must be null or
 * writable.
 */
enum RelconStatus relcon_cone_pair_from_json(const char *json,
                                             struct RelconCone **out1,
                                             struct RelconCone **out2);

/**
 * # Safety
 * `c` must be null or a cone from this library not yet freed.
 */
void relcon_cone_free(struct RelconCone *c);

/**
 * Facets, linear part basis and extreme rays of a cone as JSON.
 *
 * # Safety
 * `c` must be null or a live cone; `out_json` must be null or writable.
 */
enum RelconStatus relcon_cone_describe(const struct RelconCone *c, char **out_json);

/**
 * Decides path consistency of two cones. When inconsistent and
 * `out_witness_json` is non-null, it receives
 * `{"delta1", "delta2", "strict_side"}`; otherwise it is set to null.
 *
 * # Safety
 * Handles must be null or live; `out_consistent` must be null or writable;
 * `out_witness_json` is optional.
 */
enum RelconStatus relcon_path_consistent(const struct RelconCone *c1,
                                         const struct RelconCone *c2,
                                         bool *out_consistent,
                                         char **out_witness_json);

/**
 * Linear functional, as a JSON array of rational strings, whose halfspace
 * completes both cones. Fails with `RELCON_STATUS_INCONSISTENT` when the
 * cones are not path-consistent.
 *
 * # Safety
 * Handles must be null or live; `out_json` must be null or writable.
 */
enum RelconStatus relcon_cone_completion(const struct RelconCone *c1,
                                         const struct RelconCone *c2,
                                         char **out_json);

/**
 * Looks for a Pareto improvement between two cone preferences. When one
 * exists and `out_json` is non-null, it receives
 * `{"delta", "strict_for_1", "strict_for_2"}`; otherwise it is set to null.
 *
 * # Safety
 * Handles must be null or live; `out_found` must be null or writable;
 * `out_json` is optional.
 */
enum RelconStatus relcon_pareto_improvement(const struct RelconCone *c1,
                                            const struct RelconCone *c2,
                                            bool *out_found,
                                            char **out_json);

/**
 * Builds and validates a market from a
 * `{"goods", "fair_exchange", "down_trades"}` document.
 *
 * # Safety
 * `json` must be null or NUL-terminated; `out` must be null or writable.
 */
enum RelconStatus relcon_market_from_json(const char *json, struct RelconMarket **out);

/**
 * # Safety
 * `m` must be null or a market from this library not yet freed.
 */
void relcon_market_free(struct RelconMarket *m);

/**
 * Looks for an arbitrage chain. When one exists and `out_chain_json` is
 * non-null, it receives `{"goods": [..], "links": [..]}`; otherwise it is
 * set to null.
 *
 * # Safety
 * `m` must be null or live; `out_found` must be null or writable;
 * `out_chain_json` is optional.
 */
enum RelconStatus relcon_market_detect_arbitrage(const struct RelconMarket *m,
                                                 bool *out_found,
                                                 char **out_chain_json);

/**
 * Total preference order consistent with an arbitrage-free market. Fails
 * with `RELCON_STATUS_INCONSISTENT` when the market admits arbitrage.
 *
 * # Safety
 * `m` must be null or live; `out` must be null or writable; `out_unique`
 * is optional.
 */
enum RelconStatus relcon_market_complete_preferences(const struct RelconMarket *m,
                                                     struct RelconRelation **out,
                                                     bool *out_unique);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELCON_H */
