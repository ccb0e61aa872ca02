#ifndef SCC_FFI_H
#define SCC_FFI_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SccStatus {
  SCC_STATUS_OK = 0,
  SCC_STATUS_NULL_POINTER = 1,
  SCC_STATUS_DOMAIN = 2,
  SCC_STATUS_RANGE = 3,
  SCC_STATUS_MODEL_INVALID = 4,
  SCC_STATUS_TOO_LARGE = 5,
  SCC_STATUS_FORMAT = 6,
  SCC_STATUS_INVALID_UTF8 = 7,
  SCC_STATUS_PANIC = 8,
} SccStatus;

typedef enum SccRuleKind {
  /**
   * `param` is the alternative.
   */
  SCC_RULE_KIND_CONSTANT = 0,
  /**
   * `param` is the voter.
   */
  SCC_RULE_KIND_DICTATORIAL = 1,
  SCC_RULE_KIND_OMNINOMINATION = 2,
  SCC_RULE_KIND_PLURALITY_TIES = 3,
  SCC_RULE_KIND_BORDA_SET = 4,
  SCC_RULE_KIND_PARETO_SET = 5,
} SccRuleKind;

typedef enum SccProperty {
  SCC_PROPERTY_SPO = 0,
  SCC_PROPERTY_SPP = 1,
  SCC_PROPERTY_ONTO = 2,
  SCC_PROPERTY_WEAK_DICTATOR = 3,
  /**
   * Both SPO and SPP.
   */
  SCC_PROPERTY_TAYLOR = 4,
  /**
   * No expected-utility manipulation under the half-half model.
   */
  SCC_PROPERTY_DS_HALF = 5,
} SccProperty;

typedef enum SccMode {
  SCC_MODE_OPTIMIST = 0,
  SCC_MODE_PESSIMIST = 1,
} SccMode;

typedef enum SccModel {
  SCC_MODEL_HALF_HALF = 0,
  SCC_MODEL_UNIFORM_OVER_SET = 1,
  /**
   * Uses the accompanying seed.
   */
  SCC_MODEL_SEEDED_RANDOM = 2,
} SccModel;

/**
 * Opaque correspondence handle.
 */
typedef struct SccHandle SccHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next call into this library on the same thread.
 */
const char *scc_last_error(void);

/**
 * Creates a built-in rule over `voters` voters and `alternatives` alternatives.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SccStatus scc_new_rule(enum SccRuleKind kind,
                            uint32_t param,
                            uint32_t voters,
                            uint32_t alternatives,
                            struct SccHandle **out);

/**
 * Parses a correspondence from JSON text in the file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SccStatus scc_from_json(const char *json, struct SccHandle **out);

/**
 * Loads a correspondence file from `path`.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SccStatus scc_load(const char *path, struct SccHandle **out);

/**
 * Rebuilds an explicit table from its table code.
 *
 * # Safety
 * `code` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SccStatus scc_from_code(const char *code, struct SccHandle **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from this library and not be used afterwards.
 */
void scc_free(struct SccHandle *h);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void scc_string_free(char *s);

/**
 * Number of voters, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uint32_t scc_voters(const struct SccHandle *h);

/**
 * Number of alternatives, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uint32_t scc_alternatives(const struct SccHandle *h);

/**
 * Evaluates the correspondence on a profile given as `voters * alternatives`
 * alternative ids, one ballot after another, most preferred first. Writes
 * the outcome as a bitmask (bit `a` set iff `a` is chosen).
 *
 * # Safety
 * `ballots` must point to `len` readable bytes; `out_mask` must be valid for writes.
 */
enum SccStatus scc_evaluate(const struct SccHandle *h,
                            const uint8_t *ballots,
                            size_t len,
                            uint8_t *out_mask);

/**
 * Decides `property`, writing whether it holds.
 *
 * # Safety
 * `h` must be a live handle; `out_holds` must be valid for writes.
 */
enum SccStatus scc_check(const struct SccHandle *h, enum SccProperty property, bool *out_holds);

/**
 * Weak dictators as a bitmask over voters (bit `i` set iff voter `i` is one).
 *
 * # Safety
 * `h` must be a live handle; `out_mask` must be valid for writes.
 */
enum SccStatus scc_weak_dictators(const struct SccHandle *h, uint64_t *out_mask);

/**
 * First optimist/pessimist manipulation as JSON, or null in `*out` when none exists.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum SccStatus scc_taylor_witness_json(const struct SccHandle *h, enum SccMode mode, char **out);

/**
 * First expected-utility manipulation under `model` as JSON (utilities as
 * `"num/den"` strings), or null in `*out` when none exists.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum SccStatus scc_ds_witness_json(const struct SccHandle *h,
                                   enum SccModel model,
                                   uint64_t seed,
                                   char **out);

/**
 * The table code of the correspondence.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for writes.
 */
enum SccStatus scc_table_code(const struct SccHandle *h, char **out);

/**
 * Runs a verification and writes the report as JSON.
 *
 * With `exhaustive` false, `count` seeded uniform samples follow the
 * fixtures. With `equivalence` false only the weak-dictator check runs.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SccStatus scc_verify_json(uint32_t voters,
                               uint32_t alternatives,
                               bool exhaustive,
                               uint64_t count,
                               uint64_t seed,
                               uint32_t models,
                               uint32_t jobs,
                               bool equivalence,
                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCC_FFI_H */
