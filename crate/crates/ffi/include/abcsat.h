#ifndef ABCSAT_H
#define ABCSAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AbcsatStatus {
  ABCSAT_STATUS_OK = 0,
  /*
   A required pointer was null or a string was not UTF-8.
   */
  ABCSAT_STATUS_NULL_OR_UTF8 = 1,
  /*
   Malformed parameters, names, profiles or JSON.
   */
  ABCSAT_STATUS_INVALID_INPUT = 2,
  /*
   The profile is not in the table's domain.
   */
  ABCSAT_STATUS_OUTSIDE_DOMAIN = 3,
  /*
   The instance would enumerate more profiles than the cap allows.
   */
  ABCSAT_STATUS_CAP_EXCEEDED = 4,
  /*
   A decoded model or proof step did not check out.
   */
  ABCSAT_STATUS_CHECK_FAILED = 5,
  /*
   The solver hit its conflict limit.
   */
  ABCSAT_STATUS_ABORTED = 6,
  ABCSAT_STATUS_IO = 7,
  /*
   A Rust panic was caught at the boundary.
   */
  ABCSAT_STATUS_INTERNAL = 8,
} AbcsatStatus;

typedef enum AbcsatVerdict {
  ABCSAT_VERDICT_UNKNOWN = 0,
  ABCSAT_VERDICT_SAT = 10,
  ABCSAT_VERDICT_UNSAT = 20,
} AbcsatVerdict;

/*
 A CNF encoding with its variable map.
 */
typedef struct AbcsatEncoding AbcsatEncoding;

/*
 A rule table: one committee per admissible profile.
 */
typedef struct AbcsatTable AbcsatTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the
 next failing call on the same thread.
 */
const char *abcsat_last_error(void);

/*
 Frees a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void abcsat_string_free(char *s);

/*
 Builds the table of `rule` ("av" or "pav") over all admissible profiles.

 # Safety
 `rule` must be a valid C string and `out` a valid pointer.
 */
enum AbcsatStatus abcsat_table_build(const char *rule,
                                     uint32_t m,
                                     uint32_t n,
                                     uint32_t k,
                                     struct AbcsatTable **out);

/*
 Parses a table from its JSON document.

 # Safety
 `json` must be a valid C string and `out` a valid pointer.
 */
enum AbcsatStatus abcsat_table_from_json(const char *json, struct AbcsatTable **out);

/*
 Serialises a table to JSON.

 # Safety
 `table` must be a live handle and `out` a valid pointer.
 */
enum AbcsatStatus abcsat_table_to_json(const struct AbcsatTable *table, char **out);

/*
 Number of profiles in the table's domain.

 # Safety
 `table` must be a live handle and `out` a valid pointer.
 */
enum AbcsatStatus abcsat_table_len(const struct AbcsatTable *table, size_t *out);

/*
 Looks up the committee for a profile such as "ab,c,abd".

 # Safety
 `table` must be a live handle, `profile` a valid C string and `out` a
 valid pointer.
 */
enum AbcsatStatus abcsat_table_lookup(const struct AbcsatTable *table,
                                      const char *profile,
                                      char **out);

/*
 Checks an axiom by name. On a violation `witness` (if non-null) receives a
 description of the first one; otherwise it is set to null.

 # Safety
 `table` must be a live handle, `axiom` a valid C string, `passed` a valid
 pointer and `witness` null or valid.
 */
enum AbcsatStatus abcsat_table_check(const struct AbcsatTable *table,
                                     const char *axiom,
                                     bool *passed,
                                     char **witness);

/*
 # Safety
 `table` must be null or a live handle; it is invalid afterwards.
 */
void abcsat_table_free(struct AbcsatTable *table);

/*
 Encodes the existence of a rule with the given axioms. `proportionality`
 is "hare", "droop" or "jr-party"; `sp` is "subset" or "superset".

 # Safety
 The strings must be valid C strings and `out` a valid pointer.
 */
enum AbcsatStatus abcsat_encode(uint32_t m,
                                uint32_t n,
                                uint32_t k,
                                const char *proportionality,
                                const char *sp,
                                bool weak_efficiency,
                                bool symmetry_break,
                                struct AbcsatEncoding **out);

/*
 Variable and clause counts of an encoding.

 # Safety
 `enc` must be a live handle and the out-pointers valid.
 */
enum AbcsatStatus abcsat_encoding_size(const struct AbcsatEncoding *enc,
                                       uint32_t *vars,
                                       size_t *clauses);

/*
 The encoding in DIMACS form, with variable-name comments.

 # Safety
 `enc` must be a live handle and `out` a valid pointer.
 */
enum AbcsatStatus abcsat_encoding_to_dimacs(const struct AbcsatEncoding *enc, char **out);

/*
 Solves an encoding. `conflict_limit` 0 means no limit. On SAT, `table`
 (if non-null) receives the decoded rule; otherwise it is set to null.
 Hitting the limit returns `Aborted` with verdict `Unknown`.

 # Safety
 `enc` must be a live handle, `verdict` valid and `table` null or valid.
 */
enum AbcsatStatus abcsat_encoding_solve(const struct AbcsatEncoding *enc,
                                        uint64_t conflict_limit,
                                        enum AbcsatVerdict *verdict,
                                        struct AbcsatTable **table);

/*
 # Safety
 `enc` must be null or a live handle; it is invalid afterwards.
 */
void abcsat_encoding_free(struct AbcsatEncoding *enc);

/*
 Replays the bundled base-case proof. Returns `CheckFailed` if any step or
 the final contradiction does not verify.

 # Safety
 The out-pointers must be valid.
 */
enum AbcsatStatus abcsat_replay_base_case(size_t *counted, size_t *verified);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ABCSAT_H */
