#ifndef FMB_H
#define FMB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Obstruction rule set, passed as `uint32_t`.
 */
#define FMB_RULES_SPAN 0

#define FMB_RULES_INDEPENDENCE 1

/**
 * Result of every fallible call. Zero is success.
 */
typedef enum FmbStatus {
  FMB_STATUS_OK = 0,
  FMB_STATUS_NULL_POINTER = 1,
  FMB_STATUS_INVALID_UTF8 = 2,
  FMB_STATUS_INVALID_ARGUMENT = 3,
  FMB_STATUS_UNSUPPORTED_FIELD = 4,
  FMB_STATUS_UNKNOWN_GROUP = 5,
  FMB_STATUS_INVALID_PRESENTATION = 6,
  FMB_STATUS_ORDER_MISMATCH = 7,
  FMB_STATUS_PARAMETER_OUT_OF_RANGE = 8,
  FMB_STATUS_ALGEBRA_MISMATCH = 9,
  FMB_STATUS_NOT_APPLICABLE = 10,
  FMB_STATUS_BUDGET_EXCEEDED = 11,
  FMB_STATUS_MALFORMED_INPUT = 12,
  FMB_STATUS_INTERNAL = 13,
  FMB_STATUS_PANIC = 14,
} FmbStatus;

/**
 * Nonexistence certificate verdict.
 */
typedef enum FmbVerdict {
  FMB_VERDICT_OBSTRUCTED = 0,
  FMB_VERDICT_INCONCLUSIVE = 1,
} FmbVerdict;

/**
 * Full search outcome.
 */
typedef enum FmbSearchOutcome {
  FMB_SEARCH_OUTCOME_FOUND = 0,
  FMB_SEARCH_OUTCOME_EXHAUSTED = 1,
  FMB_SEARCH_OUTCOME_BUDGET_EXHAUSTED = 2,
} FmbSearchOutcome;

/**
 * Obstruction report for one (group, field, degree, rules).
 */
typedef struct FmbCertificate FmbCertificate;

/**
 * Group algebra `K G` with its Jennings filtration.
 */
typedef struct FmbStructure FmbStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fmb_version(void);

/**
 * Status of the most recent failure on this thread, or `FMB_STATUS_OK`.
 */
enum FmbStatus fmb_last_error_code(void);

/**
 * Message of the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *fmb_last_error_message(void);

/**
 * Clears the last error of this thread.
 */
void fmb_clear_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void fmb_string_free(char *s);

/**
 * Realizes the catalog group `group` (for example `"G5(m=4)"` or
 * `"D8xC2"`) and builds its group algebra over GF(`p`^`k`).
 *
 * # Safety
 * `group` is a NUL-terminated string; `out` is valid for writes.
 */
enum FmbStatus fmb_structure_new(const char *group,
                                 uint32_t p,
                                 uint32_t k,
                                 struct FmbStructure **out);

/**
 * Releases a structure. Null is ignored.
 *
 * # Safety
 * `h` is null or a live handle not yet freed.
 */
void fmb_structure_free(struct FmbStructure *h);

/**
 * Group order, equal to the algebra dimension.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum FmbStatus fmb_structure_order(const struct FmbStructure *h, size_t *out);

/**
 * Nilpotency index of the augmentation ideal: the least `t` with `I^t = 0`.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum FmbStatus fmb_structure_nilpotency(const struct FmbStructure *h, size_t *out);

/**
 * Human-readable group label; free with [`fmb_string_free`].
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum FmbStatus fmb_structure_label(const struct FmbStructure *h, char **out);

/**
 * Verifies a basis file (JSON text) against the structure. `pass` is set
 * to the overall verdict; a malformed or mismatched file is an error.
 *
 * # Safety
 * `h` is a live handle; `basis_json` is a NUL-terminated string; `pass` is
 * valid for writes.
 */
enum FmbStatus fmb_verify_json(const struct FmbStructure *h, const char *basis_json, bool *pass);

/**
 * Runs the obstruction engine at `degree` (2 or 3) with `rules`
 * (`FMB_RULES_SPAN` or `FMB_RULES_INDEPENDENCE`).
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum FmbStatus fmb_certify(const struct FmbStructure *h,
                           uint32_t degree,
                           uint32_t rules,
                           struct FmbCertificate **out);

/**
 * Releases a certificate. Null is ignored.
 *
 * # Safety
 * `h` is null or a live handle not yet freed.
 */
void fmb_certificate_free(struct FmbCertificate *h);

/**
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum FmbStatus fmb_certificate_verdict(const struct FmbCertificate *h, enum FmbVerdict *out);

/**
 * Number of invertible leading matrices examined.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum FmbStatus fmb_certificate_matrices_examined(const struct FmbCertificate *h, uint64_t *out);

/**
 * Number of leading matrices that pass every condition.
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum FmbStatus fmb_certificate_survivors(const struct FmbCertificate *h, size_t *out);

/**
 * Full report as JSON; free with [`fmb_string_free`].
 *
 * # Safety
 * `h` is a live handle; `out` is valid for writes.
 */
enum FmbStatus fmb_certificate_to_json(const struct FmbCertificate *h, char **out);

/**
 * Exhaustive search for a basis within `budget` nodes. On `Found`,
 * `basis_json` (if non-null) receives the basis file; otherwise it is set
 * to null.
 *
 * # Safety
 * `h` is a live handle; `outcome` is valid for writes; `basis_json` is
 * null or valid for writes.
 */
enum FmbStatus fmb_search(const struct FmbStructure *h,
                          uint64_t budget,
                          enum FmbSearchOutcome *outcome,
                          char **basis_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FMB_H */
