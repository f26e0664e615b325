#ifndef SLSTAR_H
#define SLSTAR_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes. Zero is success; each library error has its own code.
typedef enum SlstarStatus {
  SLSTAR_STATUS_OK = 0,
  SLSTAR_STATUS_NULL_POINTER = 1,
  SLSTAR_STATUS_INVALID_UTF8 = 2,
  SLSTAR_STATUS_PARSE = 3,
  SLSTAR_STATUS_INVALID_PARAMETERS = 4,
  SLSTAR_STATUS_DESCRIPTOR_MISMATCH = 5,
  SLSTAR_STATUS_NOT_UNIT = 6,
  SLSTAR_STATUS_NOT_SYMMETRIC = 7,
  SLSTAR_STATUS_INFINITE_RING = 8,
  SLSTAR_STATUS_UNSUPPORTED = 9,
  SLSTAR_STATUS_NOT_COPRIME = 10,
  SLSTAR_STATUS_SYMMETRY_VIOLATION = 11,
  SLSTAR_STATUS_SEARCH_EXHAUSTED = 12,
  SLSTAR_STATUS_POSTCONDITION_VIOLATION = 13,
  SLSTAR_STATUS_WRONG_CHARACTERISTIC = 14,
  SLSTAR_STATUS_NOT_STAR_EUCLIDEAN = 15,
  SLSTAR_STATUS_HYPOTHESES_NOT_MET = 16,
  SLSTAR_STATUS_STEP_EXISTS = 17,
  SLSTAR_STATUS_NO_UNIT_ENTRY = 18,
  SLSTAR_STATUS_VERIFICATION_FAILED = 19,
  SLSTAR_STATUS_NOT_GL_STAR = 20,
  SLSTAR_STATUS_NOT_SL_STAR = 21,
  SLSTAR_STATUS_CAP_EXCEEDED = 22,
  SLSTAR_STATUS_DECOMPOSITION_FAILED = 23,
  SLSTAR_STATUS_TAIL_UNSOLVED = 24,
  SLSTAR_STATUS_USAGE = 25,
  SLSTAR_STATUS_IO = 26,
  SLSTAR_STATUS_PANIC = 99,
} SlstarStatus;

// Outcome of an experiment run.
typedef enum SlstarVerdict {
  SLSTAR_VERDICT_PASS = 0,
  SLSTAR_VERDICT_REFUSAL = 1,
  SLSTAR_VERDICT_FAIL = 2,
} SlstarVerdict;

// An element bound to its ring.
typedef struct SlstarElement SlstarElement;

// A ring with involution.
typedef struct SlstarRing SlstarRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *slstar_last_error(void);

// Library version as a static NUL-terminated string.
const char *slstar_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` is null or a string returned through a `char **` out parameter.
void slstar_string_free(char *s);

// Parses a ring descriptor such as `Mat(2,GF(3))`.
//
// # Safety
// `desc` is a NUL-terminated string; `out` is writable.
enum SlstarStatus slstar_ring_parse(const char *desc, struct SlstarRing **out);

// # Safety
// `ring` is null or a handle from [`slstar_ring_parse`] not yet freed.
void slstar_ring_free(struct SlstarRing *ring);

// Canonical descriptor of `ring`.
//
// # Safety
// `ring` is a live handle; `out` is writable.
enum SlstarStatus slstar_ring_descriptor(const struct SlstarRing *ring, char **out);

// Number of elements; fails with `InfiniteRing` for infinite rings.
//
// # Safety
// `ring` is a live handle; `out` is writable.
enum SlstarStatus slstar_ring_size(const struct SlstarRing *ring, uint64_t *out);

// Parses an element literal of `ring`.
//
// # Safety
// `ring` is a live handle; `literal` is a NUL-terminated string; `out` is writable.
enum SlstarStatus slstar_element_parse(const struct SlstarRing *ring,
                                       const char *literal,
                                       struct SlstarElement **out);

// # Safety
// `x` is null or a live element handle.
void slstar_element_free(struct SlstarElement *x);

// Canonical literal of `x`.
//
// # Safety
// `x` is a live handle; `out` is writable.
enum SlstarStatus slstar_element_format(const struct SlstarElement *x, char **out);

// Writes true when `x` and `y` are the same element of the same ring.
//
// # Safety
// `x`, `y` are live handles; `out` is writable.
enum SlstarStatus slstar_element_equal(const struct SlstarElement *x,
                                       const struct SlstarElement *y,
                                       bool *out);

// # Safety
// `x`, `y` are live handles of the same ring; `out` is writable.
enum SlstarStatus slstar_element_add(const struct SlstarElement *x,
                                     const struct SlstarElement *y,
                                     struct SlstarElement **out);

// # Safety
// `x`, `y` are live handles of the same ring; `out` is writable.
enum SlstarStatus slstar_element_sub(const struct SlstarElement *x,
                                     const struct SlstarElement *y,
                                     struct SlstarElement **out);

// # Safety
// `x`, `y` are live handles of the same ring; `out` is writable.
enum SlstarStatus slstar_element_mul(const struct SlstarElement *x,
                                     const struct SlstarElement *y,
                                     struct SlstarElement **out);

// The involution `x*`.
//
// # Safety
// `x` is a live handle; `out` is writable.
enum SlstarStatus slstar_element_involute(const struct SlstarElement *x,
                                          struct SlstarElement **out);

// Two-sided inverse; fails with `NotUnit`.
//
// # Safety
// `x` is a live handle; `out` is writable.
enum SlstarStatus slstar_element_invert(const struct SlstarElement *x, struct SlstarElement **out);

// # Safety
// `x` is a live handle; `out` is writable.
enum SlstarStatus slstar_element_is_unit(const struct SlstarElement *x, bool *out);

// # Safety
// `x` is a live handle; `out` is writable.
enum SlstarStatus slstar_element_is_symmetric(const struct SlstarElement *x, bool *out);

// First step `a = s c + r` of a verified division chain, with `s`
// symmetric; `steps` receives the chain length.
//
// # Safety
// `a`, `c` are live handles of the same ring; all out pointers are writable.
enum SlstarStatus slstar_divide(const struct SlstarElement *a,
                                const struct SlstarElement *c,
                                struct SlstarElement **s_out,
                                struct SlstarElement **r_out,
                                uintptr_t *steps);

// Writes whether the block matrix literal `g` lies in `SL_*(2, ring)`.
//
// # Safety
// `ring` is a live handle; `g` is a NUL-terminated string; `out` is writable.
enum SlstarStatus slstar_sl_check(const struct SlstarRing *ring, const char *g, bool *out);

// Verified Bruhat word of the block matrix literal `g`.
//
// # Safety
// `ring` is a live handle; `g` is a NUL-terminated string; `out` is writable.
enum SlstarStatus slstar_sl_factor(const struct SlstarRing *ring, const char *g, char **out);

// Runs a named experiment and returns its rendered report.
//
// # Safety
// `name` is a NUL-terminated string; out pointers are writable.
enum SlstarStatus slstar_experiment_run(const char *name,
                                        uint64_t seed,
                                        enum SlstarVerdict *verdict,
                                        char **report);

// Number of available experiments.
uintptr_t slstar_experiment_count(void);

// Name of experiment `i`, or null when out of range. The string is owned by
// the caller.
char *slstar_experiment_name(uintptr_t i);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SLSTAR_H */
