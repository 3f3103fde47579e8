#ifndef MISO_DOF_H
#define MISO_DOF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Values accepted as the `kind` argument of `md_scheme_build`.
 */
typedef enum MdSchemeKind {
  MD_SCHEME_KIND_X11 = 0,
  MD_SCHEME_KIND_X12 = 1,
  MD_SCHEME_KIND_X13 = 2,
  MD_SCHEME_KIND_X2 = 3,
  MD_SCHEME_KIND_X3 = 4,
} MdSchemeKind;

/**
 * Status codes returned by every fallible function.
 */
typedef enum MdStatus {
  MD_STATUS_OK = 0,
  MD_STATUS_NULL_POINTER = 1,
  MD_STATUS_MALFORMED = 2,
  MD_STATUS_INVALID_PROFILE = 3,
  MD_STATUS_DOMAIN = 4,
  MD_STATUS_INFEASIBLE = 5,
  MD_STATUS_WRONG_CASE = 6,
  MD_STATUS_INVALID_DELTA = 7,
  MD_STATUS_DEGENERATE = 8,
  MD_STATUS_OUT_OF_RANGE = 9,
  MD_STATUS_GRID = 10,
  MD_STATUS_BUDGET = 11,
  MD_STATUS_CONSTRUCTION = 12,
  MD_STATUS_PANIC = 13,
} MdStatus;

typedef struct MdProfile MdProfile;

typedef struct MdRegion MdRegion;

typedef struct MdScheme MdScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. Valid until the next failing call.
 */
const char *md_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *md_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void md_string_free(char *s);

/**
 * Parses a profile from JSON text (`{"T":…, "alpha1":[…], "beta":…}`).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` writable.
 */
enum MdStatus md_profile_from_json(const char *json, struct MdProfile **out);

/**
 * Builds a profile from per-slot exponents. `alpha2` may be null to copy `alpha1`.
 *
 * # Safety
 * `alpha1` (and `alpha2` when non-null) must point to `slots` doubles; `out` must be writable.
 */
enum MdStatus md_profile_new(const double *alpha1,
                             const double *alpha2,
                             size_t slots,
                             double beta1,
                             double beta2,
                             struct MdProfile **out);

/**
 * # Safety
 * `p` must be null or a live profile handle.
 */
void md_profile_free(struct MdProfile *p);

/**
 * Block length `T`, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live profile handle.
 */
size_t md_profile_slots(const struct MdProfile *p);

/**
 * Average current exponent of `user` (1 or 2).
 *
 * # Safety
 * `p` must be a live profile handle and `out` writable.
 */
enum MdStatus md_profile_average(const struct MdProfile *p, int user, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum MdStatus md_region_theorem1(double abar, struct MdRegion **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum MdStatus md_region_theorem2(double abar, double beta, struct MdRegion **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum MdStatus md_region_theorem4(double abar1, double abar2, struct MdRegion **out);

/**
 * # Safety
 * `r` must be null or a live region handle.
 */
void md_region_free(struct MdRegion *r);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live region handle.
 */
size_t md_region_vertex_count(const struct MdRegion *r);

/**
 * Vertex `index` (0-based) in counter-clockwise order starting at the origin.
 *
 * # Safety
 * `r` must be a live region handle; `d1` and `d2` writable.
 */
enum MdStatus md_region_vertex(const struct MdRegion *r, size_t index, double *d1, double *d2);

/**
 * 1 if the region is the optimal region, 0 for an inner bound or a null handle.
 *
 * # Safety
 * `r` must be null or a live region handle.
 */
int md_region_is_optimal(const struct MdRegion *r);

/**
 * 1 if `(d1, d2)` lies in the region (tolerance 1e-9), else 0.
 *
 * # Safety
 * `r` must be null or a live region handle.
 */
int md_region_contains(const struct MdRegion *r, double d1, double d2);

/**
 * Minimum `(ᾱ, β)` for symmetric DoF `dprime`.
 *
 * # Safety
 * `abar` and `beta` must be writable.
 */
enum MdStatus md_solve_min_quality(double dprime, double *abar, double *beta);

/**
 * Builds a scheme; `kind` is an `MdSchemeKind` value. Pass NaN for `delta` to use the default margin.
 *
 * # Safety
 * `profile` must be a live profile handle and `out` writable.
 */
enum MdStatus md_scheme_build(int kind,
                              const struct MdProfile *profile,
                              size_t phases,
                              double t1,
                              double delta,
                              struct MdScheme **out);

/**
 * # Safety
 * `s` must be null or a live scheme handle.
 */
void md_scheme_free(struct MdScheme *s);

/**
 * Number of phases, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live scheme handle.
 */
size_t md_scheme_phase_count(const struct MdScheme *s);

/**
 * Duration in blocks of 1-based `phase`.
 *
 * # Safety
 * `s` must be a live scheme handle and `out` writable.
 */
enum MdStatus md_scheme_duration(const struct MdScheme *s, size_t phase, double *out);

/**
 * DoF pair of the finite instance.
 *
 * # Safety
 * `s` must be a live scheme handle; `d1`, `d2` writable.
 */
enum MdStatus md_scheme_dof_finite(const struct MdScheme *s, double *d1, double *d2);

/**
 * Limiting DoF pair as the phase count grows.
 *
 * # Safety
 * `s` must be a live scheme handle; `d1`, `d2` writable.
 */
enum MdStatus md_scheme_dof_limit(const struct MdScheme *s, double *d1, double *d2);

/**
 * 1 if every phase boundary of the quantization ledger balances, else 0.
 *
 * # Safety
 * `s` must be null or a live scheme handle.
 */
int md_scheme_ledger_balanced(const struct MdScheme *s);

/**
 * Full scheme as JSON; release with `md_string_free`. Null on failure.
 *
 * # Safety
 * `s` must be null or a live scheme handle.
 */
char *md_scheme_to_json(const struct MdScheme *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MISO_DOF_H */
