#ifndef STATICGEOM_H
#define STATICGEOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Codes 2 and 3 match the CLI exit codes.
 */
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_ARGUMENT = 2,
  SG_STATUS_NUMERICAL = 3,
  SG_STATUS_INTERNAL = 4,
} SgStatus;

/**
 * A built static model.
 */
typedef struct SgModel SgModel;

typedef struct SgHorizon {
  double s_root;
  double kappa;
  double scalar_curvature;
  double volume;
  bool admissible;
} SgHorizon;

/**
 * `slack = lhs - rhs`; `holds` is the verdict at the requested tolerance.
 */
typedef struct SgInequality {
  double lhs;
  double rhs;
  double slack;
  bool holds;
} SgInequality;

typedef struct SgKillingSummary {
  double bound;
  double min_a0;
  double residual;
  bool bound_holds;
} SgKillingSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sg_version(void);

/**
 * Builds a model from its JSON description `{"family", "n", "params", "section_volume"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum SgStatus sg_model_from_json(const char *json, struct SgModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from [`sg_model_from_json`] and not be freed twice.
 */
void sg_model_free(struct SgModel *model);

/**
 * Resolved model JSON, to be released with [`sg_string_free`].
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_model_to_json(const struct SgModel *model, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void sg_string_free(char *s);

/**
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_model_dimension(const struct SgModel *model, size_t *out);

/**
 * Lapse `f(s)`; fails outside the model domain.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_model_potential(const struct SgModel *model, double s, double *out);

/**
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_model_horizon_count(const struct SgModel *model, size_t *out);

/**
 * Horizons are ordered by radius.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_model_horizon(const struct SgModel *model, size_t index, struct SgHorizon *out);

/**
 * Main inequality for the coordinate sphere of radius `s` over horizon `horizon`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_verify_main_sphere(const struct SgModel *model,
                                    size_t horizon,
                                    double s,
                                    double tol,
                                    struct SgInequality *out);

/**
 * Reverse Penrose bound against the mass; `lhs` is the bound.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_reverse_penrose(const struct SgModel *model, double tol, struct SgInequality *out);

/**
 * Two-horizon identity of de Sitter-Schwarzschild; `tol` is relative.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_dss_identity(const struct SgModel *model, double tol, struct SgInequality *out);

/**
 * Mass recovered from the boundary expansion of an asymptotically hyperbolic model.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_extract_mass(const struct SgModel *model, double *out);

/**
 * Solves for `a0` with `Ric(dr, dr)` sampled at `theta_i = i pi / (len - 1)`.
 * `a0_out` may be null; otherwise it receives `len` values.
 *
 * # Safety
 * `ric_rr` must hold `len` readable values, `a0_out` (if not null) `len`
 * writable values, and `out` must be writable.
 */
enum SgStatus sg_killing_solve(size_t n,
                               double kappa,
                               double radius,
                               const double *ric_rr,
                               size_t len,
                               double *a0_out,
                               struct SgKillingSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STATICGEOM_H */
