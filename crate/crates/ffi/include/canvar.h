#ifndef CANVAR_H
#define CANVAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Differentiation mode for calls that take one.
typedef enum CanvarMode {
  CANVAR_MODE_FORWARD_EXACT = 0,
  CANVAR_MODE_FINITE_DIFFERENCE = 1,
} CanvarMode;

// Result code of every call.
typedef enum CanvarStatus {
  CANVAR_STATUS_OK = 0,
  CANVAR_STATUS_NULL_POINTER = 1,
  CANVAR_STATUS_INVALID_UTF8 = 2,
  CANVAR_STATUS_INVALID_ARGUMENT = 3,
  CANVAR_STATUS_UNKNOWN_MANIFOLD = 4,
  CANVAR_STATUS_UNKNOWN_IDENTITY = 5,
  CANVAR_STATUS_UNKNOWN_FIELD = 6,
  CANVAR_STATUS_UNKNOWN_EXAMPLE = 7,
  CANVAR_STATUS_OUTSIDE_DOMAIN = 8,
  CANVAR_STATUS_DIMENSION_MISMATCH = 9,
  CANVAR_STATUS_FORBIDDEN_PARAMETER = 10,
  CANVAR_STATUS_DEGENERATE = 11,
  CANVAR_STATUS_NOT_LIGHTLIKE = 12,
  CANVAR_STATUS_NUMERICAL = 13,
  CANVAR_STATUS_PANIC = 99,
} CanvarStatus;

// How a geodesic integration ended.
typedef enum CanvarTermination {
  CANVAR_TERMINATION_REACHED_T = 0,
  CANVAR_TERMINATION_LEFT_DOMAIN = 1,
  CANVAR_TERMINATION_STEP_UNDERFLOW = 2,
} CanvarTermination;

// A coordinate chart: a catalog metric or one of its variations.
typedef struct CanvarChart CanvarChart;

// A finished report, held as canonical JSON.
typedef struct CanvarReport CanvarReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *canvar_version(void);

// Message describing the last failure on this thread; empty after success.
// Valid until the next call on the same thread.
const char *canvar_last_error(void);

// Opens the base chart of catalog manifold `id`.
//
// # Safety
// `id` must be a NUL-terminated string and `out` a valid pointer.
enum CanvarStatus canvar_chart_open(const char *id, struct CanvarChart **out);

// Opens the variation `g + t ω⊗ω` of catalog manifold `id` along its field
// named `field`.
//
// # Safety
// `id` and `field` must be NUL-terminated strings and `out` a valid pointer.
enum CanvarStatus canvar_chart_open_varied(const char *id,
                                           const char *field,
                                           double t,
                                           struct CanvarChart **out);

// Releases a chart. Null is accepted.
//
// # Safety
// `chart` must come from a `canvar_chart_open*` call and not be used again.
void canvar_chart_free(struct CanvarChart *chart);

// Chart dimension, or 0 for a null handle.
//
// # Safety
// `chart` must be null or a live handle.
uintptr_t canvar_chart_dim(const struct CanvarChart *chart);

// Curvature at `point` (length `n`). Writes the scalar curvature, and,
// where the pointers are non-null, the metric and Ricci tensor (`n*n`,
// row-major) and the Christoffel symbols `Γ^k_ij` (`n*n*n`, index
// `(k*n + i)*n + j`).
//
// # Safety
// `point` must hold `n` doubles; non-null outputs must have room as above.
enum CanvarStatus canvar_curvature(const struct CanvarChart *chart,
                                   const double *point,
                                   uintptr_t n,
                                   enum CanvarMode mode,
                                   double *scalar,
                                   double *metric,
                                   double *ricci,
                                   double *christoffel);

// Integrates the geodesic from `(p0, v0)` over `[0, span]` and writes the
// termination, the parameter reached, the endpoint (`n` doubles) and the
// drift of `g(γ', γ')`.
//
// # Safety
// `p0`, `v0` and `endpoint` must hold `n` doubles; the scalar outputs must
// be valid pointers.
enum CanvarStatus canvar_geodesic(const struct CanvarChart *chart,
                                  const double *p0,
                                  const double *v0,
                                  uintptr_t n,
                                  double span,
                                  enum CanvarTermination *termination,
                                  double *final_parameter,
                                  double *endpoint,
                                  double *norm_drift);

// Length of the coordinate line `origin + s direction` for `s ∈ [a, b]`.
//
// # Safety
// `origin` and `direction` must hold `n` doubles; `length` must be valid.
enum CanvarStatus canvar_line_length(const struct CanvarChart *chart,
                                     const double *origin,
                                     const double *direction,
                                     uintptr_t n,
                                     double a,
                                     double b,
                                     double *length);

// Runs the identity sweep. `manifolds` and `identities` are comma-separated
// ids; `ts` holds `nt` variation parameters.
//
// # Safety
// Strings must be NUL-terminated, `ts` must hold `nt` doubles and `out`
// must be a valid pointer.
enum CanvarStatus canvar_verify(const char *manifolds,
                                const char *identities,
                                const double *ts,
                                uintptr_t nt,
                                uint64_t seed,
                                uintptr_t samples,
                                enum CanvarMode mode,
                                struct CanvarReport **out);

// Analyzes a lightlike hypersurface example at `points` seeded points.
//
// # Safety
// `example` must be NUL-terminated and `out` a valid pointer.
enum CanvarStatus canvar_nullsurf(const char *example,
                                  uintptr_t points,
                                  uint64_t seed,
                                  struct CanvarReport **out);

// The report as canonical JSON, owned by the report.
//
// # Safety
// `report` must be null or a live handle.
const char *canvar_report_json(const struct CanvarReport *report);

// Number of cells (identity sweeps) or residual checks (hypersurfaces).
//
// # Safety
// `report` must be null or a live handle.
uintptr_t canvar_report_cells(const struct CanvarReport *report);

// Number of failed cells or checks.
//
// # Safety
// `report` must be null or a live handle.
uintptr_t canvar_report_failed(const struct CanvarReport *report);

// Releases a report. Null is accepted.
//
// # Safety
// `report` must come from `canvar_verify` or `canvar_nullsurf` and not be
// used again.
void canvar_report_free(struct CanvarReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CANVAR_H */
