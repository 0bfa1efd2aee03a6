#ifndef CMC1_H
#define CMC1_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum Cmc1Status {
  CMC1_STATUS_OK = 0,
  CMC1_STATUS_NULL_POINTER = 1,
  CMC1_STATUS_INVALID_UTF8 = 2,
  CMC1_STATUS_PARSE = 3,
  CMC1_STATUS_DOMAIN = 4,
  CMC1_STATUS_ZERO_DERIVATIVE = 5,
  CMC1_STATUS_DEGENERATE_CHART = 6,
  CMC1_STATUS_NO_REAL_ENVELOPE = 7,
  CMC1_STATUS_EMPTY_GRID = 8,
  CMC1_STATUS_INVALID_MATRIX = 9,
  CMC1_STATUS_INVALID_DOMAIN = 10,
  CMC1_STATUS_OUT_OF_RANGE = 11,
  CMC1_STATUS_IO = 12,
  CMC1_STATUS_INTERNAL = 13,
} Cmc1Status;

typedef enum Cmc1Method {
  CMC1_METHOD_BIANCHI = 0,
  CMC1_METHOD_SMALL = 1,
} Cmc1Method;

/**
 * Opaque parsed expression.
 */
typedef struct Cmc1Expr Cmc1Expr;

/**
 * Opaque sampled grid.
 */
typedef struct Cmc1Grid Cmc1Grid;

typedef struct Cmc1Complex {
  double re;
  double im;
} Cmc1Complex;

/**
 * `f`, `f′`, `f″` at one point.
 */
typedef struct Cmc1Jet {
  struct Cmc1Complex f;
  struct Cmc1Complex d1;
  struct Cmc1Complex d2;
} Cmc1Jet;

/**
 * A point of the upper half-space, `z > 0`.
 */
typedef struct Cmc1Point {
  double x;
  double y;
  double z;
} Cmc1Point;

/**
 * Polar grid: `r` on the closed interval with `n_r` nodes, `theta` on the
 * half-open interval with `n_theta` nodes.
 */
typedef struct Cmc1Domain {
  double r_min;
  double r_max;
  double theta_min;
  double theta_max;
  size_t n_r;
  size_t n_theta;
} Cmc1Domain;

/**
 * Maxima of the numerical checks, with the default tolerances applied.
 */
typedef struct Cmc1Verification {
  double max_mean_curvature_deviation;
  double max_gauss_residual;
  double max_conformality_defect;
  size_t holes;
  size_t nodes_checked;
  bool passed;
} Cmc1Verification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *cmc1_status_name(int32_t status);

/**
 * Copies the calling thread's last error message (empty after a success)
 * into `buf` as a NUL-terminated string, truncating to `len` bytes.
 * Returns the full message length excluding the NUL, so a call with
 * `len == 0` sizes the buffer.
 *
 * # Safety
 * `buf` must be null or valid for writes of `len` bytes.
 */
size_t cmc1_last_error_message(char *buf, size_t len);

/**
 * Parses `source`. On a parse error `*error_offset` (if non-null) receives
 * the byte offset of the failure.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` and `error_offset` must be
 * null or valid for writes.
 */
enum Cmc1Status cmc1_expr_parse(const char *source, struct Cmc1Expr **out, size_t *error_offset);

/**
 * # Safety
 * `expr` must be null or a handle from [`cmc1_expr_parse`] not yet freed.
 */
void cmc1_expr_free(struct Cmc1Expr *expr);

/**
 * Writes the canonical printed form of `expr` like
 * [`cmc1_last_error_message`] does and returns its length.
 *
 * # Safety
 * `expr` must be a live handle; `buf` null or valid for `len` bytes.
 */
size_t cmc1_expr_to_string(const struct Cmc1Expr *expr, char *buf, size_t len);

/**
 * `(f, f′, f″)` at `τ = re + i·im`, principal branches.
 *
 * # Safety
 * `expr` must be a live handle; `out` valid for writes.
 */
enum Cmc1Status cmc1_expr_eval(const struct Cmc1Expr *expr,
                               double re,
                               double im,
                               struct Cmc1Jet *out);

/**
 * Surface point at polar coordinates `(r, theta)` for a `Cmc1Method`; branches are continued
 * from `theta = 0` as on a grid.
 *
 * # Safety
 * `expr` must be a live handle; `out` valid for writes.
 */
enum Cmc1Status cmc1_surface_point(const struct Cmc1Expr *expr,
                                   uint32_t method,
                                   double r,
                                   double theta,
                                   struct Cmc1Point *out);

/**
 * Samples the surface over `domain`. Nodes where `f′` vanishes or
 * evaluation fails become holes.
 *
 * # Safety
 * `expr` must be a live handle; `domain` valid for reads; `out` valid for
 * writes.
 */
enum Cmc1Status cmc1_grid_sample(const struct Cmc1Expr *expr,
                                 const struct Cmc1Domain *domain,
                                 uint32_t method,
                                 struct Cmc1Grid **out);

/**
 * # Safety
 * `grid` must be null or a handle from [`cmc1_grid_sample`] not yet freed.
 */
void cmc1_grid_free(struct Cmc1Grid *grid);

/**
 * # Safety
 * `grid` must be a live handle; `out` valid for writes.
 */
enum Cmc1Status cmc1_grid_domain(const struct Cmc1Grid *grid, struct Cmc1Domain *out);

/**
 * Number of holes, or 0 for a null handle.
 *
 * # Safety
 * `grid` must be null or a live handle.
 */
size_t cmc1_grid_hole_count(const struct Cmc1Grid *grid);

/**
 * Node `(i, j)`. `*is_hole` is set and `*out` left untouched for a hole.
 *
 * # Safety
 * `grid` must be a live handle; `out` and `is_hole` valid for writes.
 */
enum Cmc1Status cmc1_grid_node(const struct Cmc1Grid *grid,
                               size_t i,
                               size_t j,
                               struct Cmc1Point *out,
                               bool *is_hole);

/**
 * Copies all nodes row-major (θ fastest) into `xyz` (3 doubles per node)
 * and `mask` (1 for a point, 0 for a hole; may be null). Holes are written
 * as NaN. `len` is the node capacity of the buffers.
 *
 * # Safety
 * `grid` must be a live handle; `xyz` valid for `3 * len` doubles and
 * `mask`, when non-null, for `len` bytes.
 */
enum Cmc1Status cmc1_grid_copy_nodes(const struct Cmc1Grid *grid,
                                     double *xyz,
                                     uint8_t *mask,
                                     size_t len);

/**
 * Runs the finite-difference checks on `grid`, which must have been sampled
 * from `expr`.
 *
 * # Safety
 * `grid` and `expr` must be live handles; `out` valid for writes.
 */
enum Cmc1Status cmc1_grid_verify(const struct Cmc1Grid *grid,
                                 const struct Cmc1Expr *expr,
                                 struct Cmc1Verification *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CMC1_H */
