#ifndef INHOMOREG_H
#define INHOMOREG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum IrStatus {
  IR_STATUS_OK = 0,
  IR_STATUS_NULL_POINTER = 1,
  IR_STATUS_INVALID_INPUT = 2,
  IR_STATUS_INVALID_PROBLEM = 3,
  IR_STATUS_DIVISION_BY_ZERO = 4,
  IR_STATUS_BRACKET = 5,
  IR_STATUS_ENSEMBLE = 6,
  IR_STATUS_IO = 7,
  IR_STATUS_PANIC = 8,
} IrStatus;

typedef enum IrAxis {
  IR_AXIS_X = 0,
  IR_AXIS_Y = 1,
} IrAxis;

typedef enum IrNorm {
  IR_NORM_L1 = 0,
  IR_NORM_L2 = 1,
  IR_NORM_L_INF = 2,
} IrNorm;

/**
 * Real scalar field on a 1D or 2D grid.
 */
typedef struct IrField IrField;

/**
 * Partial Fourier measurement operator.
 */
typedef struct IrOperator IrOperator;

/**
 * Solution and diagnostics of one solve.
 */
typedef struct IrSolveReport IrSolveReport;

/**
 * ADMM stopping rule and start. Get defaults from
 * [`ir_solver_options_default`].
 */
typedef struct IrSolverOptions {
  double abs_tol;
  double rel_tol;
  size_t max_iter;
  /**
   * Start from zero instead of the adjoint of the data.
   */
  bool zero_init;
} IrSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Valid until the next
 * call on the same thread; never NULL.
 */
const char *ir_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ir_version(void);

/**
 * Copies `ny * nx` row-major values into a new field. `ny = 1` makes a
 * 1D field of length `nx`.
 *
 * # Safety
 * `values` must point to `ny * nx` readable doubles; `out` must be writable.
 */
enum IrStatus ir_field_new(size_t ny, size_t nx, const double *values, struct IrField **out);

/**
 * # Safety
 * `field` must be NULL or a handle from this library not yet freed.
 */
void ir_field_free(struct IrField *field);

/**
 * Number of sites; 0 for NULL.
 *
 * # Safety
 * `field` must be NULL or a live handle.
 */
size_t ir_field_len(const struct IrField *field);

/**
 * Grid dimensions; 1D fields report `ny = 1`.
 *
 * # Safety
 * `field` must be a live handle; `ny`, `nx` writable.
 */
enum IrStatus ir_field_dims(const struct IrField *field, size_t *ny, size_t *nx);

/**
 * Copies the values into `out`, which holds `len` doubles. `len` must
 * equal the field length.
 *
 * # Safety
 * `field` must be a live handle; `out` must point to `len` writable doubles.
 */
enum IrStatus ir_field_copy_values(const struct IrField *field, double *out, size_t len);

/**
 * Synthetic phantom `id` (one of `'A'`..`'F'`) on a `size × size` grid.
 *
 * # Safety
 * `out` must be writable.
 */
enum IrStatus ir_phantom(char id, size_t size, struct IrField **out);

/**
 * Operator keeping the lowest `fraction` of frequencies along `axis`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IrStatus ir_operator_lowfreq(size_t ny,
                                  size_t nx,
                                  enum IrAxis along,
                                  double fraction,
                                  struct IrOperator **out);

/**
 * Operator keeping every `stride`-th frequency index along `axis`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IrStatus ir_operator_stride(size_t ny,
                                 size_t nx,
                                 enum IrAxis along,
                                 size_t stride,
                                 struct IrOperator **out);

/**
 * # Safety
 * `op` must be NULL or a live handle.
 */
void ir_operator_free(struct IrOperator *op);

/**
 * Number of complex measurements; 0 for NULL.
 *
 * # Safety
 * `op` must be NULL or a live handle.
 */
size_t ir_operator_count(const struct IrOperator *op);

/**
 * Writes `G u` as `2 * count` interleaved doubles into `out`.
 *
 * # Safety
 * Handles must be live; `out` must point to `len` writable doubles.
 */
enum IrStatus ir_operator_forward(const struct IrOperator *op,
                                  const struct IrField *field,
                                  double *out,
                                  size_t len);

/**
 * Real adjoint `Re(Gᴴ d)` of `count` interleaved measurements.
 *
 * # Safety
 * `op` must be live; `data` must point to `2 * count` doubles; `out` writable.
 */
enum IrStatus ir_operator_adjoint(const struct IrOperator *op,
                                  const double *data,
                                  size_t count,
                                  struct IrField **out);

struct IrSolverOptions ir_solver_options_default(void);

/**
 * Solves `min ‖Gu − d‖² + λ Σ ω_j ‖(Du)_j‖^{p_j}` by ADMM.
 *
 * `exponents` and `weights` hold one value per site; `weights` may be
 * NULL for unit weights. `opts` may be NULL for the defaults. Hitting the
 * iteration cap is not an error; check [`ir_report_converged`].
 *
 * # Safety
 * Pointers must be valid for the stated lengths; `out` writable.
 */
enum IrStatus ir_solve(const struct IrOperator *op,
                       const double *data,
                       size_t count,
                       const double *exponents,
                       const double *weights,
                       size_t sites,
                       double lambda,
                       double rho,
                       const struct IrSolverOptions *opts,
                       struct IrSolveReport **out);

/**
 * # Safety
 * `report` must be NULL or a live handle.
 */
void ir_report_free(struct IrSolveReport *report);

/**
 * # Safety
 * `report` must be NULL or a live handle.
 */
size_t ir_report_iterations(const struct IrSolveReport *report);

/**
 * # Safety
 * `report` must be NULL or a live handle.
 */
bool ir_report_converged(const struct IrSolveReport *report);

/**
 * Final objective; NaN for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
double ir_report_objective(const struct IrSolveReport *report);

/**
 * Copies the solution into a new field handle.
 *
 * # Safety
 * `report` must be live; `out` writable.
 */
enum IrStatus ir_report_solution(const struct IrSolveReport *report, struct IrField **out);

/**
 * `‖u − truth‖ / ‖truth‖` in the chosen norm.
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum IrStatus ir_relative_error(const struct IrField *u,
                                const struct IrField *truth,
                                enum IrNorm norm,
                                double *out);

/**
 * `argmin_x |x|^p + (κ/2)(x − q)²` for `p ∈ [1, 2]`, `κ > 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IrStatus ir_prox_scalar(double q, double p, double kappa, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INHOMOREG_H */
