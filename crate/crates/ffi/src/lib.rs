//! C ABI over `inhomoreg`.
//!
//! Objects cross the boundary as opaque handles (`IrField`, `IrOperator`,
//! `IrSolveReport`) created by `ir_*_new`-style calls and released with the
//! matching `ir_*_free`. Every fallible call returns an [`IrStatus`]; on
//! failure [`ir_last_error_message`] describes the error for the calling
//! thread. Complex vectors are interleaved `re, im` pairs of doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use inhomoreg::grid::{relative_error, Norm, RealField, Shape};
use inhomoreg::operators::{Axis, FrequencyMask, MeasurementOperator};
use inhomoreg::phantoms::{make_phantom, PhantomId, PhantomSpec};
use inhomoreg::solver::{prox_scalar, solve, Init, SolveReport, SolverOptions, WeightedProblem};
use inhomoreg::Error;
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    InvalidProblem = 3,
    DivisionByZero = 4,
    Bracket = 5,
    Ensemble = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrNorm {
    L1 = 0,
    L2 = 1,
    LInf = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrAxis {
    X = 0,
    Y = 1,
}

/// ADMM stopping rule and start. Get defaults from
/// [`ir_solver_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrSolverOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Start from zero instead of the adjoint of the data.
    pub zero_init: bool,
}

/// Real scalar field on a 1D or 2D grid.
pub struct IrField(RealField);

/// Partial Fourier measurement operator.
pub struct IrOperator(MeasurementOperator);

/// Solution and diagnostics of one solve.
pub struct IrSolveReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IrStatus {
    match e {
        Error::InvalidInput(_) => IrStatus::InvalidInput,
        Error::DivisionByZero(_) => IrStatus::DivisionByZero,
        Error::InvalidProblem(_) => IrStatus::InvalidProblem,
        Error::Bracket { .. } => IrStatus::Bracket,
        Error::Ensemble { .. } => IrStatus::Ensemble,
        Error::Io { .. } => IrStatus::Io,
    }
}

struct Fail(IrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(IrStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IrStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IrStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn complex_from_interleaved(v: &[f64]) -> Vec<Complex64> {
    v.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn axis(a: IrAxis) -> Axis {
    match a {
        IrAxis::X => Axis::X,
        IrAxis::Y => Axis::Y,
    }
}

fn shape_of(ny: usize, nx: usize) -> Shape {
    if ny == 1 {
        Shape::D1(nx)
    } else {
        Shape::D2 { ny, nx }
    }
}

/// Message of the last failed call on this thread. Valid until the next
/// call on the same thread; never NULL.
#[no_mangle]
pub extern "C" fn ir_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ir_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Copies `ny * nx` row-major values into a new field. `ny = 1` makes a
/// 1D field of length `nx`.
///
/// # Safety
/// `values` must point to `ny * nx` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_field_new(
    ny: usize,
    nx: usize,
    values: *const f64,
    out: *mut *mut IrField,
) -> IrStatus {
    guard(|| {
        let n = ny
            .checked_mul(nx)
            .ok_or_else(|| Fail(IrStatus::InvalidInput, "grid too large".into()))?;
        if n == 0 {
            return Err(Error::InvalidInput("empty grid".into()).into());
        }
        let v = slice(values, n, "values")?.to_vec();
        emit(out, IrField(RealField::new(shape_of(ny, nx), v)?))
    })
}

/// # Safety
/// `field` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ir_field_free(field: *mut IrField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of sites; 0 for NULL.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ir_field_len(field: *const IrField) -> usize {
    field.as_ref().map_or(0, |f| f.0.len())
}

/// Grid dimensions; 1D fields report `ny = 1`.
///
/// # Safety
/// `field` must be a live handle; `ny`, `nx` writable.
#[no_mangle]
pub unsafe extern "C" fn ir_field_dims(field: *const IrField, ny: *mut usize, nx: *mut usize) -> IrStatus {
    guard(|| {
        let f = handle(field, "field")?;
        if ny.is_null() || nx.is_null() {
            return Err(null("ny/nx"));
        }
        let (a, b) = f.0.shape().dims();
        *ny = a;
        *nx = b;
        Ok(())
    })
}

/// Copies the values into `out`, which holds `len` doubles. `len` must
/// equal the field length.
///
/// # Safety
/// `field` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ir_field_copy_values(field: *const IrField, out: *mut f64, len: usize) -> IrStatus {
    guard(|| {
        let f = handle(field, "field")?;
        if len != f.0.len() {
            return Err(Error::InvalidInput(format!("buffer holds {len} values, field has {}", f.0.len())).into());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(f.0.values().as_ptr(), out, len);
        Ok(())
    })
}

/// Synthetic phantom `id` (one of `'A'`..`'F'`) on a `size × size` grid.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_phantom(id: c_char, size: usize, out: *mut *mut IrField) -> IrStatus {
    guard(|| {
        let id: PhantomId = (id as u8 as char).to_string().parse()?;
        if id == PhantomId::File {
            return Err(Error::InvalidInput("file phantoms are not available here".into()).into());
        }
        emit(out, IrField(make_phantom(&PhantomSpec::new(id, size))?))
    })
}

/// Operator keeping the lowest `fraction` of frequencies along `axis`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_operator_lowfreq(
    ny: usize,
    nx: usize,
    along: IrAxis,
    fraction: f64,
    out: *mut *mut IrOperator,
) -> IrStatus {
    guard(|| {
        let mask = FrequencyMask::lowfreq_axis(shape_of(ny, nx), axis(along), fraction)?;
        emit(out, IrOperator(MeasurementOperator::new(mask)))
    })
}

/// Operator keeping every `stride`-th frequency index along `axis`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_operator_stride(
    ny: usize,
    nx: usize,
    along: IrAxis,
    stride: usize,
    out: *mut *mut IrOperator,
) -> IrStatus {
    guard(|| {
        let mask = FrequencyMask::stride_axis(shape_of(ny, nx), axis(along), stride)?;
        emit(out, IrOperator(MeasurementOperator::new(mask)))
    })
}

/// # Safety
/// `op` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ir_operator_free(op: *mut IrOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Number of complex measurements; 0 for NULL.
///
/// # Safety
/// `op` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ir_operator_count(op: *const IrOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.count())
}

/// Writes `G u` as `2 * count` interleaved doubles into `out`.
///
/// # Safety
/// Handles must be live; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ir_operator_forward(
    op: *const IrOperator,
    field: *const IrField,
    out: *mut f64,
    len: usize,
) -> IrStatus {
    guard(|| {
        let op = handle(op, "op")?;
        let f = handle(field, "field")?;
        let d = op.0.forward(&f.0)?;
        if len != 2 * d.len() {
            return Err(Error::InvalidInput(format!("buffer holds {len} doubles, need {}", 2 * d.len())).into());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        for (k, c) in d.iter().enumerate() {
            *out.add(2 * k) = c.re;
            *out.add(2 * k + 1) = c.im;
        }
        Ok(())
    })
}

/// Real adjoint `Re(Gᴴ d)` of `count` interleaved measurements.
///
/// # Safety
/// `op` must be live; `data` must point to `2 * count` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ir_operator_adjoint(
    op: *const IrOperator,
    data: *const f64,
    count: usize,
    out: *mut *mut IrField,
) -> IrStatus {
    guard(|| {
        let op = handle(op, "op")?;
        let d = complex_from_interleaved(slice(data, 2 * count, "data")?);
        emit(out, IrField(op.0.adjoint(&d)?))
    })
}

#[no_mangle]
pub extern "C" fn ir_solver_options_default() -> IrSolverOptions {
    let o = SolverOptions::default();
    IrSolverOptions {
        abs_tol: o.abs_tol,
        rel_tol: o.rel_tol,
        max_iter: o.max_iter,
        zero_init: o.init == Init::Zero,
    }
}

/// Solves `min ‖Gu − d‖² + λ Σ ω_j ‖(Du)_j‖^{p_j}` by ADMM.
///
/// `exponents` and `weights` hold one value per site; `weights` may be
/// NULL for unit weights. `opts` may be NULL for the defaults. Hitting the
/// iteration cap is not an error; check [`ir_report_converged`].
///
/// # Safety
/// Pointers must be valid for the stated lengths; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ir_solve(
    op: *const IrOperator,
    data: *const f64,
    count: usize,
    exponents: *const f64,
    weights: *const f64,
    sites: usize,
    lambda: f64,
    rho: f64,
    opts: *const IrSolverOptions,
    out: *mut *mut IrSolveReport,
) -> IrStatus {
    guard(|| {
        let op = handle(op, "op")?;
        let d = complex_from_interleaved(slice(data, 2 * count, "data")?);
        let exps = slice(exponents, sites, "exponents")?;
        let ws: Vec<f64> = if weights.is_null() {
            vec![1.0; sites]
        } else {
            slice(weights, sites, "weights")?.to_vec()
        };
        let o = opts.as_ref().copied().unwrap_or_else(|| ir_solver_options_default());
        let options = SolverOptions {
            abs_tol: o.abs_tol,
            rel_tol: o.rel_tol,
            max_iter: o.max_iter,
            init: if o.zero_init { Init::Zero } else { Init::Adjoint },
        };
        let problem = WeightedProblem::new(&op.0, &d, exps, ws, lambda, rho)?;
        emit(out, IrSolveReport(solve(&problem, &options)?))
    })
}

/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ir_report_free(report: *mut IrSolveReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ir_report_iterations(report: *const IrSolveReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.iterations)
}

/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ir_report_converged(report: *const IrSolveReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.converged)
}

/// Final objective; NaN for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ir_report_objective(report: *const IrSolveReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.objective)
}

/// Copies the solution into a new field handle.
///
/// # Safety
/// `report` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ir_report_solution(report: *const IrSolveReport, out: *mut *mut IrField) -> IrStatus {
    guard(|| {
        let r = handle(report, "report")?;
        emit(out, IrField(r.0.solution.clone()))
    })
}

/// `‖u − truth‖ / ‖truth‖` in the chosen norm.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ir_relative_error(
    u: *const IrField,
    truth: *const IrField,
    norm: IrNorm,
    out: *mut f64,
) -> IrStatus {
    guard(|| {
        let u = handle(u, "u")?;
        let t = handle(truth, "truth")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let norm = match norm {
            IrNorm::L1 => Norm::L1,
            IrNorm::L2 => Norm::L2,
            IrNorm::LInf => Norm::LInf,
        };
        *out = relative_error(&u.0, &t.0, norm)?;
        Ok(())
    })
}

/// `argmin_x |x|^p + (κ/2)(x − q)²` for `p ∈ [1, 2]`, `κ > 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_prox_scalar(q: f64, p: f64, kappa: f64, out: *mut f64) -> IrStatus {
    guard(|| {
        if !(1.0..=2.0).contains(&p) || !(kappa > 0.0) || !q.is_finite() {
            return Err(Error::InvalidInput(format!("need p in [1, 2], kappa > 0 and finite q (p = {p}, kappa = {kappa})")).into());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = prox_scalar(q, p, kappa);
        Ok(())
    })
}
