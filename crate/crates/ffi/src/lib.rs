//! C ABI over `cmc1`.
//!
//! Expressions and sampled grids are opaque heap handles created by
//! `cmc1_*_parse`/`cmc1_grid_sample` and released with the matching
//! `*_free`. Every fallible call returns a [`Cmc1Status`]; on failure a
//! longer message is kept per thread and can be copied out with
//! [`cmc1_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use cmc1::grid::{sample_grid, surface_point, Domain, Method, SurfaceGrid};
use cmc1::verify::{verify_grid, Stencil, Tolerances};
use cmc1::{eval_jet, parse, Error, Expr};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmc1Status {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    ZeroDerivative = 5,
    DegenerateChart = 6,
    NoRealEnvelope = 7,
    EmptyGrid = 8,
    InvalidMatrix = 9,
    InvalidDomain = 10,
    OutOfRange = 11,
    Io = 12,
    Internal = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmc1Method {
    Bianchi = 0,
    Small = 1,
}

/// Methods cross the boundary as plain integers so a bad value from C is an
/// error rather than an invalid enum.
fn method_of(m: u32) -> Result<Method, Failure> {
    match m {
        m if m == Cmc1Method::Bianchi as u32 => Ok(Method::Bianchi),
        m if m == Cmc1Method::Small as u32 => Ok(Method::Small),
        _ => Err(Failure(Cmc1Status::OutOfRange, format!("unknown method {m}"))),
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cmc1Complex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cmc1Complex {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

/// `f`, `f′`, `f″` at one point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cmc1Jet {
    pub f: Cmc1Complex,
    pub d1: Cmc1Complex,
    pub d2: Cmc1Complex,
}

/// A point of the upper half-space, `z > 0`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cmc1Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Polar grid: `r` on the closed interval with `n_r` nodes, `theta` on the
/// half-open interval with `n_theta` nodes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cmc1Domain {
    pub r_min: f64,
    pub r_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

impl From<Cmc1Domain> for Domain {
    fn from(d: Cmc1Domain) -> Self {
        Domain {
            r_min: d.r_min,
            r_max: d.r_max,
            theta_min: d.theta_min,
            theta_max: d.theta_max,
            n_r: d.n_r,
            n_theta: d.n_theta,
        }
    }
}

impl From<Domain> for Cmc1Domain {
    fn from(d: Domain) -> Self {
        Cmc1Domain {
            r_min: d.r_min,
            r_max: d.r_max,
            theta_min: d.theta_min,
            theta_max: d.theta_max,
            n_r: d.n_r,
            n_theta: d.n_theta,
        }
    }
}

/// Maxima of the numerical checks, with the default tolerances applied.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cmc1Verification {
    pub max_mean_curvature_deviation: f64,
    pub max_gauss_residual: f64,
    pub max_conformality_defect: f64,
    pub holes: usize,
    pub nodes_checked: usize,
    pub passed: bool,
}

/// Opaque parsed expression.
pub struct Cmc1Expr(Expr);

/// Opaque sampled grid.
pub struct Cmc1Grid(SurfaceGrid);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> Cmc1Status {
    match e {
        Error::Parse(_) => Cmc1Status::Parse,
        Error::Domain(_) => Cmc1Status::Domain,
        Error::ZeroDerivative => Cmc1Status::ZeroDerivative,
        Error::DegenerateChart | Error::BoundaryNode(..) | Error::VerticalEscape => Cmc1Status::DegenerateChart,
        Error::NoRealEnvelope(_) => Cmc1Status::NoRealEnvelope,
        Error::EmptyGrid => Cmc1Status::EmptyGrid,
        Error::InvalidMatrix(_) => Cmc1Status::InvalidMatrix,
        Error::InvalidDomain(_) => Cmc1Status::InvalidDomain,
        Error::Io(_) => Cmc1Status::Io,
    }
}

struct Failure(Cmc1Status, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(Cmc1Status::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure for [`cmc1_last_error_message`] and turns
/// panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> Cmc1Status {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure(Cmc1Status::Internal, format!("internal error: {msg}")))
    });
    match outcome {
        Ok(()) => {
            set_last_error(String::new());
            Cmc1Status::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(msg);
            status
        }
    }
}

/// # Safety
/// `p` must be null or valid for reads of `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cmc1_status_name(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer argument",
        2 => c"string is not valid UTF-8",
        3 => c"expression does not parse",
        4 => c"evaluation left the function's domain",
        5 => c"f' vanishes",
        6 => c"degenerate chart",
        7 => c"no real envelope",
        8 => c"no usable grid nodes",
        9 => c"invalid null-curve matrix",
        10 => c"invalid domain",
        11 => c"index or value out of range",
        12 => c"i/o error",
        13 => c"internal error",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Copies the calling thread's last error message (empty after a success)
/// into `buf` as a NUL-terminated string, truncating to `len` bytes.
/// Returns the full message length excluding the NUL, so a call with
/// `len == 0` sizes the buffer.
///
/// # Safety
/// `buf` must be null or valid for writes of `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Parses `source`. On a parse error `*error_offset` (if non-null) receives
/// the byte offset of the failure.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` and `error_offset` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_expr_parse(
    source: *const c_char,
    out: *mut *mut Cmc1Expr,
    error_offset: *mut usize,
) -> Cmc1Status {
    guard(|| {
        if source.is_null() {
            return Err(null("source"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(source)
            .to_str()
            .map_err(|e| Failure(Cmc1Status::InvalidUtf8, e.to_string()))?;
        match parse(text) {
            Ok(e) => {
                out.write(Box::into_raw(Box::new(Cmc1Expr(e))));
                Ok(())
            }
            Err(pe) => {
                if !error_offset.is_null() {
                    error_offset.write(pe.offset);
                }
                Err(Error::Parse(pe).into())
            }
        }
    })
}

/// # Safety
/// `expr` must be null or a handle from [`cmc1_expr_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmc1_expr_free(expr: *mut Cmc1Expr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Writes the canonical printed form of `expr` like
/// [`cmc1_last_error_message`] does and returns its length.
///
/// # Safety
/// `expr` must be a live handle; `buf` null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_expr_to_string(expr: *const Cmc1Expr, buf: *mut c_char, len: usize) -> usize {
    let Some(e) = expr.as_ref() else { return 0 };
    let s = e.0.to_string();
    if !buf.is_null() && len > 0 {
        let n = s.len().min(len - 1);
        ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
    }
    s.len()
}

/// `(f, f′, f″)` at `τ = re + i·im`, principal branches.
///
/// # Safety
/// `expr` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_expr_eval(expr: *const Cmc1Expr, re: f64, im: f64, out: *mut Cmc1Jet) -> Cmc1Status {
    guard(|| {
        let e = deref(expr, "expr")?;
        let j = eval_jet(&e.0, Complex64::new(re, im))?;
        write_out(
            out,
            Cmc1Jet {
                f: j.val.into(),
                d1: j.d1.into(),
                d2: j.d2.into(),
            },
            "out",
        )
    })
}

/// Surface point at polar coordinates `(r, theta)` for a `Cmc1Method`; branches are continued
/// from `theta = 0` as on a grid.
///
/// # Safety
/// `expr` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_surface_point(
    expr: *const Cmc1Expr,
    method: u32,
    r: f64,
    theta: f64,
    out: *mut Cmc1Point,
) -> Cmc1Status {
    guard(|| {
        let e = deref(expr, "expr")?;
        let p = surface_point(&e.0, method_of(method)?, r, theta)?;
        write_out(out, Cmc1Point { x: p.x, y: p.y, z: p.z }, "out")
    })
}

/// Samples the surface over `domain`. Nodes where `f′` vanishes or
/// evaluation fails become holes.
///
/// # Safety
/// `expr` must be a live handle; `domain` valid for reads; `out` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_grid_sample(
    expr: *const Cmc1Expr,
    domain: *const Cmc1Domain,
    method: u32,
    out: *mut *mut Cmc1Grid,
) -> Cmc1Status {
    guard(|| {
        let e = deref(expr, "expr")?;
        let d = *deref(domain, "domain")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = sample_grid(&e.0, &d.into(), method_of(method)?)?;
        out.write(Box::into_raw(Box::new(Cmc1Grid(g))));
        Ok(())
    })
}

/// # Safety
/// `grid` must be null or a handle from [`cmc1_grid_sample`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmc1_grid_free(grid: *mut Cmc1Grid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// # Safety
/// `grid` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_grid_domain(grid: *const Cmc1Grid, out: *mut Cmc1Domain) -> Cmc1Status {
    guard(|| {
        let g = deref(grid, "grid")?;
        write_out(out, g.0.domain.into(), "out")
    })
}

/// Number of holes, or 0 for a null handle.
///
/// # Safety
/// `grid` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmc1_grid_hole_count(grid: *const Cmc1Grid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.hole_count())
}

/// Node `(i, j)`. `*is_hole` is set and `*out` left untouched for a hole.
///
/// # Safety
/// `grid` must be a live handle; `out` and `is_hole` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_grid_node(
    grid: *const Cmc1Grid,
    i: usize,
    j: usize,
    out: *mut Cmc1Point,
    is_hole: *mut bool,
) -> Cmc1Status {
    guard(|| {
        let g = &deref(grid, "grid")?.0;
        if out.is_null() || is_hole.is_null() {
            return Err(null("out"));
        }
        let d = g.domain;
        if i >= d.n_r || j >= d.n_theta {
            return Err(Failure(
                Cmc1Status::OutOfRange,
                format!("node ({i}, {j}) outside {}x{}", d.n_r, d.n_theta),
            ));
        }
        match g.get(i, j) {
            Some(p) => {
                out.write(Cmc1Point { x: p.x, y: p.y, z: p.z });
                is_hole.write(false);
            }
            None => is_hole.write(true),
        }
        Ok(())
    })
}

/// Copies all nodes row-major (θ fastest) into `xyz` (3 doubles per node)
/// and `mask` (1 for a point, 0 for a hole; may be null). Holes are written
/// as NaN. `len` is the node capacity of the buffers.
///
/// # Safety
/// `grid` must be a live handle; `xyz` valid for `3 * len` doubles and
/// `mask`, when non-null, for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_grid_copy_nodes(
    grid: *const Cmc1Grid,
    xyz: *mut f64,
    mask: *mut u8,
    len: usize,
) -> Cmc1Status {
    guard(|| {
        let g = &deref(grid, "grid")?.0;
        if xyz.is_null() {
            return Err(null("xyz"));
        }
        let nodes = g.nodes();
        if len < nodes.len() {
            return Err(Failure(
                Cmc1Status::OutOfRange,
                format!("buffer holds {len} nodes, grid has {}", nodes.len()),
            ));
        }
        let xyz = std::slice::from_raw_parts_mut(xyz, 3 * nodes.len());
        for (k, node) in nodes.iter().enumerate() {
            let p = node.map_or([f64::NAN; 3], |p| [p.x, p.y, p.z]);
            xyz[3 * k..3 * k + 3].copy_from_slice(&p);
            if !mask.is_null() {
                *mask.add(k) = node.is_some() as u8;
            }
        }
        Ok(())
    })
}

/// Runs the finite-difference checks on `grid`, which must have been sampled
/// from `expr`.
///
/// # Safety
/// `grid` and `expr` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cmc1_grid_verify(
    grid: *const Cmc1Grid,
    expr: *const Cmc1Expr,
    out: *mut Cmc1Verification,
) -> Cmc1Status {
    guard(|| {
        let g = &deref(grid, "grid")?.0;
        let e = &deref(expr, "expr")?.0;
        let rep = verify_grid(g, e, &Tolerances::default(), Stencil::default())?;
        write_out(
            out,
            Cmc1Verification {
                max_mean_curvature_deviation: rep.max_mean_curvature_deviation,
                max_gauss_residual: rep.max_gauss_residual,
                max_conformality_defect: rep.max_conformality_defect,
                holes: rep.holes,
                nodes_checked: rep.nodes_checked,
                passed: rep.passed(),
            },
            "out",
        )
    })
}
