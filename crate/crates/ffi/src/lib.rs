//! C ABI over the staticgeom core.
//!
//! Every fallible call returns an [`SgStatus`] and writes results through
//! out-pointers. On failure the message is kept per thread and read with
//! [`sg_last_error_message`]. Models are opaque [`SgModel`] handles owned by
//! the caller and released with [`sg_model_free`].

use staticgeom::asymptotics::{build_chart, extract_expansion};
use staticgeom::horizon_killing::{check_bound, solve_a0, HorizonProblem};
use staticgeom::hypersurfaces::{Hypersurface, InnerBoundary, RegionSpec};
use staticgeom::inequality::{dss_identity, reverse_penrose, verify_main, InequalityReport};
use staticgeom::models::{ModelConfig, StaticModel};
use staticgeom::GeomError;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result of every fallible call. Codes 2 and 3 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Internal = 4,
}

/// A built static model.
pub struct SgModel {
    inner: StaticModel,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SgHorizon {
    pub s_root: f64,
    pub kappa: f64,
    pub scalar_curvature: f64,
    pub volume: f64,
    pub admissible: bool,
}

/// `slack = lhs - rhs`; `holds` is the verdict at the requested tolerance.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SgInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SgKillingSummary {
    pub bound: f64,
    pub min_a0: f64,
    pub residual: f64,
    pub bound_holds: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(SgStatus, String);

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        let status = if e.is_numerical() { SgStatus::Numerical } else { SgStatus::InvalidArgument };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(SgStatus::NullPointer, format!("{name} is null"))
}

/// Runs `body`, turning errors and panics into a status and the last-error message.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> SgStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Failure(SgStatus::Internal, msg))
    });
    match outcome {
        Ok(()) => {
            set_last_error("");
            SgStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(&msg);
            status
        }
    }
}

unsafe fn model_ref<'a>(model: *const SgModel) -> Result<&'a StaticModel, Failure> {
    model.as_ref().map(|m| &m.inner).ok_or_else(|| null("model"))
}

unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn inequality(report: &InequalityReport) -> SgInequality {
    SgInequality { lhs: report.lhs, rhs: report.rhs(), slack: report.slack, holds: report.holds() }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a model from its JSON description `{"family", "n", "params", "section_volume"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_model_from_json(json: *const c_char, out: *mut *mut SgModel) -> SgStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(SgStatus::InvalidArgument, format!("model JSON is not UTF-8: {e}")))?;
        let inner = ModelConfig::from_json(text)?.build()?;
        write(out, "out", Box::into_raw(Box::new(SgModel { inner })))
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from [`sg_model_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sg_model_free(model: *mut SgModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Resolved model JSON, to be released with [`sg_string_free`].
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_model_to_json(model: *const SgModel, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let m = model_ref(model)?;
        let text = model_json(&ModelConfig::from_model(m));
        write(out, "out", CString::new(text).map_err(|e| Failure(SgStatus::Internal, e.to_string()))?.into_raw())
    })
}

fn model_json(config: &ModelConfig) -> String {
    staticgeom::cli::to_json(config).trim_end().to_string()
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_model_dimension(model: *const SgModel, out: *mut usize) -> SgStatus {
    guard(|| write(out, "out", model_ref(model)?.n))
}

/// Lapse `f(s)`; fails outside the model domain.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_model_potential(model: *const SgModel, s: f64, out: *mut f64) -> SgStatus {
    guard(|| {
        let m = model_ref(model)?;
        m.check_inside(s)?;
        write(out, "out", m.potential(s))
    })
}

/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_model_horizon_count(model: *const SgModel, out: *mut usize) -> SgStatus {
    guard(|| write(out, "out", model_ref(model)?.horizons().len()))
}

/// Horizons are ordered by radius.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_model_horizon(model: *const SgModel, index: usize, out: *mut SgHorizon) -> SgStatus {
    guard(|| {
        let h = model_ref(model)?.horizon(index)?;
        let value = SgHorizon {
            s_root: h.s_root,
            kappa: h.kappa,
            scalar_curvature: h.scalar_curvature,
            volume: h.volume,
            admissible: h.admissible,
        };
        write(out, "out", value)
    })
}

/// Main inequality for the coordinate sphere of radius `s` over horizon `horizon`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_verify_main_sphere(
    model: *const SgModel,
    horizon: usize,
    s: f64,
    tol: f64,
    out: *mut SgInequality,
) -> SgStatus {
    guard(|| {
        let region = RegionSpec::new(InnerBoundary::Horizon(horizon), Hypersurface::sphere(s));
        let report = verify_main(model_ref(model)?, &region, tol)?;
        write(out, "out", inequality(&report))
    })
}

/// Reverse Penrose bound against the mass; `lhs` is the bound.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_reverse_penrose(model: *const SgModel, tol: f64, out: *mut SgInequality) -> SgStatus {
    guard(|| write(out, "out", inequality(&reverse_penrose(model_ref(model)?, None, tol)?)))
}

/// Two-horizon identity of de Sitter-Schwarzschild; `tol` is relative.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_dss_identity(model: *const SgModel, tol: f64, out: *mut SgInequality) -> SgStatus {
    guard(|| write(out, "out", inequality(&dss_identity(model_ref(model)?, tol)?)))
}

/// Mass recovered from the boundary expansion of an asymptotically hyperbolic model.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_extract_mass(model: *const SgModel, out: *mut f64) -> SgStatus {
    guard(|| {
        let m = model_ref(model)?;
        write(out, "out", extract_expansion(m, &build_chart(m)?)?.mass)
    })
}

/// Solves for `a0` with `Ric(dr, dr)` sampled at `theta_i = i pi / (len - 1)`.
/// `a0_out` may be null; otherwise it receives `len` values.
///
/// # Safety
/// `ric_rr` must hold `len` readable values, `a0_out` (if not null) `len`
/// writable values, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_killing_solve(
    n: usize,
    kappa: f64,
    radius: f64,
    ric_rr: *const f64,
    len: usize,
    a0_out: *mut f64,
    out: *mut SgKillingSummary,
) -> SgStatus {
    guard(|| {
        if ric_rr.is_null() {
            return Err(null("ric_rr"));
        }
        let samples = std::slice::from_raw_parts(ric_rr, len).to_vec();
        let problem = HorizonProblem::new(n, kappa, radius, samples)?;
        let potential = solve_a0(&problem)?;
        if !a0_out.is_null() {
            ptr::copy_nonoverlapping(potential.a0.as_ptr(), a0_out, len);
        }
        let summary = SgKillingSummary {
            bound: problem.bound(),
            min_a0: potential.min_value,
            residual: potential.residual,
            bound_holds: check_bound(&potential, &problem),
        };
        write(out, "out", summary)
    })
}
