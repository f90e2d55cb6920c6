//! C interface to `gg-core`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_*`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`GgStatus`]; the message of the last failure on the calling
//! thread is available from [`gg_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gg_core::dynamics::spec::isotopy_from_json;
use gg_core::dynamics::Isotopy;
use gg_core::gg_estimator::{calabi_disc, phi_n, CalabiValue, EstimatorOptions};
use gg_core::quasimorphism::QuasiMorphism;
use gg_core::surface::Point;
use gg_core::trace::{default_basepoints, trace_word, TraceOptions};
use gg_core::GgError;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Parse = 3,
    Domain = 4,
    Integration = 5,
    Collision = 6,
    Support = 7,
    NotHamiltonian = 8,
    Rejection = 9,
    Unsupported = 10,
    Io = 11,
    Panic = 12,
}

impl From<&GgError> for GgStatus {
    fn from(e: &GgError) -> Self {
        match e {
            GgError::InvalidInput(_) | GgError::Config(_) => GgStatus::InvalidInput,
            GgError::Parse(_) => GgStatus::Parse,
            GgError::OutsideDomain(_) | GgError::DomainMismatch(_) | GgError::NoChart(_) => GgStatus::Domain,
            GgError::StepTooLarge | GgError::StepUnderflow { .. } => GgStatus::Integration,
            GgError::Collision | GgError::Degenerate(_) => GgStatus::Collision,
            GgError::Support(_) => GgStatus::Support,
            GgError::NotHamiltonian(_) => GgStatus::NotHamiltonian,
            GgError::Rejection { .. } | GgError::RetryBudget(_) => GgStatus::Rejection,
            GgError::Unsupported(_) => GgStatus::Unsupported,
            GgError::Io(_) => GgStatus::Io,
        }
    }
}

/// Opaque isotopy handle.
pub struct GgIsotopy(Isotopy);

/// Opaque quasi-morphism handle.
pub struct GgQuasiMorphism(QuasiMorphism);

/// A Monte Carlo estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GgEstimate {
    /// Sample mean times the configuration-space volume.
    pub value: f64,
    pub std_error: f64,
    pub mean: f64,
    pub samples: u64,
    pub rejected: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<(), GgStatus>>(f: F) -> GgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GgStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside gg-core");
            GgStatus::Panic
        }
    }
}

fn fail(e: GgError) -> GgStatus {
    set_error(&e.to_string());
    GgStatus::from(&e)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, GgStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(GgStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        GgStatus::InvalidInput
    })
}

fn null() -> GgStatus {
    set_error("null pointer argument");
    GgStatus::NullPointer
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer is valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Build an isotopy from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gg_isotopy_from_json(json: *const c_char, out: *mut *mut GgIsotopy) -> GgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let text = read_str(json)?;
        let iso = isotopy_from_json(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(GgIsotopy(iso)));
        Ok(())
    })
}

/// Release an isotopy handle; null is ignored.
///
/// # Safety
/// `iso` must come from [`gg_isotopy_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn gg_isotopy_free(iso: *mut GgIsotopy) {
    if !iso.is_null() {
        drop(Box::from_raw(iso));
    }
}

/// Build a quasi-morphism from a registry spec such as `lk:1,2`, `expsum`
/// or `brooks:a1 b1`; `genus` is the genus of the words it will see.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gg_qm_from_spec(spec: *const c_char, genus: u16, out: *mut *mut GgQuasiMorphism) -> GgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let qm = QuasiMorphism::from_spec(read_str(spec)?, genus).map_err(fail)?;
        *out = Box::into_raw(Box::new(GgQuasiMorphism(qm)));
        Ok(())
    })
}

/// # Safety
/// `qm` must come from [`gg_qm_from_spec`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn gg_qm_free(qm: *mut GgQuasiMorphism) {
    if !qm.is_null() {
        drop(Box::from_raw(qm));
    }
}

/// Monte Carlo average of `qm` over `n`-point configurations traced by
/// `iso`. `workers = 0` uses the default pool.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gg_phi_n(
    iso: *const GgIsotopy,
    qm: *const GgQuasiMorphism,
    n: usize,
    samples: usize,
    seed: u64,
    workers: usize,
    out: *mut GgEstimate,
) -> GgStatus {
    guard(|| {
        if iso.is_null() || qm.is_null() || out.is_null() {
            return Err(null());
        }
        let opts = EstimatorOptions { workers: (workers > 0).then_some(workers), ..Default::default() };
        let e = phi_n(&(*qm).0, &(*iso).0, n, samples, seed, &opts).map_err(fail)?;
        *out = GgEstimate { value: e.value, std_error: e.std_error, mean: e.mean, samples: e.samples as u64, rejected: e.rejected };
        Ok(())
    })
}

/// Calabi invariant of a compactly supported disc isotopy.
///
/// # Safety
/// `iso` must be live; `value` and `std_error` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gg_calabi_disc(
    iso: *const GgIsotopy,
    samples: usize,
    seed: u64,
    value: *mut f64,
    std_error: *mut f64,
) -> GgStatus {
    guard(|| {
        if iso.is_null() || value.is_null() || std_error.is_null() {
            return Err(null());
        }
        let c = calabi_disc(&(*iso).0, samples, seed, &EstimatorOptions::default()).map_err(fail)?;
        if let (CalabiValue::Disc(v), CalabiValue::Disc(s)) = (c.value, c.std_error) {
            *value = v;
            *std_error = s;
        }
        Ok(())
    })
}

/// Trace the configuration `xy = [x1, y1, x2, y2, ...]` of `n` points and
/// return its word as a new string, released with [`gg_string_free`].
///
/// # Safety
/// `xy` must hold `2 n` doubles; `iso` live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gg_trace_word(iso: *const GgIsotopy, xy: *const f64, n: usize, out: *mut *mut c_char) -> GgStatus {
    guard(|| {
        if iso.is_null() || xy.is_null() || out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let coords = std::slice::from_raw_parts(xy, 2 * n);
        let x: Vec<Point> = coords.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect();
        let iso = &(*iso).0;
        let z = default_basepoints(&iso.model(), n);
        let w = trace_word(iso, &x, &z, &TraceOptions::default()).map_err(fail)?;
        *out = CString::new(w.to_string()).map_err(|_| GgStatus::Io)?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn gg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
