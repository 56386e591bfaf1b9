//! C ABI over the wtangle library. States travel as opaque handles, bulk
//! results as JSON strings allocated here and released with
//! [`wtangle_string_free`]. Every call reports a status code; the message
//! behind the most recent failure is kept per thread and read back with
//! [`wtangle_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use wtangle::error::Error;
use wtangle::measures::MeasureReport;
use wtangle::separability::{audit_theorem, certify};
use wtangle::states::{build_asymmetric, build_symmetric, WSubspaceState};

/// Opaque handle around one subspace state.
pub struct WtangleState(WSubspaceState);

/// Status of one FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WtangleStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// The input failed validation (shape, trace, positivity, JSON, ...).
    InvalidInput = 2,
    /// The zero-coherence separability hypothesis does not hold.
    HypothesisViolated = 3,
    /// The numerical backend failed or produced unusable output.
    NumericalFailure = 4,
    /// A panic was caught at the boundary; state may be fine, result is not.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn remember_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> WtangleStatus {
    match e {
        Error::CoherencesNotZero { .. } | Error::SylvesterViolation { .. } => {
            WtangleStatus::HypothesisViolated
        }
        Error::NumericalInstability { .. } | Error::Backend(_) => WtangleStatus::NumericalFailure,
        _ => WtangleStatus::InvalidInput,
    }
}

fn fail(e: &Error) -> WtangleStatus {
    remember_error(&e.to_string());
    status_of(e)
}

/// Run a fallible body, translating errors and panics into statuses.
fn guarded(f: impl FnOnce() -> Result<WtangleStatus, Error>) -> WtangleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => fail(&e),
        Err(_) => {
            remember_error("internal panic");
            WtangleStatus::Internal
        }
    }
}

fn string_out(s: String, out: *mut *mut c_char) -> Result<WtangleStatus, Error> {
    let c = CString::new(s.replace('\0', " ")).unwrap_or_default();
    unsafe { *out = c.into_raw() };
    Ok(WtangleStatus::Ok)
}

/// Message describing this thread's most recent failure. Valid until the
/// next failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn wtangle_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn wtangle_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string allocated by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn wtangle_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release a state handle.
///
/// # Safety
/// `state` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn wtangle_state_free(state: *mut WtangleState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

fn handle_out(state: WSubspaceState, out: *mut *mut WtangleState) -> Result<WtangleStatus, Error> {
    unsafe { *out = Box::into_raw(Box::new(WtangleState(state))) };
    Ok(WtangleStatus::Ok)
}

/// Permutation-symmetric pure state with vacuum amplitude a = a_re + i a_im.
///
/// # Safety
/// `out` must be a valid pointer; on `Ok` it receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn wtangle_state_symmetric(
    n: u32,
    a_re: f64,
    a_im: f64,
    out: *mut *mut WtangleState,
) -> WtangleStatus {
    if out.is_null() {
        remember_error("out pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        let s = build_symmetric(n as usize, num_complex_new(a_re, a_im))?;
        handle_out(s, out)
    })
}

// num-complex is not part of the ABI surface, so rebuild values locally.
fn num_complex_new(re: f64, im: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(re, im)
}

/// Pure single-excitation state from `len` complex amplitudes. `k_im` may be
/// null for real amplitudes.
///
/// # Safety
/// `k_re` (and `k_im` when non-null) must point to `len` doubles; `out` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn wtangle_state_asymmetric(
    k_re: *const f64,
    k_im: *const f64,
    len: usize,
    out: *mut *mut WtangleState,
) -> WtangleStatus {
    if out.is_null() || k_re.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        let re = std::slice::from_raw_parts(k_re, len);
        let im: Option<&[f64]> = if k_im.is_null() {
            None
        } else {
            Some(std::slice::from_raw_parts(k_im, len))
        };
        let k: Vec<num_complex::Complex64> = (0..len)
            .map(|i| num_complex_new(re[i], im.map_or(0.0, |v| v[i])))
            .collect();
        let s = build_asymmetric(len, k)?;
        handle_out(s, out)
    })
}

/// Parse a state from its JSON form.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wtangle_state_from_json(
    json: *const c_char,
    out: *mut *mut WtangleState,
) -> WtangleStatus {
    if json.is_null() || out.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Error::Json(e.to_string()))?;
        let s = WSubspaceState::from_json(text)?;
        handle_out(s, out)
    })
}

/// Serialize a state to JSON; free the result with `wtangle_string_free`.
///
/// # Safety
/// `state` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wtangle_state_to_json(
    state: *const WtangleState,
    out_json: *mut *mut c_char,
) -> WtangleStatus {
    if state.is_null() || out_json.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| string_out((*state).0.to_json(), out_json))
}

/// Qubit count of a state; 0 if the handle is null.
///
/// # Safety
/// `state` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn wtangle_state_qubits(state: *const WtangleState) -> u32 {
    if state.is_null() {
        0
    } else {
        (*state).0.n() as u32
    }
}

/// Full measure report as JSON, both sums normalized by `z`.
///
/// # Safety
/// `state` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wtangle_measure_json(
    state: *const WtangleState,
    z: f64,
    tol: f64,
    cap: usize,
    out_json: *mut *mut c_char,
) -> WtangleStatus {
    if state.is_null() || out_json.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        let report = MeasureReport::from_subspace(&(*state).0, z, z, tol, cap)?;
        string_out(
            serde_json::to_string_pretty(&report).map_err(Error::from)?,
            out_json,
        )
    })
}

/// Z-normalized sum of squared pair concurrences.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wtangle_sum_two_tangles(
    state: *const WtangleState,
    z: f64,
    tol: f64,
    out: *mut f64,
) -> WtangleStatus {
    if state.is_null() || out.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        *out = wtangle::measures::sum_two_tangles_subspace(&(*state).0, z, tol)?;
        Ok(WtangleStatus::Ok)
    })
}

/// Z-normalized sum of pi-tangles over all pivots.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wtangle_sum_pi_tangles(
    state: *const WtangleState,
    z: f64,
    tol: f64,
    cap: usize,
    out: *mut f64,
) -> WtangleStatus {
    if state.is_null() || out.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        *out = wtangle::measures::sum_pi_tangles_subspace(&(*state).0, z, tol, cap)?;
        Ok(WtangleStatus::Ok)
    })
}

/// Pi-tangle of one pivot qubit.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wtangle_pi_tangle(
    state: *const WtangleState,
    pivot: u32,
    tol: f64,
    cap: usize,
    out: *mut f64,
) -> WtangleStatus {
    if state.is_null() || out.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        *out = wtangle::measures::pi_tangle_subspace(&(*state).0, pivot as usize, tol, cap)?;
        Ok(WtangleStatus::Ok)
    })
}

/// Separability certificate as JSON. Fails with `HypothesisViolated` when
/// the state carries excitation-excitation coherences above `tol`.
///
/// # Safety
/// `state` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wtangle_certify_json(
    state: *const WtangleState,
    tol: f64,
    out_json: *mut *mut c_char,
) -> WtangleStatus {
    if state.is_null() || out_json.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        let cert = certify(&(*state).0, tol)?;
        string_out(cert.to_json()?, out_json)
    })
}

/// Run the randomized separability audit. On `Ok`, `out_passed` and
/// `out_total` receive the sample counts; the full JSON report lands in
/// `out_json` when that pointer is non-null.
///
/// # Safety
/// `ns` must point to `ns_len` u32 values; `out_passed` and `out_total`
/// must be valid; `out_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn wtangle_audit(
    ns: *const u32,
    ns_len: usize,
    samples_per_n: u32,
    seed: u64,
    tol: f64,
    out_passed: *mut u64,
    out_total: *mut u64,
    out_json: *mut *mut c_char,
) -> WtangleStatus {
    if ns.is_null() || out_passed.is_null() || out_total.is_null() {
        remember_error("required pointer is null");
        return WtangleStatus::NullPointer;
    }
    guarded(|| {
        let ns_vec: Vec<usize> = std::slice::from_raw_parts(ns, ns_len)
            .iter()
            .map(|&v| v as usize)
            .collect();
        let report = audit_theorem(&ns_vec, samples_per_n as usize, seed, tol)?;
        *out_passed = report.passed as u64;
        *out_total = report.total as u64;
        if !out_json.is_null() {
            return string_out(
                serde_json::to_string_pretty(&report).map_err(Error::from)?,
                out_json,
            );
        }
        Ok(WtangleStatus::Ok)
    })
}
