//! Exercises the C ABI through the exported symbols, including error paths
//! and string/handle ownership.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use wtangle_ffi::*;

unsafe fn read_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    wtangle_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(wtangle_last_error_message())
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn version_is_a_static_string() {
    unsafe {
        let v = CStr::from_ptr(wtangle_version()).to_str().unwrap();
        assert!(!v.is_empty());
        assert!(v.split('.').count() >= 2);
    }
}

#[test]
fn symmetric_state_measures_to_one() {
    unsafe {
        let mut state: *mut WtangleState = ptr::null_mut();
        let st = wtangle_state_symmetric(3, 0.0, 0.0, &mut state);
        assert_eq!(st, WtangleStatus::Ok);
        assert_eq!(wtangle_state_qubits(state), 3);

        let mut sum = f64::NAN;
        let st = wtangle_sum_two_tangles(state, 0.75, 1e-9, &mut sum);
        assert_eq!(st, WtangleStatus::Ok);
        assert!((sum - 1.0).abs() <= 1e-12, "sum {sum}");

        let mut pi = f64::NAN;
        let st = wtangle_pi_tangle(state, 0, 1e-9, 12, &mut pi);
        assert_eq!(st, WtangleStatus::Ok);
        let expect = 8.0 / 9.0 - 2.0 * ((5.0f64.sqrt() - 1.0) / 3.0).powi(2);
        assert!((pi - expect).abs() <= 1e-12, "pi {pi}");

        let mut json: *mut c_char = ptr::null_mut();
        let st = wtangle_measure_json(state, 0.75, 1e-9, 12, &mut json);
        assert_eq!(st, WtangleStatus::Ok);
        let body = read_string(json);
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert_eq!(v["n"], 3);
        assert!((v["sum_two_tangles"].as_f64().unwrap() - 1.0).abs() <= 1e-12);

        wtangle_state_free(state);
    }
}

#[test]
fn asymmetric_state_round_trips_through_json() {
    unsafe {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let re = [0.0, h, h];
        let mut state: *mut WtangleState = ptr::null_mut();
        let st = wtangle_state_asymmetric(re.as_ptr(), ptr::null(), 3, &mut state);
        assert_eq!(st, WtangleStatus::Ok);

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(wtangle_state_to_json(state, &mut json), WtangleStatus::Ok);
        let body = read_string(json);

        let cjson = CString::new(body).unwrap();
        let mut again: *mut WtangleState = ptr::null_mut();
        assert_eq!(
            wtangle_state_from_json(cjson.as_ptr(), &mut again),
            WtangleStatus::Ok
        );

        let mut a = f64::NAN;
        let mut b = f64::NAN;
        assert_eq!(
            wtangle_sum_two_tangles(state, 0.75, 1e-9, &mut a),
            WtangleStatus::Ok
        );
        assert_eq!(
            wtangle_sum_two_tangles(again, 0.75, 1e-9, &mut b),
            WtangleStatus::Ok
        );
        assert!((a - 0.75).abs() <= 1e-12, "sum {a}");
        assert_eq!(a, b);

        wtangle_state_free(state);
        wtangle_state_free(again);
    }
}

#[test]
fn certify_reports_hypothesis_violations() {
    unsafe {
        let mut state: *mut WtangleState = ptr::null_mut();
        assert_eq!(
            wtangle_state_symmetric(3, 0.0, 0.0, &mut state),
            WtangleStatus::Ok
        );
        let mut json: *mut c_char = ptr::null_mut();
        let st = wtangle_certify_json(state, 1e-9, &mut json);
        assert_eq!(st, WtangleStatus::HypothesisViolated);
        assert!(json.is_null());
        assert!(
            last_error().contains("coherence"),
            "message: {}",
            last_error()
        );
        wtangle_state_free(state);
    }
}

#[test]
fn invalid_json_sets_the_error_message() {
    unsafe {
        let bad = CString::new("{ not json").unwrap();
        let mut state: *mut WtangleState = ptr::null_mut();
        let st = wtangle_state_from_json(bad.as_ptr(), &mut state);
        assert_eq!(st, WtangleStatus::InvalidInput);
        assert!(state.is_null());
        assert!(!last_error().is_empty());
    }
}

#[test]
fn null_pointers_are_rejected_not_dereferenced() {
    unsafe {
        let mut sum = 0.0;
        assert_eq!(
            wtangle_sum_two_tangles(ptr::null(), 1.0, 1e-9, &mut sum),
            WtangleStatus::NullPointer
        );
        let mut state: *mut WtangleState = ptr::null_mut();
        assert_eq!(
            wtangle_state_asymmetric(ptr::null(), ptr::null(), 3, &mut state),
            WtangleStatus::NullPointer
        );
        assert_eq!(wtangle_state_qubits(ptr::null()), 0);
        // Free functions tolerate null.
        wtangle_state_free(ptr::null_mut());
        wtangle_string_free(ptr::null_mut());
    }
}

#[test]
fn audit_runs_through_the_abi() {
    unsafe {
        let ns = [3u32, 4u32];
        let mut passed = 0u64;
        let mut total = 0u64;
        let mut json: *mut c_char = ptr::null_mut();
        let st = wtangle_audit(
            ns.as_ptr(),
            ns.len(),
            25,
            7,
            1e-9,
            &mut passed,
            &mut total,
            &mut json,
        );
        assert_eq!(st, WtangleStatus::Ok);
        assert_eq!(total, 50);
        assert_eq!(passed, 50);
        let body = read_string(json);
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert_eq!(v["total"], 50);
        assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn generated_header_exists_after_build() {
    // build.rs writes the header into the crate's include/ directory.
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("wtangle.h");
    let body = std::fs::read_to_string(&header)
        .unwrap_or_else(|e| panic!("missing {}: {e}", header.display()));
    assert!(body.contains("wtangle_state_symmetric"));
    assert!(body.contains("WTANGLE_H"));
    assert!(body.contains("wtangle_last_error_message"));
}
