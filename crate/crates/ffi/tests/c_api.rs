use std::ffi::{CStr, CString};
use std::ptr;

use microgarch::sim::simulate_with;
use microgarch::stats::evaluate_stylized_facts;
use microgarch::{MicroParams, RunSettings};
use microgarch_ffi::*;

fn last_error() -> String {
    let p = mg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn default_params() -> *mut MgParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { mg_params_default(&mut p) }, MgStatus::Ok);
    p
}

#[test]
fn reference_mapping() {
    let p = default_params();
    let mut g = MgGarch::default();
    assert_eq!(
        unsafe { mg_micro_to_garch(p, 0.0, 0.0, 0.0, &mut g) },
        MgStatus::Ok
    );
    assert!((g.alpha - 0.589824).abs() < 1e-12);
    assert!((g.beta - 0.147456).abs() < 1e-12);
    assert!((g.omega - 2.56).abs() < 1e-12);
    assert!((unsafe { mg_stationarity_margin(p) } - 0.26272).abs() < 1e-12);
    unsafe { mg_params_free(p) };
}

#[test]
fn nonstationary_params_rejected() {
    let mut p = ptr::null_mut();
    let status = unsafe { mg_params_new(4.0, 0.4, 1.0, 0.2, 0.6, 1.2, 1.2, &mut p) };
    assert_eq!(status, MgStatus::NonStationary);
    assert!(p.is_null());
    assert!(last_error().contains(">= 1"));
    let status = unsafe { mg_params_new(-4.0, 0.4, 1.0, 0.2, 0.4, 1.2, 1.2, &mut p) };
    assert_eq!(status, MgStatus::InvalidArgument);
}

#[test]
fn null_pointers_reported() {
    assert_eq!(
        unsafe { mg_params_default(ptr::null_mut()) },
        MgStatus::NullPointer
    );
    let mut g = MgGarch::default();
    assert_eq!(
        unsafe { mg_micro_to_garch(ptr::null(), 0.0, 0.0, 0.0, &mut g) },
        MgStatus::NullPointer
    );
    assert_eq!(unsafe { mg_series_len(ptr::null()) }, 0);
    assert!(unsafe { mg_stationarity_margin(ptr::null()) }.is_nan());
    unsafe {
        mg_params_free(ptr::null_mut());
        mg_series_free(ptr::null_mut());
    }
}

#[test]
fn function_tags() {
    let p = default_params();
    let id = CString::new("identity").unwrap();
    let zero = CString::new("zero").unwrap();
    assert_eq!(
        unsafe { mg_params_set_functions(p, id.as_ptr(), zero.as_ptr()) },
        MgStatus::Ok
    );
    let mut g = MgGarch::default();
    unsafe { mg_micro_to_garch(p, 0.5, 0.0, 0.0, &mut g) };
    // omega = 2.56 * (1 + 0.2^2 * 0.5^2); h is zero
    assert!((g.omega - 2.56 * 1.01).abs() < 1e-12);
    let bad = CString::new("cube").unwrap();
    assert_eq!(
        unsafe { mg_params_set_functions(p, bad.as_ptr(), ptr::null()) },
        MgStatus::InvalidArgument
    );
    assert!(last_error().contains("cube"));
    unsafe { mg_params_free(p) };
}

#[test]
fn simulate_matches_library() {
    let p = default_params();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { mg_simulate(p, 500, 100, 17, &mut s) },
        MgStatus::Ok
    );
    let n = unsafe { mg_series_len(s) };
    assert_eq!(n, 500);
    let mut buf = vec![0.0; n];
    assert_eq!(
        unsafe { mg_series_returns(s, buf.as_mut_ptr(), n - 1) },
        MgStatus::BufferTooSmall
    );
    assert_eq!(
        unsafe { mg_series_returns(s, buf.as_mut_ptr(), n) },
        MgStatus::Ok
    );

    let direct = simulate_with(
        &MicroParams::default(),
        RunSettings {
            length: 500,
            burn_in: 100,
        },
        17,
    )
    .unwrap();
    assert_eq!(buf, direct.returns);
    assert_eq!(
        unsafe { mg_series_negative_volume_steps(s) },
        direct.negative_volume_steps
    );

    let mut facts = MgFacts::default();
    assert_eq!(
        unsafe { mg_stylized_facts(buf.as_ptr(), n, 0.01, &mut facts) },
        MgStatus::Ok
    );
    let report = evaluate_stylized_facts(&buf, 0.01).unwrap();
    assert_eq!(facts.sample_size, 500);
    assert_eq!(facts.skewness, report.skewness.value);
    assert_eq!(facts.kurtosis_p, report.kurtosis.p_value);
    assert_eq!(facts.sq_autocorr1, report.lag1().value);
    assert_eq!(
        facts.present & MG_FACT_EXCESS_KURTOSIS != 0,
        report.kurtosis.present
    );
    unsafe {
        mg_series_free(s);
        mg_params_free(p);
    }
}

#[test]
fn short_series_is_data_error() {
    let v = [0.1, -0.2, 0.3];
    let mut facts = MgFacts::default();
    assert_eq!(
        unsafe { mg_stylized_facts(v.as_ptr(), v.len(), 0.01, &mut facts) },
        MgStatus::DegenerateData
    );
}

#[test]
fn garch_step_recursion() {
    let g = MgGarch {
        omega: 0.1,
        f: 0.0,
        alpha: 0.5,
        beta: 0.3,
    };
    let (mut r, mut u, mut s2) = (0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { mg_garch_step(&g, 1.0, 0.5, 2.0, &mut r, &mut u, &mut s2) },
        MgStatus::Ok
    );
    // sigma^2 = 0.1 + 0.5 * 1 + 0.3 * 0.5 = 0.75
    assert!((s2 - 0.75).abs() < 1e-15);
    assert!((r - 2.0 * 0.75f64.sqrt()).abs() < 1e-15);
    assert_eq!(u, r);
    let bad = MgGarch { alpha: 0.8, ..g };
    assert_eq!(
        unsafe { mg_garch_step(&bad, 1.0, 0.5, 2.0, &mut r, &mut u, &mut s2) },
        MgStatus::NonStationary
    );
}

#[test]
fn rng_id_is_static() {
    let id = unsafe { CStr::from_ptr(mg_rng_id()) }.to_str().unwrap();
    assert!(id.contains("chacha20"));
    assert_eq!(mg_rng_id(), mg_rng_id());
}

#[test]
fn header_declares_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/microgarch.h"))
            .unwrap();
    for sym in [
        "mg_simulate",
        "mg_micro_to_garch",
        "mg_stylized_facts",
        "MgStatus",
        "MgFacts",
        "MG_FACT_NON_NORMAL",
    ] {
        assert!(header.contains(sym), "{sym}");
    }
}
