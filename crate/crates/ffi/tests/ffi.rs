use std::ffi::{CStr, CString};
use std::ptr;

use gg_ffi::*;

const TWIST: &str = r#"{"model": "disc", "segments": [{"kind": "twist",
    "chart": {"kind": "disc", "cx": 0, "cy": 0, "radius": 0.8},
    "profile": {"kind": "plateau", "turns": 1, "inner": 0, "outer": 0.25}}]}"#;

fn isotopy(json: &str) -> *mut GgIsotopy {
    let c = CString::new(json).unwrap();
    let mut iso = ptr::null_mut();
    assert_eq!(unsafe { gg_isotopy_from_json(c.as_ptr(), &mut iso) }, GgStatus::Ok);
    iso
}

fn qm(spec: &str) -> *mut GgQuasiMorphism {
    let c = CString::new(spec).unwrap();
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { gg_qm_from_spec(c.as_ptr(), 0, &mut q) }, GgStatus::Ok);
    q
}

#[test]
fn estimate_through_handles() {
    let iso = isotopy(TWIST);
    let q = qm("lk:1,2");
    let mut a = GgEstimate::default();
    let mut b = GgEstimate::default();
    unsafe {
        assert_eq!(gg_phi_n(iso, q, 2, 300, 7, 1, &mut a), GgStatus::Ok);
        assert_eq!(gg_phi_n(iso, q, 2, 300, 7, 2, &mut b), GgStatus::Ok);
        gg_qm_free(q);
        gg_isotopy_free(iso);
    }
    assert_eq!(a, b);
    assert_eq!(a.samples, 300);
    assert!(a.value > 0.0 && a.std_error > 0.0);
}

#[test]
fn trace_word_string() {
    let iso = isotopy(TWIST);
    let xy = [-0.2, 0.0, 0.2, 0.0];
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(gg_trace_word(iso, xy.as_ptr(), 2, &mut s), GgStatus::Ok);
        let w = CStr::from_ptr(s).to_str().unwrap().to_string();
        assert!(w == "s1^2" || w == "s1 s1", "{w}");
        gg_string_free(s);
        let mut v = 0.0;
        let mut e = 0.0;
        assert_eq!(gg_calabi_disc(iso, 200, 1, &mut v, &mut e), GgStatus::Ok);
        assert!(v > 0.0);
        gg_isotopy_free(iso);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("{not json").unwrap();
    let mut iso = ptr::null_mut();
    unsafe {
        assert_eq!(gg_isotopy_from_json(bad.as_ptr(), &mut iso), GgStatus::Parse);
        assert!(iso.is_null());
        assert!(!CStr::from_ptr(gg_last_error()).to_bytes().is_empty());
        assert_eq!(gg_isotopy_from_json(ptr::null(), &mut iso), GgStatus::NullPointer);
        let spec = CString::new("nonsense").unwrap();
        let mut q = ptr::null_mut();
        assert_eq!(gg_qm_from_spec(spec.as_ptr(), 0, &mut q), GgStatus::InvalidInput);
        let mut out = GgEstimate::default();
        assert_eq!(gg_phi_n(ptr::null(), ptr::null(), 2, 10, 1, 0, &mut out), GgStatus::NullPointer);
        // a braid quasi-morphism on a closed model
        let g2 = isotopy(r#"{"model": "genus2", "segments": [{"kind": "identity"}]}"#);
        let lk = qm("lk:1,2");
        assert_eq!(gg_phi_n(g2, lk, 2, 10, 1, 0, &mut out), GgStatus::Unsupported);
        gg_qm_free(lk);
        gg_isotopy_free(g2);
        gg_isotopy_free(ptr::null_mut());
        assert!(!CStr::from_ptr(gg_version()).to_bytes().is_empty());
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gg_ffi.h")).unwrap();
    for name in ["gg_isotopy_from_json", "gg_phi_n", "gg_trace_word", "gg_last_error", "GG_STATUS_OK", "typedef struct GgIsotopy"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
