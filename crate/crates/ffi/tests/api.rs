use std::ffi::{CStr, CString};
use std::ptr;

use entrywise_ffi::*;

fn last_error() -> String {
    let p = ew_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn real_matrix(n: usize, re: &[f64]) -> *mut EwMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ew_matrix_new(n, re.as_ptr(), ptr::null(), &mut m) }, EwStatus::Ok);
    m
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(ew_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn threshold_functions() {
    let c = [1.0, 1.0];
    let mut k = 0.0;
    assert_eq!(unsafe { ew_threshold_constant(c.as_ptr(), 2, 2, 1.0, &mut k) }, EwStatus::Ok);
    assert!((k - 5.0).abs() < 1e-14);
    assert!(ew_last_error().is_null());

    let mut ks = [0.0; 2];
    assert_eq!(unsafe { ew_partial_constants(c.as_ptr(), 2, 2, 1.0, ks.as_mut_ptr()) }, EwStatus::Ok);
    assert!((ks[0] - 1.0).abs() < 1e-14 && (ks[1] - 5.0).abs() < 1e-14);

    let mut v = EwAdmissibility::Admissible;
    assert_eq!(unsafe { ew_admissible(c.as_ptr(), 2, 2, 1.0, -0.2, &mut v) }, EwStatus::Ok);
    assert_eq!(v, EwAdmissibility::Boundary);
    assert_eq!(unsafe { ew_admissible(c.as_ptr(), 2, 2, 1.0, -0.3, &mut v) }, EwStatus::Ok);
    assert_eq!(v, EwAdmissibility::Inadmissible);
    assert_eq!(unsafe { ew_admissible(c.as_ptr(), 2, 2, 1.0, 0.0, &mut v) }, EwStatus::Ok);
    assert_eq!(v, EwAdmissibility::Admissible);

    let mut d = 0u64;
    assert_eq!(unsafe { ew_hook_dimension(5, 3, 1, &mut d) }, EwStatus::Ok);
    // binom(5,1) binom(3,1)
    assert_eq!(d, 15);
}

#[test]
fn errors_are_reported() {
    let c = [1.0, 0.0];
    let mut k = 0.0;
    assert_eq!(unsafe { ew_threshold_constant(c.as_ptr(), 2, 2, 1.0, &mut k) }, EwStatus::InvalidArgument);
    assert!(last_error().contains("positive"));
    assert_eq!(unsafe { ew_threshold_constant(ptr::null(), 2, 2, 1.0, &mut k) }, EwStatus::NullPointer);
    assert_eq!(unsafe { ew_threshold_constant([1.0].as_ptr(), 1, 2, 1.0, ptr::null_mut()) }, EwStatus::NullPointer);
    let mut d = 0u64;
    assert_eq!(unsafe { ew_hook_dimension(1, 3, 0, &mut d) }, EwStatus::InvalidArgument);

    let bad = real_matrix(2, &[1.0, 2.0, 2.0, 1.0]);
    let mut n = 0usize;
    assert_eq!(unsafe { ew_simultaneous_kernel_dim(bad, 1e-9, &mut n) }, EwStatus::NotPsd);
    assert!(last_error().contains("eigenvalue"));
    let mut labels = [0usize; 2];
    assert_eq!(unsafe { ew_stratify(bad, 7, 1e-9, labels.as_mut_ptr(), &mut n) }, EwStatus::InvalidArgument);
    unsafe { ew_matrix_free(bad) };

    let mut m = ptr::null_mut();
    let text = CString::new("{\"n\": 2}").unwrap();
    assert_eq!(unsafe { ew_matrix_from_json(text.as_ptr(), &mut m) }, EwStatus::Parse);
    assert!(m.is_null());
}

#[test]
fn matrices_roundtrip_through_json() {
    let re = [2.0, 0.5, 0.5, 1.0];
    let im = [0.0, -0.25, 0.25, 0.0];
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { ew_matrix_new(2, re.as_ptr(), im.as_ptr(), &mut a) }, EwStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ew_matrix_to_json(a, &mut s) }, EwStatus::Ok);
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { ew_matrix_from_json(s, &mut b) }, EwStatus::Ok);
    unsafe { ew_string_free(s) };
    let mut n = 0;
    assert_eq!(unsafe { ew_matrix_dim(b, &mut n) }, EwStatus::Ok);
    assert_eq!(n, 2);
    for i in 0..2 {
        for j in 0..2 {
            let (mut x, mut y) = (0.0, 0.0);
            assert_eq!(unsafe { ew_matrix_get(b, i, j, &mut x, &mut y) }, EwStatus::Ok);
            assert_eq!((x, y), (re[2 * i + j], im[2 * i + j]));
        }
    }
    let (mut x, mut y) = (0.0, 0.0);
    assert_eq!(unsafe { ew_matrix_get(b, 2, 0, &mut x, &mut y) }, EwStatus::InvalidArgument);
    let mut psd = -1;
    assert_eq!(unsafe { ew_psd_check(b, 1e-9, &mut psd) }, EwStatus::Ok);
    assert_eq!(psd, 1);
    unsafe {
        ew_matrix_free(a);
        ew_matrix_free(b);
        ew_matrix_free(ptr::null_mut());
        ew_string_free(ptr::null_mut());
    }
}

#[test]
fn rayleigh_functions_agree() {
    let c = [1.0, 2.0, 1.0];
    let u_re = [1.0, 0.5, 0.0];
    let u_im = [0.0, 0.5, -0.3];
    let mut closed = 0.0;
    assert_eq!(unsafe { ew_rayleigh_rank_one(c.as_ptr(), 3, 4, u_re.as_ptr(), u_im.as_ptr(), &mut closed) }, EwStatus::Ok);
    let mut re = [0.0; 9];
    let mut im = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            // u u^*
            let (a, b) = (u_re[i], u_im[i]);
            let (p, q) = (u_re[j], -u_im[j]);
            re[3 * i + j] = a * p - b * q;
            im[3 * i + j] = a * q + b * p;
        }
    }
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { ew_matrix_new(3, re.as_ptr(), im.as_ptr(), &mut a) }, EwStatus::Ok);
    let mut spectral = 0.0;
    assert_eq!(unsafe { ew_rayleigh_constant(c.as_ptr(), 3, 4, a, 1e-9, &mut spectral) }, EwStatus::Ok);
    assert!((spectral - closed).abs() <= 1e-8 * closed.abs());
    unsafe { ew_matrix_free(a) };
}

#[test]
fn stratify_and_kernel() {
    // blocks {1,2} and {3}
    let a = real_matrix(3, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0]);
    let mut labels = [9usize; 3];
    let mut blocks = 0usize;
    assert_eq!(
        unsafe { ew_stratify(a, EwGroup::Trivial as i32, 1e-9, labels.as_mut_ptr(), &mut blocks) },
        EwStatus::Ok
    );
    assert_eq!(blocks, 2);
    assert_eq!(labels, [0, 0, 1]);
    let mut k = 0usize;
    assert_eq!(unsafe { ew_simultaneous_kernel_dim(a, 1e-9, &mut k) }, EwStatus::Ok);
    assert_eq!(k, 1);
    unsafe { ew_matrix_free(a) };
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/entrywise.h")).unwrap();
    for name in [
        "ew_last_error",
        "ew_version",
        "ew_string_free",
        "ew_matrix_new",
        "ew_matrix_from_json",
        "ew_matrix_to_json",
        "ew_matrix_dim",
        "ew_matrix_get",
        "ew_matrix_free",
        "ew_threshold_constant",
        "ew_partial_constants",
        "ew_admissible",
        "ew_hook_dimension",
        "ew_rayleigh_constant",
        "ew_rayleigh_rank_one",
        "ew_stratify",
        "ew_simultaneous_kernel_dim",
        "ew_psd_check",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct ew_matrix ew_matrix;"));
}
