use std::ffi::{c_char, CStr};
use std::ptr;

use alc_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let needed = unsafe { alc_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(needed > 0, "no error recorded");
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn two_blocks() -> Vec<f64> {
    let n = 6;
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = if i == j {
                1.0
            } else if (i < 3) == (j < 3) {
                0.9
            } else {
                0.0
            };
        }
    }
    m
}

#[test]
fn cluster_round_trip() {
    let m = two_blocks();
    let mut corr = ptr::null_mut();
    let mut result = ptr::null_mut();
    unsafe {
        assert_eq!(
            alc_correlation_from_matrix(m.as_ptr(), 6, &mut corr),
            AlcStatus::Ok
        );
        assert_eq!(alc_correlation_size(corr), 6);
        assert_eq!(alc_cluster(corr, 7, false, &mut result), AlcStatus::Ok);
        assert_eq!(alc_result_len(result), 6);
        assert_eq!(alc_result_num_clusters(result), 2);
        let mut labels = [usize::MAX; 6];
        assert_eq!(
            alc_result_labels(result, labels.as_mut_ptr(), 6),
            AlcStatus::Ok
        );
        assert_eq!(labels, [0, 0, 0, 1, 1, 1]);
        assert_eq!(alc_result_merges(result), 4);
        assert!(alc_result_likelihood(result) > 0.0);
        assert!(!alc_result_clamped(result));
        assert_eq!(
            alc_result_labels(result, labels.as_mut_ptr(), 5),
            AlcStatus::Input
        );
        alc_result_free(result);
        alc_correlation_free(corr);
    }
}

#[test]
fn series_input_and_clamp_flag() {
    let rows = [1.0, 2.0, 0.5, 3.0, 1.0, 2.0, 0.5, 3.0];
    let mut corr = ptr::null_mut();
    let mut result = ptr::null_mut();
    unsafe {
        assert_eq!(
            alc_correlation_from_series(rows.as_ptr(), 2, 4, &mut corr),
            AlcStatus::Ok
        );
        assert_eq!(alc_cluster(corr, 0, true, &mut result), AlcStatus::Ok);
        assert_eq!(alc_result_num_clusters(result), 1);
        assert!(alc_result_clamped(result));
        alc_result_free(result);
        alc_correlation_free(corr);
    }
}

#[test]
fn errors_map_to_status_and_message() {
    let mut corr = ptr::null_mut();
    unsafe {
        let asym = [1.0, 0.5, 0.2, 1.0];
        assert_eq!(
            alc_correlation_from_matrix(asym.as_ptr(), 2, &mut corr),
            AlcStatus::Input
        );
        assert!(corr.is_null());
        assert!(!last_error().is_empty());

        let flat = [1.0, 1.0, 1.0, 1.0, 2.0, 3.0];
        assert_eq!(
            alc_correlation_from_series(flat.as_ptr(), 2, 3, &mut corr),
            AlcStatus::Input
        );
        assert!(last_error().contains("row 0"), "{}", last_error());

        assert_eq!(
            alc_correlation_from_matrix(ptr::null(), 2, &mut corr),
            AlcStatus::NullPointer
        );
        assert_eq!(
            alc_cluster(ptr::null(), 0, false, &mut ptr::null_mut()),
            AlcStatus::NullPointer
        );

        let one = [1.0];
        assert_eq!(
            alc_correlation_from_matrix(one.as_ptr(), 1, &mut corr),
            AlcStatus::Ok
        );
        let mut result = ptr::null_mut();
        assert_ne!(alc_cluster(corr, 0, false, &mut result), AlcStatus::Ok);
        assert!(result.is_null());
        alc_correlation_free(corr);

        let ok = two_blocks();
        let mut corr = ptr::null_mut();
        assert_eq!(
            alc_correlation_from_matrix(ok.as_ptr(), 6, &mut corr),
            AlcStatus::Ok
        );
        assert_eq!(alc_last_error_message(ptr::null_mut(), 0), 0);
        alc_correlation_free(corr);
    }
}

#[test]
fn message_truncates_to_buffer() {
    let asym = [1.0, 0.5, 0.2, 1.0];
    let mut corr = ptr::null_mut();
    unsafe {
        alc_correlation_from_matrix(asym.as_ptr(), 2, &mut corr);
        let needed = alc_last_error_message(ptr::null_mut(), 0);
        let mut small = [1 as c_char; 4];
        assert_eq!(alc_last_error_message(small.as_mut_ptr(), 4), needed);
        assert_eq!(small[3], 0);
    }
}

#[test]
fn ari_matches_core() {
    let a = [0usize, 0, 1, 1, 2, 2];
    let b = [5usize, 5, 9, 9, 1, 1];
    let c = [0usize, 1, 0, 1, 0, 1];
    let mut out = f64::NAN;
    unsafe {
        assert_eq!(
            alc_adjusted_rand_index(a.as_ptr(), b.as_ptr(), 6, &mut out),
            AlcStatus::Ok
        );
        assert_eq!(out, 1.0);
        assert_eq!(
            alc_adjusted_rand_index(a.as_ptr(), c.as_ptr(), 6, &mut out),
            AlcStatus::Ok
        );
        assert!(out < 0.0);
    }
}

#[test]
fn null_handles_are_inert() {
    unsafe {
        assert_eq!(alc_correlation_size(ptr::null()), 0);
        assert_eq!(alc_result_len(ptr::null()), 0);
        assert!(alc_result_likelihood(ptr::null()).is_nan());
        alc_result_free(ptr::null_mut());
        alc_correlation_free(ptr::null_mut());
        let v = CStr::from_ptr(alc_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}
