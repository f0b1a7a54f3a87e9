//! C ABI over `alc-core`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns an
//! [`AlcStatus`]; on failure the message is kept per thread and read back with
//! [`alc_last_error_message`]. Panics never unwind into the caller.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use alc_core::evaluation::adjusted_rand_index;
use alc_core::{
    estimate_correlation, AlcError, ClusterResult, CorrelationMatrix, DataMatrix, EngineConfig,
    ErrorKind, Partition, Warning,
};

/// Status codes. Non-zero values mirror the CLI exit codes where they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlcStatus {
    Ok = 0,
    NullPointer = 1,
    Input = 2,
    Constraint = 3,
    Internal = 4,
    Panic = 5,
}

/// Validated correlation matrix.
pub struct AlcCorrelation {
    inner: CorrelationMatrix,
}

/// Outcome of one clustering run.
pub struct AlcResult {
    inner: ClusterResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(e: AlcError) -> AlcStatus {
    let status = match e.kind() {
        ErrorKind::Input => AlcStatus::Input,
        ErrorKind::Constraint => AlcStatus::Constraint,
        ErrorKind::Internal => AlcStatus::Internal,
    };
    set_error(e.to_string());
    status
}

fn null(name: &str) -> AlcStatus {
    set_error(format!("{name} is null"));
    AlcStatus::NullPointer
}

fn guard<F: FnOnce() -> AlcStatus>(f: F) -> AlcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("panic inside alc".into());
        AlcStatus::Panic
    })
}

/// Builds a handle from an `n x n` row-major matrix. Entries must form a
/// symmetric matrix in `[-1, 1]` with a unit diagonal.
///
/// # Safety
/// `entries` must point to `n * n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alc_correlation_from_matrix(
    entries: *const f64,
    n: usize,
    out: *mut *mut AlcCorrelation,
) -> AlcStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        if entries.is_null() {
            return null("entries");
        }
        let Some(len) = n.checked_mul(n) else {
            return fail(AlcError::InvalidInput(format!("matrix size {n} overflows")));
        };
        let values = slice::from_raw_parts(entries, len).to_vec();
        match CorrelationMatrix::new(n, values) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(AlcCorrelation { inner }));
                AlcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Estimates Pearson correlations between the rows of a `rows x cols`
/// row-major series matrix.
///
/// # Safety
/// `values` must point to `rows * cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alc_correlation_from_series(
    values: *const f64,
    rows: usize,
    cols: usize,
    out: *mut *mut AlcCorrelation,
) -> AlcStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        if values.is_null() {
            return null("values");
        }
        let Some(len) = rows.checked_mul(cols) else {
            return fail(AlcError::InvalidInput("series size overflows".into()));
        };
        let data = slice::from_raw_parts(values, len).to_vec();
        match DataMatrix::new(rows, cols, data).and_then(|d| estimate_correlation(&d)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(AlcCorrelation { inner }));
                AlcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of objects, or 0 for a null handle.
///
/// # Safety
/// `corr` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alc_correlation_size(corr: *const AlcCorrelation) -> usize {
    corr.as_ref().map_or(0, |c| c.inner.n())
}

/// # Safety
/// `corr` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn alc_correlation_free(corr: *mut AlcCorrelation) {
    if !corr.is_null() {
        drop(Box::from_raw(corr));
    }
}

/// Runs the clustering engine. Initiators are drawn from `seed` unless
/// `deterministic` is set.
///
/// # Safety
/// `corr` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn alc_cluster(
    corr: *const AlcCorrelation,
    seed: u64,
    deterministic: bool,
    out: *mut *mut AlcResult,
) -> AlcStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let Some(corr) = corr.as_ref() else {
            return null("corr");
        };
        let cfg = EngineConfig {
            seed,
            deterministic_order: deterministic,
            ..EngineConfig::default()
        };
        match alc_core::run(&corr.inner, &cfg) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(AlcResult { inner }));
                AlcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of clustered objects, or 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alc_result_len(result: *const AlcResult) -> usize {
    result.as_ref().map_or(0, |r| r.inner.partition.len())
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alc_result_num_clusters(result: *const AlcResult) -> usize {
    result
        .as_ref()
        .map_or(0, |r| r.inner.partition.num_clusters())
}

/// Copies canonical labels (first-occurrence order, starting at 0) into
/// `out`, which must hold exactly `alc_result_len` entries.
///
/// # Safety
/// `result` must be a live handle and `out` must point to `len` writable slots.
#[no_mangle]
pub unsafe extern "C" fn alc_result_labels(
    result: *const AlcResult,
    out: *mut usize,
    len: usize,
) -> AlcStatus {
    guard(|| {
        let Some(r) = result.as_ref() else {
            return null("result");
        };
        if out.is_null() {
            return null("out");
        }
        let labels = r.inner.partition.labels();
        if len != labels.len() {
            return fail(AlcError::InvalidInput(format!(
                "label buffer holds {len}, result has {}",
                labels.len()
            )));
        }
        slice::from_raw_parts_mut(out, len).copy_from_slice(labels);
        AlcStatus::Ok
    })
}

/// Final log-likelihood, or NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alc_result_likelihood(result: *const AlcResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.inner.likelihood)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alc_result_merges(result: *const AlcResult) -> usize {
    result.as_ref().map_or(0, |r| r.inner.merges)
}

/// True when a near-perfectly correlated cluster had its coupling clamped.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alc_result_clamped(result: *const AlcResult) -> bool {
    result
        .as_ref()
        .is_some_and(|r| r.inner.warnings.contains(&Warning::ClampedUpperBound))
}

/// # Safety
/// `result` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn alc_result_free(result: *mut AlcResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Adjusted Rand index between two labelings of `n` objects.
///
/// # Safety
/// `a` and `b` must point to `n` readable labels; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alc_adjusted_rand_index(
    a: *const usize,
    b: *const usize,
    n: usize,
    out: *mut f64,
) -> AlcStatus {
    guard(|| {
        if a.is_null() || b.is_null() {
            return null("labels");
        }
        if out.is_null() {
            return null("out");
        }
        let pa = Partition::from_labels(slice::from_raw_parts(a, n));
        let pb = Partition::from_labels(slice::from_raw_parts(b, n));
        match adjusted_rand_index(&pa, &pb) {
            Ok(r) => {
                *out = r.ari;
                AlcStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Copies the calling thread's last error message into `buf` as a
/// nul-terminated string, truncating to fit. Returns the buffer size needed
/// for the whole message, or 0 when there is no error. `buf` may be null to
/// query the size.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn alc_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = (bytes.len() - 1).min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn alc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
