//! C ABI over `cve-core`.
//!
//! Every function returns a [`CveStatus`] and writes results through out
//! pointers. On failure a message is stored per thread and can be read
//! with [`cve_last_error`]. Handles are opaque and must be released with
//! the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cve_core::circuits::{
    closed_form_lambda, entropy_closed_form, reduced_from_circuit, tmsv_entropy, CircuitParams,
};
use cve_core::fock_oracle::oracle_circuit;
use cve_core::gaussian::{reduce, GaussianCoeffState, Reduction};
use cve_core::matcore::C2Mat;
use cve_core::nongauss::{bs_fock_entropy, bs_fock_spectrum, FockPair};
use cve_core::verify::SEPARABILITY_TOL;
use cve_core::CveError;
use num_complex::Complex64;

/// Result codes; the nonzero values match the `cve` exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CveStatus {
    Ok = 0,
    /// A result did not fit in the caller's buffer.
    BufferTooSmall = 1,
    InvalidArgument = 2,
    Divergent = 3,
    InvariantViolation = 4,
    DegenerateReduction = 5,
    FormulaMismatch = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

impl From<&CveError> for CveStatus {
    fn from(e: &CveError) -> Self {
        match e.exit_code() {
            2 => CveStatus::InvalidArgument,
            3 => CveStatus::Divergent,
            4 => CveStatus::InvariantViolation,
            5 => CveStatus::DegenerateReduction,
            6 => CveStatus::FormulaMismatch,
            _ => CveStatus::Internal,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (CveStatus, String)>) -> CveStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CveStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error: panic caught at the C boundary".into());
            CveStatus::Internal
        }
    }
}

fn fail(e: CveError) -> (CveStatus, String) {
    ((&e).into(), e.to_string())
}

fn null_arg(name: &str) -> (CveStatus, String) {
    (CveStatus::InvalidArgument, format!("{name} is null"))
}

/// Writes `value` through `out`, rejecting null.
///
/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, name: &str, value: T) -> Result<(), (CveStatus, String)> {
    if out.is_null() {
        return Err(null_arg(name));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cve_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cve_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(
        concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes(),
    ) {
        Ok(s) => s,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// A beam splitter acting on two squeezed vacua.
pub struct CveCircuit {
    params: CircuitParams,
}

/// Creates a circuit handle for `B(θ, φ) S1(ζ1) S2(ζ2)|00⟩`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cve_circuit_new(
    theta: f64,
    phi: f64,
    zeta1_re: f64,
    zeta1_im: f64,
    zeta2_re: f64,
    zeta2_im: f64,
    out: *mut *mut CveCircuit,
) -> CveStatus {
    guard(|| {
        let params = CircuitParams::new(
            theta,
            phi,
            Complex64::new(zeta1_re, zeta1_im),
            Complex64::new(zeta2_re, zeta2_im),
        )
        .map_err(fail)?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        out.write(Box::into_raw(Box::new(CveCircuit { params })));
        Ok(())
    })
}

/// Releases a circuit handle; null is ignored.
///
/// # Safety
/// `circuit` must be null or a handle from [`cve_circuit_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cve_circuit_free(circuit: *mut CveCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

unsafe fn circuit_ref<'a>(c: *const CveCircuit) -> Result<&'a CircuitParams, (CveStatus, String)> {
    c.as_ref().map(|c| &c.params).ok_or_else(|| null_arg("circuit"))
}

/// Closed-form entanglement entropy in nats.
///
/// # Safety
/// `circuit` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_circuit_entropy(circuit: *const CveCircuit, out: *mut f64) -> CveStatus {
    guard(|| {
        let p = circuit_ref(circuit)?;
        write_out(out, "out", entropy_closed_form(p).map_err(fail)?)
    })
}

/// Ratio `λ` of the geometric Schmidt spectrum; 0 for product states.
///
/// # Safety
/// `circuit` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_circuit_lambda(circuit: *const CveCircuit, out: *mut f64) -> CveStatus {
    guard(|| {
        let p = circuit_ref(circuit)?;
        write_out(out, "out", closed_form_lambda(p).map_err(fail)?)
    })
}

/// Separability test on the reduced state.
///
/// # Safety
/// `circuit` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_circuit_is_separable(circuit: *const CveCircuit, out: *mut bool) -> CveStatus {
    guard(|| {
        let p = circuit_ref(circuit)?;
        let separable = match reduced_from_circuit(p) {
            Ok(red) => cve_core::gaussian::is_separable(&red, SEPARABILITY_TOL),
            Err(CveError::ProductState { .. }) => true,
            Err(e) => return Err(fail(e)),
        };
        write_out(out, "out", separable)
    })
}

/// Brute-force entropy from the truncated Fock simulation, with the
/// cutoff it settled on.
///
/// # Safety
/// `circuit` must be a live handle; `out_entropy` must be valid for a
/// write and `out_cutoff` null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_circuit_oracle_entropy(
    circuit: *const CveCircuit,
    out_entropy: *mut f64,
    out_cutoff: *mut usize,
) -> CveStatus {
    guard(|| {
        let p = circuit_ref(circuit)?;
        let report = oracle_circuit(p).map_err(fail)?;
        write_out(out_entropy, "out_entropy", report.entropy)?;
        if !out_cutoff.is_null() {
            out_cutoff.write(report.cutoff);
        }
        Ok(())
    })
}

/// Reduced single-mode state of a two-mode Gaussian.
pub struct CveReducedState {
    reduction: Reduction,
}

unsafe fn read_matrix(m: *const f64, name: &str) -> Result<C2Mat, (CveStatus, String)> {
    if m.is_null() {
        return Err(null_arg(name));
    }
    let v = std::slice::from_raw_parts(m, 8);
    let z = |i: usize| Complex64::new(v[2 * i], v[2 * i + 1]);
    Ok(C2Mat::new(z(0), z(1), z(2), z(3)))
}

/// Traces out mode 2 of a normally ordered Gaussian state. Each matrix is
/// 8 doubles: row-major 2×2 complex entries as interleaved (re, im).
///
/// # Safety
/// `m1`, `m2`, `m12` must each point to 8 readable doubles and `out` be
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cve_gaussian_reduce(
    m1: *const f64,
    m2: *const f64,
    m12: *const f64,
    a0: f64,
    out: *mut *mut CveReducedState,
) -> CveStatus {
    guard(|| {
        let state = GaussianCoeffState::new(
            read_matrix(m1, "m1")?,
            read_matrix(m2, "m2")?,
            read_matrix(m12, "m12")?,
            a0,
        )
        .map_err(fail)?;
        let reduction = reduce(&state).map_err(fail)?;
        write_out(out, "out", Box::into_raw(Box::new(CveReducedState { reduction })))
    })
}

/// Releases a reduced-state handle; null is ignored.
///
/// # Safety
/// `state` must be null or a handle from [`cve_gaussian_reduce`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cve_reduced_free(state: *mut CveReducedState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

unsafe fn reduced_ref<'a>(s: *const CveReducedState) -> Result<&'a Reduction, (CveStatus, String)> {
    s.as_ref().map(|s| &s.reduction).ok_or_else(|| null_arg("state"))
}

/// Entropy of the reduced state in nats.
///
/// # Safety
/// `state` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_reduced_entropy(state: *const CveReducedState, out: *mut f64) -> CveStatus {
    guard(|| {
        let r = reduced_ref(state)?;
        write_out(out, "out", r.entropy().map_err(fail)?)
    })
}

/// Spectral ratio `λ`; 0 for a pure reduced state.
///
/// # Safety
/// `state` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_reduced_lambda(state: *const CveReducedState, out: *mut f64) -> CveStatus {
    guard(|| write_out(out, "out", reduced_ref(state)?.lambda()))
}

/// Prefactor `A` of the reduced state; `NaN` when the input was a product.
///
/// # Safety
/// `state` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_reduced_amplitude(state: *const CveReducedState, out: *mut f64) -> CveStatus {
    guard(|| {
        let amp = reduced_ref(state)?.entangled().map_or(f64::NAN, |r| r.amp);
        write_out(out, "out", amp)
    })
}

/// Separability test on the reduced state.
///
/// # Safety
/// `state` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_reduced_is_separable(state: *const CveReducedState, out: *mut bool) -> CveStatus {
    guard(|| {
        let r = reduced_ref(state)?;
        write_out(out, "out", r.is_separable(SEPARABILITY_TOL))
    })
}

/// `cosh²r ln cosh²r − sinh²r ln sinh²r`, the two-mode squeezed vacuum
/// entropy in nats.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_tmsv_entropy(r: f64, out: *mut f64) -> CveStatus {
    guard(|| write_out(out, "out", tmsv_entropy(r).map_err(fail)?))
}

/// Reduced spectrum of `B(θ)|n1, n2⟩`, indexed by the photon number of
/// mode 1. Writes `n1 + n2 + 1` values to `out` and the count to `out_len`;
/// returns `BufferTooSmall` (with `out_len` set) when `capacity` is short.
///
/// # Safety
/// `out` must be valid for `capacity` writes and `out_len` for one.
#[no_mangle]
pub unsafe extern "C" fn cve_fock_spectrum(
    n1: usize,
    n2: usize,
    theta: f64,
    out: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> CveStatus {
    guard(|| {
        let pair = FockPair::new(n1, n2, theta).map_err(fail)?;
        let s = bs_fock_spectrum(&pair).map_err(fail)?;
        write_out(out_len, "out_len", s.lambda.len())?;
        if capacity < s.lambda.len() {
            return Err((
                CveStatus::BufferTooSmall,
                format!("need {} entries, got {capacity}", s.lambda.len()),
            ));
        }
        if out.is_null() {
            return Err(null_arg("out"));
        }
        ptr::copy_nonoverlapping(s.lambda.as_ptr(), out, s.lambda.len());
        Ok(())
    })
}

/// Entropy of `B(θ)|n1, n2⟩` in nats.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn cve_fock_entropy(n1: usize, n2: usize, theta: f64, out: *mut f64) -> CveStatus {
    guard(|| {
        let pair = FockPair::new(n1, n2, theta).map_err(fail)?;
        write_out(out, "out", bs_fock_entropy(&pair).map_err(fail)?)
    })
}
