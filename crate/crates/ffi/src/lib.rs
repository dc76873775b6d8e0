//! C ABI over `nvsig`.
//!
//! Objects cross the boundary as opaque handles created by `nv_*_new` style
//! functions and released with the matching `nv_*_free`. Every fallible call
//! returns an [`NvStatus`]; on failure a message is kept per thread and can be
//! read with [`nv_last_error`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;

use nvsig::error::Error;
use nvsig::gap::SpectralGap;
use nvsig::predictor::{sinusoid_error_oracle, Predictor, PredictorConfig};
use nvsig::recovery::{recover_missing, MissingSet, Mode, RecoveryProblem, DEFAULT_RIDGE};
use nvsig::signal::{SignalSource, Tone};
use nvsig::transfer::{apply_transfer, trapezoid_kernel, Kernel};
use nvsig::wiener::{pairing, WienerFunction};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutsideWindow = 3,
    /// A numerical guard tripped (overflow, causality, quadrature, solve).
    Numerical = 4,
    /// The output buffer length does not match what the call produces.
    BufferSize = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NvComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for NvComplex {
    fn from(c: Complex64) -> Self {
        NvComplex { re: c.re, im: c.im }
    }
}

impl From<NvComplex> for Complex64 {
    fn from(c: NvComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NvMode {
    Full = 0,
    RealPart = 1,
    ImagPart = 2,
}

/// Finitely supported Fourier coefficient sequence.
pub struct NvWiener(WienerFunction);

/// Sampled, exponential-sum or density-backed signal.
pub struct NvSignal(SignalSource);

/// Convolution kernel with its tail bound.
pub struct NvKernel(Kernel);

/// Built one-step predictor.
pub struct NvPredictor(Predictor);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> NvStatus {
    if e.is_numerical() {
        return NvStatus::Numerical;
    }
    match e {
        Error::OutsideWindow { .. } => NvStatus::OutsideWindow,
        Error::Io(_) => NvStatus::Io,
        _ => NvStatus::InvalidArgument,
    }
}

struct Fail(NvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(NvStatus::NullPointer, format!("{what} is null"))
}

fn guard<F>(f: F) -> NvStatus
where
    F: FnOnce() -> Result<(), Fail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NvStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside nvsig".into());
            NvStatus::Panic
        }
    }
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, len: usize, need: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if len != need {
        return Err(Fail(NvStatus::BufferSize, format!("{what} holds {len} entries, {need} required")));
    }
    if need == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

unsafe fn boxed<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(v)), "out")
}

fn range_len(lo: i64, hi: i64) -> Result<usize, Fail> {
    if hi < lo {
        return Err(Fail(NvStatus::InvalidArgument, format!("empty range [{lo}, {hi}]")));
    }
    Ok((hi - lo) as usize + 1)
}

fn complexes(v: &[NvComplex]) -> Vec<Complex64> {
    v.iter().map(|&c| c.into()).collect()
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next `nv_*` call on the same thread.
#[no_mangle]
pub extern "C" fn nv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// sqrt(pi coth pi), the constant of the Sobolev embedding bound.
#[no_mangle]
pub extern "C" fn nv_embedding_constant() -> f64 {
    nvsig::wiener::sobolev_embedding_constant()
}

// ---- Wiener functions

/// Coefficients `coeffs[i]` sit at index `offset + i`.
///
/// # Safety
/// `coeffs` must point to `len` values (or be NULL with `len == 0`) and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_wiener_new(
    offset: i64,
    coeffs: *const NvComplex,
    len: usize,
    out: *mut *mut NvWiener,
) -> NvStatus {
    guard(|| {
        let c = complexes(input(coeffs, len, "coeffs")?);
        boxed(out, NvWiener(WienerFunction::from_dense(offset, c)?))
    })
}

/// # Safety
/// `w` must come from `nv_wiener_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nv_wiener_free(w: *mut NvWiener) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_wiener_norm(w: *const NvWiener, out: *mut f64) -> NvStatus {
    guard(|| put(out, handle(w, "w")?.0.norm_a(), "out"))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_wiener_evaluate(w: *const NvWiener, omega: f64, out: *mut NvComplex) -> NvStatus {
    guard(|| put(out, handle(w, "w")?.0.evaluate(omega).into(), "out"))
}

/// Product of two Wiener functions (coefficient convolution).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_wiener_product(
    f: *const NvWiener,
    g: *const NvWiener,
    out: *mut *mut NvWiener,
) -> NvStatus {
    guard(|| {
        let fg = handle(f, "f")?.0.product(&handle(g, "g")?.0);
        boxed(out, NvWiener(fg))
    })
}

// ---- signals

/// Samples `values[i]` at t = `t_min + i`.
///
/// # Safety
/// `values` must point to `len` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_signal_samples(
    t_min: i64,
    values: *const NvComplex,
    len: usize,
    out: *mut *mut NvSignal,
) -> NvStatus {
    guard(|| {
        let v = complexes(input(values, len, "values")?);
        boxed(out, NvSignal(SignalSource::samples(t_min, v)?))
    })
}

/// x(t) = sum_j amplitudes[j] exp(i omegas[j] t).
///
/// # Safety
/// Both arrays must hold `len` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_signal_tones(
    amplitudes: *const NvComplex,
    omegas: *const f64,
    len: usize,
    out: *mut *mut NvSignal,
) -> NvStatus {
    guard(|| {
        let a = input(amplitudes, len, "amplitudes")?;
        let w = input(omegas, len, "omegas")?;
        let tones = a.iter().zip(w).map(|(&a, &w)| Tone::new(a.into(), w)).collect();
        boxed(out, NvSignal(SignalSource::exp_sum(tones)?))
    })
}

/// # Safety
/// `x` must come from an `nv_signal_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nv_signal_free(x: *mut NvSignal) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_signal_sample(x: *const NvSignal, t: i64, out: *mut NvComplex) -> NvStatus {
    guard(|| put(out, handle(x, "x")?.0.sample(t)?.into(), "out"))
}

/// <X, f> = sum_k x(k) f_k. `truncation` receives the bound on the error of
/// the value (0 for exact signals); it may be NULL.
///
/// # Safety
/// Pointers must be valid; `truncation` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn nv_pairing(
    x: *const NvSignal,
    f: *const NvWiener,
    out: *mut NvComplex,
    truncation: *mut f64,
) -> NvStatus {
    guard(|| {
        let p = pairing(&handle(x, "x")?.0, &handle(f, "f")?.0)?;
        put(out, p.value.into(), "out")?;
        if !truncation.is_null() {
            truncation.write(p.truncation_bound);
        }
        Ok(())
    })
}

// ---- kernels

/// Coefficients `coeffs[i]` at k = `offset + i`. A negative `tail_bound`
/// marks the tail as unknown.
///
/// # Safety
/// `coeffs` must point to `len` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_kernel_new(
    offset: i64,
    coeffs: *const NvComplex,
    len: usize,
    tail_bound: f64,
    out: *mut *mut NvKernel,
) -> NvStatus {
    guard(|| {
        let c = complexes(input(coeffs, len, "coeffs")?);
        let tail = (tail_bound >= 0.0).then_some(tail_bound);
        boxed(out, NvKernel(Kernel::new(offset, c, tail)?))
    })
}

/// Trapezoid low-pass: 1 on |w| <= p, 0 on |w| >= q, truncated to |k| <= K.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_kernel_trapezoid(p: f64, q: f64, half_width: usize, out: *mut *mut NvKernel) -> NvStatus {
    guard(|| boxed(out, NvKernel(trapezoid_kernel(p, q, half_width)?)))
}

/// The causal filter x(t) -> xhat(t) of a predictor.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_predictor_kernel(p: *const NvPredictor, out: *mut *mut NvKernel) -> NvStatus {
    guard(|| boxed(out, NvKernel(handle(p, "p")?.0.filter().clone())))
}

/// # Safety
/// `h` must come from an `nv_kernel_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nv_kernel_free(h: *mut NvKernel) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Support of the stored coefficients: first index and count.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_kernel_support(h: *const NvKernel, offset: *mut i64, len: *mut usize) -> NvStatus {
    guard(|| {
        let h = &handle(h, "h")?.0;
        put(offset, h.offset(), "offset")?;
        put(len, h.coeffs().len(), "len")
    })
}

/// Copies the coefficients; `len` must equal the count from
/// `nv_kernel_support`.
///
/// # Safety
/// `out` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn nv_kernel_coeffs(h: *const NvKernel, out: *mut NvComplex, len: usize) -> NvStatus {
    guard(|| {
        let h = &handle(h, "h")?.0;
        let dst = output(out, len, h.coeffs().len(), "out")?;
        for (d, &c) in dst.iter_mut().zip(h.coeffs()) {
            *d = c.into();
        }
        Ok(())
    })
}

/// Tail bound, or -1 when unknown.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_kernel_tail_bound(h: *const NvKernel, out: *mut f64) -> NvStatus {
    guard(|| put(out, handle(h, "h")?.0.tail_bound().unwrap_or(-1.0), "out"))
}

/// H(w) = sum_k h_k exp(-i w k).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_kernel_spectrum(h: *const NvKernel, omega: f64, out: *mut NvComplex) -> NvStatus {
    guard(|| put(out, handle(h, "h")?.0.spectrum(omega).into(), "out"))
}

/// y(t) = sum_k h_k x(t - k) for t in [lo, hi]. `out` holds hi - lo + 1
/// values. `error_bound` receives tail, rounding and sample error together,
/// or -1 when the kernel tail is unknown; it may be NULL.
///
/// # Safety
/// Pointers must be valid; `error_bound` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn nv_apply_transfer(
    h: *const NvKernel,
    x: *const NvSignal,
    lo: i64,
    hi: i64,
    out: *mut NvComplex,
    len: usize,
    error_bound: *mut f64,
) -> NvStatus {
    guard(|| {
        let (h, x) = (&handle(h, "h")?.0, &handle(x, "x")?.0);
        let dst = output(out, len, range_len(lo, hi)?, "out")?;
        let y = apply_transfer(h, x, lo..=hi)?;
        for (d, &v) in dst.iter_mut().zip(&y.values) {
            *d = v.into();
        }
        if !error_bound.is_null() {
            error_bound.write(y.error_bound().unwrap_or(-1.0));
        }
        Ok(())
    })
}

// ---- prediction

/// Builds the H_gamma predictor. Fails with `NV_STATUS_NUMERICAL` when the
/// overflow or causality guard trips.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_predictor_new(
    gamma: f64,
    r: f64,
    omega_hat: f64,
    half_width: usize,
    n: usize,
    out: *mut *mut NvPredictor,
) -> NvStatus {
    guard(|| {
        let cfg = PredictorConfig::new(gamma, r, omega_hat, half_width, n)?;
        boxed(out, NvPredictor(Predictor::new(cfg)?))
    })
}

/// # Safety
/// `p` must come from `nv_predictor_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn nv_predictor_free(p: *mut NvPredictor) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// xhat(t), the prediction of x(t + 1), for t in [lo, hi]. `tail_error`
/// receives sup|x| times the kernel tail; it may be NULL.
///
/// # Safety
/// Pointers must be valid; `tail_error` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn nv_predict(
    p: *const NvPredictor,
    x: *const NvSignal,
    lo: i64,
    hi: i64,
    out: *mut NvComplex,
    len: usize,
    tail_error: *mut f64,
) -> NvStatus {
    guard(|| {
        let (p, x) = (&handle(p, "p")?.0, &handle(x, "x")?.0);
        let dst = output(out, len, range_len(lo, hi)?, "out")?;
        let run = p.predict(x, lo..=hi)?;
        for (d, &v) in dst.iter_mut().zip(&run.predicted) {
            *d = v.into();
        }
        if !tail_error.is_null() {
            tail_error.write(run.tail_error);
        }
        Ok(())
    })
}

/// Exact one-step error of the predictor on the unit tone at w0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn nv_predictor_oracle(p: *const NvPredictor, omega0: f64, out: *mut f64) -> NvStatus {
    guard(|| put(out, sinusoid_error_oracle(omega0, &handle(p, "p")?.0.config), "out"))
}

// ---- recovery

/// Recovers x on `missing` from the rest of the signal, given that
/// `intervals` (pairs lo, hi flattened, `n_intervals` pairs) is a spectral
/// gap. Values land in `out` in ascending time order; `out_len` must equal
/// the number of distinct missing times. `residual` and `ambiguous` may be
/// NULL. A `ridge` <= 0 selects the default.
///
/// # Safety
/// Arrays must hold the stated counts; optional outputs may be NULL.
#[no_mangle]
pub unsafe extern "C" fn nv_recover(
    x: *const NvSignal,
    missing: *const i64,
    n_missing: usize,
    intervals: *const f64,
    n_intervals: usize,
    bank_size: usize,
    half_width: usize,
    mode: NvMode,
    ridge: f64,
    out: *mut NvComplex,
    out_len: usize,
    residual: *mut f64,
    ambiguous: *mut bool,
) -> NvStatus {
    guard(|| {
        let x = &handle(x, "x")?.0;
        let missing = MissingSet::new(input(missing, n_missing, "missing")?.iter().copied());
        let iv: Vec<(f64, f64)> = input(intervals, 2 * n_intervals, "intervals")?
            .chunks_exact(2)
            .map(|c| (c[0], c[1]))
            .collect();
        let dst = output(out, out_len, missing.len(), "out")?;
        let gap = SpectralGap::with_bumps(&iv, bank_size, half_width)?;
        let mode = match mode {
            NvMode::Full => Mode::Full,
            NvMode::RealPart => Mode::RealPart,
            NvMode::ImagPart => Mode::ImagPart,
        };
        let ridge = if ridge > 0.0 { ridge } else { DEFAULT_RIDGE };
        let res = recover_missing(&RecoveryProblem::new(x.clone(), missing, gap, mode).with_ridge(ridge))?;
        for (d, &v) in dst.iter_mut().zip(&res.values) {
            *d = v.into();
        }
        if !residual.is_null() {
            residual.write(res.residual);
        }
        if !ambiguous.is_null() {
            ambiguous.write(res.ambiguous);
        }
        Ok(())
    })
}
