//! C ABI over the `contractive` crate.
//!
//! Every fallible function returns a [`ContractiveStatus`] and writes its
//! result through an out-pointer. On failure the message is available from
//! [`contractive_last_error_message`] on the same thread. Polynomials and
//! reports are opaque handles released with their `_free` functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use contractive::cli::{report_json, sampler_spec, ReportOptions, SamplerArgs};
use contractive::harness::{
    default_alpha_grid, default_level_ratios, run_campaign, ConjectureReport, HarnessConfig, InequalityKind,
};
use contractive::norms::{bergman_norm, hardy_norm, lebesgue_norm};
use contractive::quadrature::MaximizeConfig;
use contractive::weights::{binomial_weights, coefficient_bergman_norm, weighted_dirichlet_norm};
use contractive::{AnalyticPolynomial, Error, QuadratureConfig, TrigPolynomial};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractiveStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Io = 4,
    Panic = 5,
}

/// Inequality tested by [`contractive_run_campaign`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractiveKind {
    Burbea = 0,
    Dual = 1,
    Bergman = 2,
    Riesz = 3,
    RieszGeometric = 4,
    Measure = 5,
    UfMonotone = 6,
    RadialMonotone = 7,
    LogConvex = 8,
}

/// Quadrature tolerances. Pass `NULL` wherever one is accepted to use the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractiveQuadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

/// Campaign parameters. Fields the kind does not use are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractiveCampaign {
    pub kind: ContractiveKind,
    pub p: f64,
    pub q: f64,
    /// Riesz exponent; `INFINITY` allowed.
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub degree: usize,
    pub m: usize,
    pub n: usize,
    /// Sampler exponent for kinds other than Burbea; `<= 0` selects the default.
    pub sampler_p: f64,
    pub real_coefficients: bool,
    pub seed: u64,
    pub trials: u64,
    pub tol: f64,
    /// Worker threads; 0 uses all available.
    pub threads: usize,
    pub quadrature: ContractiveQuadrature,
}

pub struct ContractivePolynomial {
    inner: AnalyticPolynomial,
}

pub struct ContractiveTrigPolynomial {
    inner: TrigPolynomial,
}

pub struct ContractiveReport {
    inner: ConjectureReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ContractiveStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io(_) => ContractiveStatus::Io,
            ref e if e.is_numerical() => ContractiveStatus::Numerical,
            _ => ContractiveStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(ContractiveStatus::NullPointer, format!("{name} is NULL"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(ContractiveStatus::InvalidArgument, msg.into())
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> ContractiveStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ContractiveStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ContractiveStatus::Panic
        }
    }
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn complex_slice(re: *const f64, im: *const f64, len: usize) -> Result<Vec<Complex64>, Failure> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if re.is_null() {
        return Err(null("re"));
    }
    let re = std::slice::from_raw_parts(re, len);
    let c: Vec<Complex64> = if im.is_null() {
        re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else {
        let im = std::slice::from_raw_parts(im, len);
        re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect()
    };
    if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(invalid("coefficients must be finite"));
    }
    Ok(c)
}

unsafe fn quadrature(q: *const ContractiveQuadrature) -> Result<QuadratureConfig, Failure> {
    match q.as_ref() {
        None => Ok(QuadratureConfig::default()),
        Some(q) => Ok(QuadratureConfig::new(q.abs_tol, q.rel_tol, q.max_subdivisions)?),
    }
}

/// Message of the last failed call on this thread, or `NULL`. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn contractive_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn contractive_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default quadrature tolerances.
#[no_mangle]
pub extern "C" fn contractive_quadrature_default() -> ContractiveQuadrature {
    let d = QuadratureConfig::default();
    ContractiveQuadrature { abs_tol: d.abs_tol, rel_tol: d.rel_tol, max_subdivisions: d.max_subdivisions }
}

/// Polynomial `sum (re[k] + i im[k]) z^k`, `k < len`. `im` may be `NULL` for real coefficients.
///
/// # Safety
/// `re` and `im` (when not `NULL`) must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_polynomial_new(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut ContractivePolynomial,
) -> ContractiveStatus {
    guard(|| {
        let coeffs = complex_slice(re, im, len)?;
        let handle = Box::into_raw(Box::new(ContractivePolynomial { inner: AnalyticPolynomial::new(coeffs) }));
        put(out, handle).inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// # Safety
/// `p` must be `NULL` or a handle from [`contractive_polynomial_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn contractive_polynomial_free(p: *mut ContractivePolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of stored coefficients.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_polynomial_len(
    p: *const ContractivePolynomial,
    out: *mut usize,
) -> ContractiveStatus {
    guard(|| put(out, borrow(p, "polynomial")?.inner.coeffs().len()))
}

/// # Safety
/// `p` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_polynomial_eval(
    p: *const ContractivePolynomial,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ContractiveStatus {
    guard(|| {
        let v = borrow(p, "polynomial")?.inner.eval(Complex64::new(re, im));
        put(out_re, v.re)?;
        put(out_im, v.im)
    })
}

/// Trigonometric polynomial `sum c[k] e^{i (min_degree + k) theta}`.
///
/// # Safety
/// As for [`contractive_polynomial_new`].
#[no_mangle]
pub unsafe extern "C" fn contractive_trig_new(
    min_degree: i64,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut ContractiveTrigPolynomial,
) -> ContractiveStatus {
    guard(|| {
        if min_degree > 0 {
            return Err(invalid(format!("min_degree must be <= 0, got {min_degree}")));
        }
        let coeffs = complex_slice(re, im, len)?;
        let handle =
            Box::into_raw(Box::new(ContractiveTrigPolynomial { inner: TrigPolynomial::new(min_degree, coeffs) }));
        put(out, handle).inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// # Safety
/// `p` must be `NULL` or a handle from [`contractive_trig_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn contractive_trig_free(p: *mut ContractiveTrigPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `c_alpha(0..=n)` into `out`, which must hold `n + 1` doubles.
///
/// # Safety
/// `out` must point to `n + 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn contractive_binomial_weights(alpha: f64, n: usize, out: *mut f64) -> ContractiveStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let w = binomial_weights(alpha, n)?;
        ptr::copy_nonoverlapping(w.values().as_ptr(), out, w.len());
        Ok(())
    })
}

/// `||f||_{H^p}`.
///
/// # Safety
/// `f` must be a live handle, `quad` `NULL` or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_hardy_norm(
    f: *const ContractivePolynomial,
    p: f64,
    quad: *const ContractiveQuadrature,
    out: *mut f64,
) -> ContractiveStatus {
    guard(|| put(out, hardy_norm(&borrow(f, "polynomial")?.inner, p, &quadrature(quad)?)?))
}

/// `||f||_{A^p_alpha}` by quadrature.
///
/// # Safety
/// As for [`contractive_hardy_norm`].
#[no_mangle]
pub unsafe extern "C" fn contractive_bergman_norm(
    f: *const ContractivePolynomial,
    p: f64,
    alpha: f64,
    quad: *const ContractiveQuadrature,
    out: *mut f64,
) -> ContractiveStatus {
    guard(|| put(out, bergman_norm(&borrow(f, "polynomial")?.inner, p, alpha, &quadrature(quad)?)?))
}

/// `||f||_{A^2_alpha}` from the coefficients.
///
/// # Safety
/// `f` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_coefficient_bergman_norm(
    f: *const ContractivePolynomial,
    alpha: f64,
    out: *mut f64,
) -> ContractiveStatus {
    guard(|| put(out, coefficient_bergman_norm(&borrow(f, "polynomial")?.inner, alpha)?))
}

/// `||f||_{D_beta}` from the coefficients.
///
/// # Safety
/// `f` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_dirichlet_norm(
    f: *const ContractivePolynomial,
    beta: f64,
    out: *mut f64,
) -> ContractiveStatus {
    guard(|| put(out, weighted_dirichlet_norm(&borrow(f, "polynomial")?.inner, beta)?))
}

/// `||f||_{L^r}` on the circle; `r = INFINITY` gives the sup norm.
///
/// # Safety
/// `f` must be a live handle, `quad` `NULL` or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_lebesgue_norm(
    f: *const ContractiveTrigPolynomial,
    r: f64,
    quad: *const ContractiveQuadrature,
    out: *mut f64,
) -> ContractiveStatus {
    guard(|| put(out, lebesgue_norm(&borrow(f, "trigonometric polynomial")?.inner, r, &quadrature(quad)?)?))
}

/// Defaults for `kind`: degree 8, `M = N = 4`, 1000 trials, tolerance `1e-6`, seed 0.
#[no_mangle]
pub extern "C" fn contractive_campaign_default(kind: ContractiveKind) -> ContractiveCampaign {
    ContractiveCampaign {
        kind,
        p: 1.0,
        q: 4.0,
        r: 2.0,
        alpha: 2.0,
        beta: 2.0,
        lambda: 0.5,
        degree: 8,
        m: 4,
        n: 4,
        sampler_p: 0.0,
        real_coefficients: false,
        seed: 0,
        trials: 1000,
        tol: 1e-6,
        threads: 0,
        quadrature: contractive_quadrature_default(),
    }
}

fn inequality(c: &ContractiveCampaign) -> InequalityKind {
    match c.kind {
        ContractiveKind::Burbea => InequalityKind::Burbea { p: c.p },
        ContractiveKind::Dual => InequalityKind::Dual { q: c.q },
        ContractiveKind::Bergman => InequalityKind::BergmanEmbed { alpha: c.alpha },
        ContractiveKind::Riesz => InequalityKind::Riesz { r: c.r },
        ContractiveKind::RieszGeometric => InequalityKind::RieszGeometric,
        ContractiveKind::Measure => InequalityKind::Measure { lambda: c.lambda },
        ContractiveKind::UfMonotone => InequalityKind::UfMonotone { alpha_grid: default_alpha_grid() },
        ContractiveKind::RadialMonotone => InequalityKind::RadialMonotone { level_ratios: default_level_ratios() },
        ContractiveKind::LogConvex => InequalityKind::LogConvex { alpha: c.alpha, beta: c.beta },
    }
}

/// Runs a seeded campaign. Failed trials are tallied in the report, not
/// returned as an error.
///
/// # Safety
/// `config` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_run_campaign(
    config: *const ContractiveCampaign,
    out: *mut *mut ContractiveReport,
) -> ContractiveStatus {
    guard(|| {
        let c = borrow(config, "campaign")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if c.tol.is_nan() || c.tol <= 0.0 {
            return Err(invalid("tol must be positive"));
        }
        let kind = inequality(c);
        kind.validate()?;
        let sampler = SamplerArgs {
            degree: c.degree,
            m: c.m,
            n: c.n,
            sampler_p: (c.sampler_p > 0.0).then_some(c.sampler_p),
            real: c.real_coefficients,
            seed: c.seed,
        };
        let spec = sampler_spec(&kind, &sampler)?;
        let cfg =
            HarnessConfig { quadrature: quadrature(&c.quadrature)?, maximize: MaximizeConfig::default(), tol: c.tol };
        let threads = (c.threads > 0).then_some(c.threads);
        let report = run_campaign(&kind, &spec, c.trials, &cfg, threads)?;
        put(out, Box::into_raw(Box::new(ContractiveReport { inner: report })))
    })
}

/// # Safety
/// `r` must be `NULL` or a handle from [`contractive_run_campaign`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn contractive_report_free(r: *mut ContractiveReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Counts from a report.
///
/// # Safety
/// `r` must be a live handle; each out-pointer must be `NULL` or writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_report_counts(
    r: *const ContractiveReport,
    trials: *mut u64,
    violations: *mut u64,
    failed_trials: *mut u64,
) -> ContractiveStatus {
    guard(|| {
        let rep = &borrow(r, "report")?.inner;
        for (p, v) in [(trials, rep.trials), (violations, rep.violations), (failed_trials, rep.failed_trials())] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// Smallest margin; NaN when every trial failed.
///
/// # Safety
/// `r` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_report_min_margin(
    r: *const ContractiveReport,
    out: *mut f64,
) -> ContractiveStatus {
    guard(|| put(out, borrow(r, "report")?.inner.min_margin))
}

/// Report JSON, in the same format as the command-line tool. Release the
/// string with [`contractive_string_free`].
///
/// # Safety
/// `r` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn contractive_report_json(
    r: *const ContractiveReport,
    no_timing: bool,
    out: *mut *mut c_char,
) -> ContractiveStatus {
    guard(|| {
        let text = report_json(&borrow(r, "report")?.inner, &ReportOptions { command: "test", no_timing });
        let c = CString::new(text).map_err(|e| invalid(e.to_string()))?;
        put(out, c.into_raw())
    })
}

/// # Safety
/// `s` must be `NULL` or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn contractive_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for a status code as a static string.
#[no_mangle]
pub extern "C" fn contractive_status_message(status: ContractiveStatus) -> *const c_char {
    let s: &'static CStr = match status {
        ContractiveStatus::Ok => c"ok",
        ContractiveStatus::NullPointer => c"null pointer",
        ContractiveStatus::InvalidArgument => c"invalid argument",
        ContractiveStatus::Numerical => c"numerical failure",
        ContractiveStatus::Io => c"i/o error",
        ContractiveStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
