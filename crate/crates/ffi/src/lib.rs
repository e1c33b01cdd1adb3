//! C ABI for the microgarch simulator.
//!
//! Parameter sets and simulated series are opaque handles owned by the
//! library and released with their `*_free` function. Every fallible call
//! returns an [`MgStatus`]; on failure a message is available from
//! [`mg_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use microgarch::garch::{garch_step, micro_to_garch, stationarity_margin, GarchParams, GarchState};
use microgarch::sim::{simulate_with, ReturnSeries, RunSettings, RNG_ID};
use microgarch::stats::evaluate_stylized_facts;
use microgarch::{Error, FundamentalFn, MicroParams, PredictorFn};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonStationary = 3,
    DegenerateData = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Opaque micro parameter set.
pub struct MgParams {
    inner: MicroParams,
}

/// Opaque simulated return series.
pub struct MgSeries {
    inner: ReturnSeries,
}

/// GARCH(1,1) coefficients for one step.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgGarch {
    pub omega: f64,
    pub f: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Bits of `MgFacts::present`.
pub const MG_FACT_NEGATIVE_SKEW: u32 = 1;
pub const MG_FACT_EXCESS_KURTOSIS: u32 = 1 << 1;
pub const MG_FACT_NON_NORMAL: u32 = 1 << 2;
pub const MG_FACT_VOLATILITY_CLUSTERING: u32 = 1 << 3;

/// Stylized-facts statistics with one-sided p-values.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgFacts {
    pub sample_size: usize,
    pub skewness: f64,
    pub skewness_p: f64,
    pub kurtosis: f64,
    pub kurtosis_p: f64,
    pub ks: f64,
    pub ks_p: f64,
    pub sq_autocorr1: f64,
    pub sq_autocorr1_p: f64,
    /// Bitmask of `MG_FACT_*`.
    pub present: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: MgStatus, msg: impl Into<String>) -> MgStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> MgStatus {
    let status = match e {
        Error::NonStationary { .. } => MgStatus::NonStationary,
        Error::TooShort { .. } | Error::Degenerate(_) | Error::LagOutOfRange { .. } => {
            MgStatus::DegenerateData
        }
        _ => MgStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> MgStatus) -> MgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(MgStatus::Panic, "internal panic"),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Identifier of the random stream used by [`mg_simulate`]. Static string.
#[no_mangle]
pub extern "C" fn mg_rng_id() -> *const c_char {
    static ID: std::sync::OnceLock<CString> = std::sync::OnceLock::new();
    ID.get_or_init(|| CString::new(RNG_ID).unwrap_or_default())
        .as_ptr()
}

/// Create a validated parameter set with the default `g` (log) and `h`
/// (AR, 0.1) functions.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn mg_params_new(
    rho: f64,
    k: f64,
    s_liquidity: f64,
    p1: f64,
    p2: f64,
    lambda: f64,
    gamma: f64,
    out: *mut *mut MgParams,
) -> MgStatus {
    guard(|| {
        if out.is_null() {
            return fail(MgStatus::NullPointer, "out is NULL");
        }
        match MicroParams::new(
            rho,
            k,
            s_liquidity,
            p1,
            p2,
            lambda,
            gamma,
            FundamentalFn::default(),
            PredictorFn::default(),
        ) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MgParams { inner }));
                MgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Reference parameters: rho=4, k=0.4, S=1, p1=0.2, p2=0.4, lambda=gamma=1.2.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mg_params_default(out: *mut *mut MgParams) -> MgStatus {
    guard(|| {
        if out.is_null() {
            return fail(MgStatus::NullPointer, "out is NULL");
        }
        *out = Box::into_raw(Box::new(MgParams {
            inner: MicroParams::default(),
        }));
        MgStatus::Ok
    })
}

/// Replace the `g` and `h` function tags (`"log"`/`"identity"`,
/// `"ar"`/`"ar:<coef>"`/`"zero"`). A NULL tag leaves that function unchanged.
///
/// # Safety
/// `params` must be a live handle; tags must be NULL or NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn mg_params_set_functions(
    params: *mut MgParams,
    g_tag: *const c_char,
    h_tag: *const c_char,
) -> MgStatus {
    guard(|| {
        let Some(params) = params.as_mut() else {
            return fail(MgStatus::NullPointer, "params is NULL");
        };
        let mut next = params.inner;
        if !g_tag.is_null() {
            let Ok(tag) = CStr::from_ptr(g_tag).to_str() else {
                return fail(MgStatus::InvalidArgument, "g tag is not UTF-8");
            };
            match tag.parse() {
                Ok(g) => next.g_fn = g,
                Err(e) => return from_error(e),
            }
        }
        if !h_tag.is_null() {
            let Ok(tag) = CStr::from_ptr(h_tag).to_str() else {
                return fail(MgStatus::InvalidArgument, "h tag is not UTF-8");
            };
            match tag.parse() {
                Ok(h) => next.h_fn = h,
                Err(e) => return from_error(e),
            }
        }
        if let Err(e) = next.validate() {
            return from_error(e);
        }
        params.inner = next;
        MgStatus::Ok
    })
}

/// # Safety
/// `params` must be NULL or a handle from `mg_params_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mg_params_free(params: *mut MgParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// `1 - (alpha + beta)` of the implied GARCH; NaN for a NULL handle.
///
/// # Safety
/// `params` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_stationarity_margin(params: *const MgParams) -> f64 {
    params
        .as_ref()
        .map_or(f64::NAN, |p| stationarity_margin(&p.inner))
}

/// GARCH coefficients implied at the lagged state `(x, u, sigma)`.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_micro_to_garch(
    params: *const MgParams,
    x_prev: f64,
    u_prev: f64,
    sigma_prev: f64,
    out: *mut MgGarch,
) -> MgStatus {
    guard(|| {
        let (Some(params), false) = (params.as_ref(), out.is_null()) else {
            return fail(MgStatus::NullPointer, "params or out is NULL");
        };
        match micro_to_garch(&params.inner, x_prev, u_prev, sigma_prev) {
            Ok(g) => {
                *out = MgGarch {
                    omega: g.omega,
                    f: g.f_value,
                    alpha: g.alpha,
                    beta: g.beta,
                };
                MgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// One GARCH(1,1) step. Writes the return, the new residual `u`, and the
/// new conditional variance.
///
/// # Safety
/// `garch` must be readable; the three out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn mg_garch_step(
    garch: *const MgGarch,
    u_prev: f64,
    sigma2_prev: f64,
    eps: f64,
    out_r: *mut f64,
    out_u: *mut f64,
    out_sigma2: *mut f64,
) -> MgStatus {
    guard(|| {
        let Some(g) = garch.as_ref() else {
            return fail(MgStatus::NullPointer, "garch is NULL");
        };
        if out_r.is_null() || out_u.is_null() || out_sigma2.is_null() {
            return fail(MgStatus::NullPointer, "output pointer is NULL");
        }
        let params = GarchParams {
            omega: g.omega,
            f_value: g.f,
            alpha: g.alpha,
            beta: g.beta,
        };
        match garch_step(
            &params,
            GarchState {
                u_prev,
                sigma2_prev,
            },
            eps,
        ) {
            Ok((r, next)) => {
                *out_r = r;
                *out_u = next.u_prev;
                *out_sigma2 = next.sigma2_prev;
                MgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Run the market simulation. `length` kept steps after `burn_in`
/// discarded ones.
///
/// # Safety
/// `params` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_simulate(
    params: *const MgParams,
    length: usize,
    burn_in: usize,
    seed: u64,
    out: *mut *mut MgSeries,
) -> MgStatus {
    guard(|| {
        let (Some(params), false) = (params.as_ref(), out.is_null()) else {
            return fail(MgStatus::NullPointer, "params or out is NULL");
        };
        match simulate_with(&params.inner, RunSettings { length, burn_in }, seed) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MgSeries { inner }));
                MgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of returns; 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_series_len(series: *const MgSeries) -> usize {
    series.as_ref().map_or(0, |s| s.inner.len())
}

/// Kept steps with a negative buy or sell volume; 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_series_negative_volume_steps(series: *const MgSeries) -> usize {
    series.as_ref().map_or(0, |s| s.inner.negative_volume_steps)
}

/// Copy the returns into `buf`, which must hold at least
/// `mg_series_len(series)` doubles.
///
/// # Safety
/// `series` must be a live handle and `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn mg_series_returns(
    series: *const MgSeries,
    buf: *mut f64,
    cap: usize,
) -> MgStatus {
    guard(|| {
        let (Some(series), false) = (series.as_ref(), buf.is_null()) else {
            return fail(MgStatus::NullPointer, "series or buf is NULL");
        };
        let r = &series.inner.returns;
        if cap < r.len() {
            return fail(
                MgStatus::BufferTooSmall,
                format!("buffer holds {cap} values, need {}", r.len()),
            );
        }
        ptr::copy_nonoverlapping(r.as_ptr(), buf, r.len());
        MgStatus::Ok
    })
}

/// # Safety
/// `series` must be NULL or a handle from [`mg_simulate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mg_series_free(series: *mut MgSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Stylized-facts statistics of `len` returns at the given significance.
///
/// # Safety
/// `returns` must be readable for `len` doubles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mg_stylized_facts(
    returns: *const f64,
    len: usize,
    significance: f64,
    out: *mut MgFacts,
) -> MgStatus {
    guard(|| {
        if returns.is_null() || out.is_null() {
            return fail(MgStatus::NullPointer, "returns or out is NULL");
        }
        let series = std::slice::from_raw_parts(returns, len);
        match evaluate_stylized_facts(series, significance) {
            Ok(r) => {
                let lag1 = *r.lag1();
                let mut present = 0;
                for (on, bit) in [
                    (r.skewness.present, MG_FACT_NEGATIVE_SKEW),
                    (r.kurtosis.present, MG_FACT_EXCESS_KURTOSIS),
                    (r.ks.present, MG_FACT_NON_NORMAL),
                    (lag1.present, MG_FACT_VOLATILITY_CLUSTERING),
                ] {
                    if on {
                        present |= bit;
                    }
                }
                *out = MgFacts {
                    sample_size: r.sample_size,
                    skewness: r.skewness.value,
                    skewness_p: r.skewness.p_value,
                    kurtosis: r.kurtosis.value,
                    kurtosis_p: r.kurtosis.p_value,
                    ks: r.ks.value,
                    ks_p: r.ks.p_value,
                    sq_autocorr1: lag1.value,
                    sq_autocorr1_p: lag1.p_value,
                    present,
                };
                MgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
