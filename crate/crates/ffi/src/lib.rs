//! C ABI for the ising-chi library.
//!
//! All entry points are `extern "C"`, return a [`ChiStatus`] code, and write
//! results through out-pointers. State lives behind an opaque [`ChiContext`]
//! handle created with [`ising_chi_new`] and released with
//! [`ising_chi_free`]; the handle stores the tolerance configuration and the
//! last error message (readable via [`ising_chi_last_error`]).
//!
//! The generated header is written to `include/ising_chi.h` at build time.

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ising_chi::correlations::{corr_series, corr_theta, LambdaCorrelationQuery, PhaseSign};
use ising_chi::error::Error;
use ising_chi::form_factors::{ff_eval, FormFactorKey, Route};
use ising_chi::special;
use ising_chi::susceptibility;
use ising_chi::theta_route;
use ising_chi::Tolerances;

/// Status codes returned by every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiStatus {
    Ok = 0,
    DomainError = 1,
    PrecisionError = 2,
    Unsupported = 3,
    BudgetExhausted = 4,
    NullPointer = 5,
    InternalError = 6,
}

/// Evaluation route selector for form factors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiRoute {
    Quadrature = 0,
    ClosedForm = 1,
    Hypergeometric = 2,
    Theta = 3,
}

/// Temperature side selector for the lambda correlations.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiPhase {
    /// T > T_c
    Plus = 0,
    /// T < T_c
    Minus = 1,
}

/// Opaque evaluation context.
pub struct ChiContext {
    tol: Tolerances,
    last_error: Option<CString>,
}

fn status_of(err: &Error) -> ChiStatus {
    match err {
        Error::Domain(_) | Error::TagMismatch { .. } => ChiStatus::DomainError,
        Error::Precision(_) => ChiStatus::PrecisionError,
        Error::Unsupported(_) => ChiStatus::Unsupported,
        Error::BudgetExhausted(_) => ChiStatus::BudgetExhausted,
        Error::Internal(_) => ChiStatus::InternalError,
    }
}

/// Run a fallible computation, record its error message on the context and
/// store the result through `out`.
fn run1(
    ctx: *mut ChiContext,
    out: *mut f64,
    f: impl FnOnce(&Tolerances) -> Result<f64, Error>,
) -> ChiStatus {
    if ctx.is_null() || out.is_null() {
        return ChiStatus::NullPointer;
    }
    let ctx = unsafe { &mut *ctx };
    ctx.last_error = None;
    match catch_unwind(AssertUnwindSafe(|| f(&ctx.tol))) {
        Ok(Ok(v)) => {
            unsafe { *out = v };
            ChiStatus::Ok
        }
        Ok(Err(e)) => {
            let status = status_of(&e);
            ctx.last_error = CString::new(e.to_string()).ok();
            status
        }
        Err(_) => {
            ctx.last_error = CString::new("internal panic").ok();
            ChiStatus::InternalError
        }
    }
}

/// Create an evaluation context with default tolerances.
#[no_mangle]
pub extern "C" fn ising_chi_new() -> *mut ChiContext {
    Box::into_raw(Box::new(ChiContext {
        tol: Tolerances::default(),
        last_error: None,
    }))
}

/// Release a context created by [`ising_chi_new`]. A null pointer is a no-op.
///
/// # Safety
/// `ctx` must be a pointer previously returned by [`ising_chi_new`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ising_chi_free(ctx: *mut ChiContext) {
    if !ctx.is_null() {
        drop(unsafe { Box::from_raw(ctx) });
    }
}

/// Message describing the most recent failure on this context, or null when
/// the last call succeeded. The pointer stays valid until the next call on
/// the same context.
#[no_mangle]
pub extern "C" fn ising_chi_last_error(ctx: *const ChiContext) -> *const c_char {
    if ctx.is_null() {
        return std::ptr::null();
    }
    let ctx = unsafe { &*ctx };
    match &ctx.last_error {
        Some(msg) => msg.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Library version string (static storage).
#[no_mangle]
pub extern "C" fn ising_chi_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Complete elliptic integral K(m), parameter convention m = k^2.
#[no_mangle]
pub extern "C" fn ising_chi_ellip_k(ctx: *mut ChiContext, m: f64, out: *mut f64) -> ChiStatus {
    run1(ctx, out, |_| special::ellip_k(m))
}

/// Complete elliptic integral E(m), parameter convention.
#[no_mangle]
pub extern "C" fn ising_chi_ellip_e(ctx: *mut ChiContext, m: f64, out: *mut f64) -> ChiStatus {
    run1(ctx, out, |_| special::ellip_e(m))
}

/// Gauss hypergeometric 2F1(a, b; c; t) for real parameters, 0 <= t < 1.
#[no_mangle]
pub extern "C" fn ising_chi_hyp2f1(
    ctx: *mut ChiContext,
    a: f64,
    b: f64,
    c: f64,
    t: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |_| special::hyp2f1(a, b, c, t))
}

/// Jacobi theta_index(u, q) for real u and q; writes the value and the
/// u-derivative.
#[no_mangle]
pub extern "C" fn ising_chi_theta(
    ctx: *mut ChiContext,
    index: u32,
    u: f64,
    q: f64,
    out_value: *mut f64,
    out_du: *mut f64,
) -> ChiStatus {
    if out_du.is_null() {
        return ChiStatus::NullPointer;
    }
    run1(ctx, out_value, |tol| {
        let (value, du) = special::theta_real(index as u8, u, q, tol)?;
        unsafe { *out_du = du };
        Ok(value)
    })
}

/// Nome q(k) on the physical branch 0 <= k < 1.
#[no_mangle]
pub extern "C" fn ising_chi_nome_from_modulus(
    ctx: *mut ChiContext,
    k: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |_| special::nome_from_modulus_real(k))
}

/// Modulus k(q) from the nome product form, real q in [0, 1).
#[no_mangle]
pub extern "C" fn ising_chi_modulus_from_nome(
    ctx: *mut ChiContext,
    q: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |tol| special::modulus_from_nome_real(q, tol))
}

/// Diagonal form factor f^{(n)}_{N,N}(t) along the selected route.
#[no_mangle]
pub extern "C" fn ising_chi_ff_eval(
    ctx: *mut ChiContext,
    n: u32,
    big_n: u32,
    t: f64,
    route: ChiRoute,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |tol| {
        let route = match route {
            ChiRoute::Quadrature => Route::Quadrature,
            ChiRoute::ClosedForm => Route::ClosedForm,
            ChiRoute::Hypergeometric => Route::Hypergeometric,
            ChiRoute::Theta => Route::Theta,
        };
        ff_eval(FormFactorKey::new(n as u8, big_n), t, route, tol)
    })
}

/// f^{(n)}_{0,0}(t), nome-side evaluation, t = k^2.
#[no_mangle]
pub extern "C" fn ising_chi_f00_theta(
    ctx: *mut ChiContext,
    n: u32,
    k: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |tol| theta_route::f00_theta(n as u8, k, tol))
}

/// f^{(n)}_{1,1}(t), nome-side evaluation, t = k^2.
#[no_mangle]
pub extern "C" fn ising_chi_f11_theta(
    ctx: *mut ChiContext,
    n: u32,
    k: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |tol| theta_route::f11_theta(n as u8, k, tol))
}

/// Closed form of the diagonal susceptibility sector n in {1, 2}.
#[no_mangle]
pub extern "C" fn ising_chi_chid_closed(
    ctx: *mut ChiContext,
    n: u32,
    t: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |_| susceptibility::chid_closed(n as u8, t))
}

/// Quadrature route of the diagonal susceptibility sector n in {1, 2, 3}.
#[no_mangle]
pub extern "C" fn ising_chi_chid_quad(
    ctx: *mut ChiContext,
    n: u32,
    t: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |_| susceptibility::chid_quad(n as u8, t, None))
}

/// Leading bulk sector chi^(n) for n in {1, 2} at modulus k.
#[no_mangle]
pub extern "C" fn ising_chi_chi_bulk(
    ctx: *mut ChiContext,
    n: u32,
    k: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |_| susceptibility::chi_bulk(n as u8, k))
}

/// Lambda correlation C±(N,N; lambda) at t, theta closed form.
#[no_mangle]
pub extern "C" fn ising_chi_corr_theta(
    ctx: *mut ChiContext,
    phase: ChiPhase,
    big_n: u32,
    lambda: f64,
    t: f64,
    out: *mut f64,
) -> ChiStatus {
    run1(ctx, out, |tol| {
        let q = LambdaCorrelationQuery {
            sign: match phase {
                ChiPhase::Plus => PhaseSign::Plus,
                ChiPhase::Minus => PhaseSign::Minus,
            },
            big_n: big_n as u8,
            lambda,
            t,
            n_max: 8,
        };
        corr_theta(&q, tol)
    })
}

/// Lambda correlation via the truncated form-factor series; writes the value
/// and the geometric tail estimate.
#[no_mangle]
pub extern "C" fn ising_chi_corr_series(
    ctx: *mut ChiContext,
    phase: ChiPhase,
    big_n: u32,
    lambda: f64,
    t: f64,
    n_max: u32,
    out_value: *mut f64,
    out_tail: *mut f64,
) -> ChiStatus {
    if out_tail.is_null() {
        return ChiStatus::NullPointer;
    }
    run1(ctx, out_value, |tol| {
        let q = LambdaCorrelationQuery {
            sign: match phase {
                ChiPhase::Plus => PhaseSign::Plus,
                ChiPhase::Minus => PhaseSign::Minus,
            },
            big_n: big_n as u8,
            lambda,
            t,
            n_max: n_max as u8,
        };
        let (v, tail) = corr_series(&q, tol)?;
        unsafe { *out_tail = tail };
        Ok(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_round_trip() {
        let ctx = ising_chi_new();
        assert!(!ctx.is_null());
        let mut out = 0.0;
        let st = ising_chi_ellip_k(ctx, 0.5, &mut out);
        assert_eq!(st, ChiStatus::Ok);
        assert!((out - 1.854_074_677_301_372).abs() < 1e-13);
        assert!(ising_chi_last_error(ctx).is_null());
        unsafe { ising_chi_free(ctx) };
    }

    #[test]
    fn error_reporting() {
        let ctx = ising_chi_new();
        let mut out = 0.0;
        let st = ising_chi_ellip_k(ctx, 1.5, &mut out);
        assert_eq!(st, ChiStatus::DomainError);
        let msg = ising_chi_last_error(ctx);
        assert!(!msg.is_null());
        let text = unsafe { std::ffi::CStr::from_ptr(msg) }.to_str().unwrap();
        assert!(text.contains("ellip_k"));
        unsafe { ising_chi_free(ctx) };
    }

    #[test]
    fn null_pointer_safety() {
        let mut out = 0.0;
        assert_eq!(
            ising_chi_ellip_k(std::ptr::null_mut(), 0.5, &mut out),
            ChiStatus::NullPointer
        );
        let ctx = ising_chi_new();
        assert_eq!(
            ising_chi_ellip_k(ctx, 0.5, std::ptr::null_mut()),
            ChiStatus::NullPointer
        );
        assert!(ising_chi_last_error(std::ptr::null()).is_null());
        unsafe { ising_chi_free(std::ptr::null_mut()) };
        unsafe { ising_chi_free(ctx) };
    }

    #[test]
    fn form_factor_routes_agree_through_the_abi() {
        let ctx = ising_chi_new();
        let mut a = 0.0;
        let mut b = 0.0;
        assert_eq!(
            ising_chi_ff_eval(ctx, 2, 0, 0.25, ChiRoute::ClosedForm, &mut a),
            ChiStatus::Ok
        );
        assert_eq!(
            ising_chi_ff_eval(ctx, 2, 0, 0.25, ChiRoute::Theta, &mut b),
            ChiStatus::Ok
        );
        assert!((a - b).abs() < 1e-10);
        let st = ising_chi_ff_eval(ctx, 5, 0, 0.25, ChiRoute::Quadrature, &mut a);
        assert_eq!(st, ChiStatus::Unsupported);
        unsafe { ising_chi_free(ctx) };
    }

    #[test]
    fn correlations_through_the_abi() {
        let ctx = ising_chi_new();
        let mut v = 0.0;
        let mut tail = 0.0;
        assert_eq!(
            ising_chi_corr_series(ctx, ChiPhase::Minus, 0, 0.5, 0.25, 8, &mut v, &mut tail),
            ChiStatus::Ok
        );
        let mut w = 0.0;
        assert_eq!(
            ising_chi_corr_theta(ctx, ChiPhase::Minus, 0, 0.5, 0.25, &mut w),
            ChiStatus::Ok
        );
        assert!((v - w).abs() <= tail + 1e-9);
        unsafe { ising_chi_free(ctx) };
    }

    #[test]
    fn version_is_a_c_string() {
        let p = ising_chi_version();
        assert!(!p.is_null());
        let s = unsafe { std::ffi::CStr::from_ptr(p) }.to_str().unwrap();
        assert!(s.starts_with(char::is_numeric));
    }
}
