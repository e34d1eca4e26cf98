//! Diagonal susceptibility sectors (closed form, quadrature, exact series),
//! the leading bulk sectors, the three-block decomposition of the third
//! diagonal sector, and the -7/4 critical-exponent scaling check.
//!
//! Variable bookkeeping: diagonal sectors take the temperature variable
//! t = k^2; bulk sectors take the modulus k. Conversions happen only at the
//! API boundary.

use crate::error::{Error, Result};
use crate::form_factors::{ff_eval, FormFactorKey, Route};
use crate::quad::{integrate, IntegrandHandle, QuadratureSpec, Substitution};
use crate::special::{ellip_e, ellip_k, hyp2f1};
use crate::Tolerances;
use std::f64::consts::PI;

/// Reference amplitude constants, stored verbatim (never recomputed to full
/// precision here). The below-T_c constant is quoted as the bracketed digits
/// of I- = (1/(12 pi)) * 1.00096...
pub struct AmplitudeConstants;

impl AmplitudeConstants {
    pub const I_PLUS_DIGITS: &'static str =
        "1.000815260440212647119476363047210236937534925597789";
    /// I- equals this constant divided by 12 pi.
    pub const I_MINUS_BRACKET_DIGITS: &'static str =
        "1.000960328725262189480934955172097320572505951770117";

    pub fn i_plus() -> f64 {
        Self::I_PLUS_DIGITS.parse().expect("valid decimal")
    }

    pub fn i_minus() -> f64 {
        let bracket: f64 = Self::I_MINUS_BRACKET_DIGITS.parse().expect("valid decimal");
        bracket / (12.0 * PI)
    }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0 < v && v < 1.0) {
        return Err(Error::domain(format!("{name} must lie in (0,1), got {v}")));
    }
    Ok(())
}

/// Closed forms of the first two diagonal sectors:
/// chi_d^(1)(t) = 1/(1 - t^{1/2}), chi_d^(2)(t) = t/(4(1-t)).
pub fn chid_closed(n: u8, t: f64) -> Result<f64> {
    check_unit_interval("t", t)?;
    match n {
        1 => Ok(1.0 / (1.0 - t.sqrt())),
        2 => Ok(t / (4.0 * (1.0 - t))),
        _ => Err(Error::unsupported(format!(
            "closed diagonal sector exists for n in {{1,2}}, got {n}"
        ))),
    }
}

/// n-fold integral route for the diagonal sectors, n <= 3.
pub fn chid_quad(n: u8, t: f64, spec: Option<QuadratureSpec>) -> Result<f64> {
    check_unit_interval("t", t)?;
    if t > 0.9 {
        return Err(Error::domain(format!(
            "diagonal quadrature limited to t <= 0.9, got {t}"
        )));
    }
    let handle = match n {
        1 => {
            let ts = t.sqrt();
            IntegrandHandle::new(1, vec![(-0.5, -0.5)], move |x: &[f64]| {
                let x0 = x[0];
                (1.0 + ts * x0) / (1.0 - ts * x0)
                    / (x0 * (1.0 - x0) * (1.0 - t * x0)).sqrt()
            })?
        }
        2 => IntegrandHandle::new(2, vec![(0.5, -0.5), (-0.5, 0.5)], move |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            let geom = (1.0 + t * a * b) / (1.0 - t * a * b);
            let ratio = (a * (1.0 - b) * (1.0 - t * b)) / (b * (1.0 - a) * (1.0 - t * a));
            let pair = 1.0 - t * a * b;
            geom * ratio.sqrt() / (pair * pair)
        })?,
        3 => IntegrandHandle::new(
            3,
            vec![(-0.5, -0.5), (0.5, 0.5), (-0.5, -0.5)],
            move |x: &[f64]| {
                let (a, b, c) = (x[0], x[1], x[2]);
                let th = t.powf(1.5);
                let geom = (1.0 + th * a * b * c) / (1.0 - th * a * b * c);
                let odd1 = ((1.0 - a) * (1.0 - t * a) * a).sqrt();
                let even = ((1.0 - b) * (1.0 - t * b) * b).sqrt();
                let odd2 = ((1.0 - c) * (1.0 - t * c) * c).sqrt();
                let p1 = 1.0 - t * a * b;
                let p2 = 1.0 - t * c * b;
                let v = a - c;
                geom * even / (odd1 * odd2) * v * v / (p1 * p1 * p2 * p2)
            },
        )?,
        _ => {
            return Err(Error::unsupported(format!(
                "diagonal quadrature implemented for n in 1..=3, got {n}"
            )))
        }
    };
    let spec = spec.unwrap_or_else(|| {
        QuadratureSpec::new(
            n as usize,
            match n {
                1 => 256,
                2 => 128,
                _ => 96,
            },
            Substitution::Trig,
            1e-10,
        )
    });
    let r = integrate(&handle, &spec)?;
    let pre = match n {
        1 => 1.0 / PI,
        2 => t / (PI * PI),
        _ => t * t / (2.0 * PI.powi(3)),
    };
    Ok(pre * r.value)
}

/// Sector sum (1-t)^{1/4} sum_n chi_d^{(n)}: even sectors for the minus
/// phase, odd for plus. `n_max` is the largest sector index included.
pub fn chid_sum(plus_phase: bool, t: f64, n_max: u8) -> Result<f64> {
    check_unit_interval("t", t)?;
    let mut sum = 0.0;
    let mut n = if plus_phase { 1 } else { 2 };
    if !plus_phase && n_max < 2 || plus_phase && n_max < 1 {
        return Err(Error::domain(format!(
            "n_max = {n_max} includes no sector for this phase"
        )));
    }
    while n <= n_max {
        sum += match n {
            1 | 2 => chid_closed(n, t)?,
            3 => chid_quad(3, t, None)?,
            _ => {
                return Err(Error::unsupported(format!(
                    "no available route for diagonal sector {n}"
                )))
            }
        };
        n += 2;
    }
    Ok((1.0 - t).powf(0.25) * sum)
}

/// The three printed blocks of the third diagonal sector's direct-sum
/// decomposition, evaluated separately (the combination constants are not
/// part of the decomposition data and are not guessed).
#[derive(Debug, Clone, Copy)]
pub struct Chid3Components {
    /// 1/(1 - k)  (the first sector block, t = k^2)
    pub chi1_term: f64,
    /// (1/(k-1)) Kb + (1/(k-1)^2) Eb
    pub ke_term: f64,
    /// pullback argument Q = 27 (1+k)^2 k^2 / (4 (k^2+k+1)^2)
    pub q_arg: f64,
    /// the hypergeometric block, defined for Q < 1 only
    pub f16_term: Option<f64>,
}

/// Largest k for which the hypergeometric block's argument stays below 1:
/// the positive root of (3 sqrt(3)/2 - 1)(k^2 + k) = 1.
pub const QK_STAR: f64 = 0.435_816_426_754_299_6;

/// Exact rational Q(k) for rational k (used by tests and the report layer).
pub fn q_arg_exact(k_num: i64, k_den: i64) -> crate::exact::Rat {
    use crate::exact::rat;
    let k = rat(k_num, k_den);
    let one = rat(1, 1);
    let kp1 = &k + &one;
    let denom = &k * &k + &k + &one;
    rat(27, 4) * &kp1 * &kp1 * &k * &k / (&denom * &denom)
}

/// Evaluate the printed decomposition blocks at modulus k in (0,1).
pub fn chid3_components(k: f64, _tol: &Tolerances) -> Result<Chid3Components> {
    check_unit_interval("k", k)?;
    let t = k * k;
    let kb = 2.0 / PI * ellip_k(t)?;
    let eb = 2.0 / PI * ellip_e(t)?;
    let chi1_term = 1.0 / (1.0 - k);
    let ke_term = kb / (k - 1.0) + eb / ((k - 1.0) * (k - 1.0));
    let q_arg = 27.0 / 4.0 * (1.0 + k).powi(2) * k * k / (k * k + k + 1.0).powi(2);
    let f16_term = if q_arg < 1.0 {
        let f1 = hyp2f1(1.0 / 6.0, 1.0 / 3.0, 1.0, q_arg)?;
        let f2 = hyp2f1(7.0 / 6.0, 4.0 / 3.0, 2.0, q_arg)?;
        let pre = (1.0 + 2.0 * k) * (k + 2.0) / ((1.0 - k) * (1.0 + k + k * k));
        Some(pre * (f1 * f1 + 2.0 * q_arg / 9.0 * f1 * f2))
    } else {
        None
    };
    Ok(Chid3Components {
        chi1_term,
        ke_term,
        q_arg,
        f16_term,
    })
}

/// Leading bulk sectors for the isotropic lattice:
/// chi^(1) = 1/(1 - k^{1/2})^2,
/// chi^(2) = ((1+k^2) E - (1-k^2) K) / (3 pi (1-k)(1-k^2)), K/E at m = k^2.
pub fn chi_bulk(n: u8, k: f64) -> Result<f64> {
    check_unit_interval("k", k)?;
    match n {
        1 => Ok(1.0 / (1.0 - k.sqrt()).powi(2)),
        2 => {
            let m = k * k;
            let kk = ellip_k(m)?;
            let ee = ellip_e(m)?;
            Ok(((1.0 + m) * ee - (1.0 - m) * kk) / (3.0 * PI * (1.0 - k) * (1.0 - m)))
        }
        _ => Err(Error::unsupported(format!(
            "bulk closed forms exist for n in {{1,2}}, got {n}"
        ))),
    }
}

/// Least-squares fit of ln y against ln(1-k).
#[derive(Debug, Clone)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// limit estimate of y (1-k)^{7/4} at the grid point closest to k = 1,
    /// normalized by the exact leading constant 2^{9/4}
    pub amplitude_ratio: f64,
    pub points: Vec<(f64, f64)>,
}

/// Default critical fit grid: k log-spaced so that 1-k covers
/// [1e-4, 1e-2].
pub fn default_critical_grid(npoints: usize) -> Vec<f64> {
    let lo: f64 = 1e-4;
    let hi: f64 = 1e-2;
    (0..npoints)
        .map(|i| {
            let f = i as f64 / (npoints - 1) as f64;
            1.0 - lo * (hi / lo).powf(f)
        })
        .collect()
}

/// Fit the divergence exponent of chi^(1), optionally assembled with the
/// (1-t)^{1/4} prefactor (t = k^2). The assembled object scales like
/// 2^{9/4} (1-k)^{-7/4} near k = 1.
pub fn critical_exponent_fit(k_grid: &[f64], with_prefactor: bool) -> Result<ExponentFit> {
    if k_grid.len() < 3 {
        return Err(Error::domain("need at least 3 grid points".to_string()));
    }
    let mut pts = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        check_unit_interval("k", k)?;
        let mut y = chi_bulk(1, k)?;
        if with_prefactor {
            y *= (1.0 - k * k).powf(0.25);
        }
        pts.push(((1.0 - k).ln(), y.ln()));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return Err(Error::domain("degenerate grid".to_string()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    // limit amplitude from the point closest to criticality
    let (lx, ly) = pts
        .iter()
        .cloned()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .unwrap();
    let amplitude = (ly + 1.75 * lx).exp();
    Ok(ExponentFit {
        slope,
        intercept,
        amplitude_ratio: amplitude / 2f64.powf(2.25),
        points: pts,
    })
}

/// Direct summation of the first odd sector from the n = 1 form factors:
/// f^{(1)}_{0,0} + 2 sum_{N>=1} f^{(1)}_{N,N} telescopes to 1/(1-t^{1/2}).
pub fn chid1_from_form_factors(t: f64, tol: &Tolerances, rel_tail: f64) -> Result<f64> {
    check_unit_interval("t", t)?;
    let mut sum = ff_eval(FormFactorKey::new(1, 0), t, Route::Hypergeometric, tol)?;
    let mut prev_term = 0.0;
    for big_n in 1..=200u32 {
        let term = 2.0 * ff_eval(FormFactorKey::new(1, big_n), t, Route::Hypergeometric, tol)?;
        sum += term;
        // geometric tail bound once the ratio settles
        if big_n >= 2 && term < prev_term {
            let r = term / prev_term;
            if term * r / (1.0 - r) < rel_tail * sum {
                return Ok(sum);
            }
        }
        prev_term = term;
    }
    Err(Error::BudgetExhausted(
        "diagonal geometric sum did not settle within 200 terms".to_string(),
    ))
}
