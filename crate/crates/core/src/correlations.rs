//! Lambda-generalized diagonal correlations C±(N,N; lambda) for N in {0, 1}:
//! theta-function closed forms and the truncated lambda-series through the
//! form factors, with route cross-validation.
//!
//! With lambda = cos u and q the nome of k = t^{1/2}:
//!
//! ```text
//! C-(0,0) = theta_3(u,q)/theta_3(0,q)      C+(0,0) = theta_2(u,q)/theta_2(0,q)
//! C-(1,1) = -theta_2'(u,q)/(sin u * theta_2 theta_3^2)
//! C+(1,1) = -theta_3'(u,q)/(sin u * theta_2^2 theta_3)
//! ```

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::special::{nome_from_modulus_real, theta, theta_null};
use crate::theta_route::{f00_theta, f11_theta};

/// Which temperature side the correlation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSign {
    /// T > T_c (odd form factors)
    Plus,
    /// T < T_c (even form factors)
    Minus,
}

impl std::fmt::Display for PhaseSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhaseSign::Plus => "plus",
            PhaseSign::Minus => "minus",
        })
    }
}

/// One lambda-correlation evaluation request.
#[derive(Debug, Clone, Copy)]
pub struct LambdaCorrelationQuery {
    pub sign: PhaseSign,
    /// diagonal separation, 0 or 1
    pub big_n: u8,
    /// weight in [0, 1]; u = arccos(lambda)
    pub lambda: f64,
    /// diagonal temperature variable in (0, 0.95]
    pub t: f64,
    /// series truncation: largest form-factor index included
    pub n_max: u8,
}

impl LambdaCorrelationQuery {
    fn validate(&self) -> Result<()> {
        if self.big_n > 1 {
            return Err(Error::unsupported(format!(
                "lambda correlations implemented for N in {{0,1}}, got {}",
                self.big_n
            )));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::domain(format!(
                "lambda must lie in [0,1], got {}",
                self.lambda
            )));
        }
        if !(0.0 < self.t && self.t <= 0.95) {
            return Err(Error::domain(format!(
                "t must lie in (0, 0.95], got {}",
                self.t
            )));
        }
        Ok(())
    }

    pub fn u(&self) -> f64 {
        self.lambda.clamp(0.0, 1.0).acos()
    }
}

/// sin(m u)/sin(u), stable through u -> 0.
///
/// Below the switchover the ratio is evaluated by its Taylor expansion
/// m (1 - (m^2-1) u^2/6 + (3m^4 - 10m^2 + 7) u^4/360).
fn sin_ratio(m: f64, u: f64) -> f64 {
    const SWITCH: f64 = 1e-3;
    if u.abs() < SWITCH {
        let u2 = u * u;
        m * (1.0 - (m * m - 1.0) * u2 / 6.0
            + (3.0 * m.powi(4) - 10.0 * m * m + 7.0) * u2 * u2 / 360.0)
    } else {
        (m * u).sin() / u.sin()
    }
}

/// -theta_2'(u,q)/sin(u) via the termwise ratio (removable singularity at
/// u = 0 handled by `sin_ratio`).
fn neg_dtheta2_over_sin(u: f64, q: f64, tol: &Tolerances) -> f64 {
    let mut sum = 0.0;
    for n in 0..10_000u32 {
        let m = (2 * n + 1) as f64;
        let qp = q.powf((n as f64 + 0.5) * (n as f64 + 0.5));
        if n > 0 && qp < tol.q_tail {
            break;
        }
        sum += 2.0 * qp * m * sin_ratio(m, u);
    }
    sum
}

/// -theta_3'(u,q)/sin(u), same scheme (even harmonics).
fn neg_dtheta3_over_sin(u: f64, q: f64, tol: &Tolerances) -> f64 {
    let mut sum = 0.0;
    for n in 1..10_000u32 {
        let m = (2 * n) as f64;
        let qp = q.powf((n * n) as f64);
        if qp < tol.q_tail {
            break;
        }
        sum += 2.0 * qp * m * sin_ratio(m, u);
    }
    sum
}

/// Theta closed form of C±(N,N; lambda).
pub fn corr_theta(query: &LambdaCorrelationQuery, tol: &Tolerances) -> Result<f64> {
    query.validate()?;
    let k = query.t.sqrt();
    let q = nome_from_modulus_real(k)?;
    if q > tol.q_max() {
        return Err(Error::precision(format!(
            "t = {} gives q = {q} too close to 1",
            query.t
        )));
    }
    let u = query.u();
    let uc = Complex64::new(u, 0.0);
    let qc = Complex64::new(q, 0.0);
    let t2 = theta_null(2, q, tol)?;
    let t3 = theta_null(3, q, tol)?;
    let v = match (query.sign, query.big_n) {
        (PhaseSign::Minus, 0) => theta(3, uc, qc, tol)?.value.re / t3,
        (PhaseSign::Plus, 0) => theta(2, uc, qc, tol)?.value.re / t2,
        (PhaseSign::Minus, 1) => neg_dtheta2_over_sin(u, q, tol) / (t2 * t3 * t3),
        (PhaseSign::Plus, 1) => neg_dtheta3_over_sin(u, q, tol) / (t2 * t2 * t3),
        _ => unreachable!(),
    };
    Ok(v)
}

/// Truncated lambda-series value with a geometric tail estimate from the
/// last two retained terms.
pub fn corr_series(query: &LambdaCorrelationQuery, tol: &Tolerances) -> Result<(f64, f64)> {
    query.validate()?;
    let k = query.t.sqrt();
    let prefactor = (1.0 - query.t).powf(0.25);
    let ff = |n: u8| -> Result<f64> {
        if query.big_n == 0 {
            f00_theta(n, k, tol)
        } else {
            f11_theta(n, k, tol)
        }
    };
    let mut sum;
    let mut terms: Vec<f64> = Vec::new();
    match query.sign {
        PhaseSign::Minus => {
            sum = 1.0;
            let mut n = 2u8;
            while n <= query.n_max {
                let term = query.lambda.powi(n as i32) * ff(n)?;
                terms.push(term);
                sum += term;
                n += 2;
            }
        }
        PhaseSign::Plus => {
            sum = 0.0;
            let mut n = 1u8;
            while n <= query.n_max {
                let term = query.lambda.powi(n as i32) * ff(n)?;
                terms.push(term);
                sum += term;
                n += 2;
            }
        }
    }
    let tail = match terms.len() {
        0 => 0.0,
        1 => terms[0].abs(),
        _ => {
            let last = terms[terms.len() - 1].abs();
            let prev = terms[terms.len() - 2].abs();
            if last == 0.0 {
                0.0
            } else if last < prev {
                let r = last / prev;
                last * r / (1.0 - r)
            } else {
                f64::INFINITY
            }
        }
    };
    Ok((prefactor * sum, prefactor * tail))
}

/// Grid comparison report of the two routes.
#[derive(Debug, Clone)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
    pub max_excess: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct GridRow {
    pub sign_is_plus: bool,
    pub big_n: u8,
    pub t: f64,
    pub lambda: f64,
    pub theta_value: f64,
    pub series_value: f64,
    pub tail: f64,
}

impl GridRow {
    pub fn diff(&self) -> f64 {
        (self.theta_value - self.series_value).abs()
    }
    /// Amount by which the route difference exceeds the series tail bound.
    pub fn excess(&self) -> f64 {
        (self.diff() - self.tail).max(0.0)
    }
}

/// Tabulate both routes over a (t, lambda) grid.
pub fn corr_check_grid(
    sign: PhaseSign,
    big_n: u8,
    t_grid: &[f64],
    lambda_grid: &[f64],
    n_max: u8,
    tol: &Tolerances,
) -> Result<GridReport> {
    let mut rows = Vec::new();
    let mut max_excess: f64 = 0.0;
    for &t in t_grid {
        for &lambda in lambda_grid {
            let q = LambdaCorrelationQuery {
                sign,
                big_n,
                lambda,
                t,
                n_max,
            };
            let theta_value = corr_theta(&q, tol)?;
            let (series_value, tail) = corr_series(&q, tol)?;
            let row = GridRow {
                sign_is_plus: matches!(sign, PhaseSign::Plus),
                big_n,
                t,
                lambda,
                theta_value,
                series_value,
                tail,
            };
            max_excess = max_excess.max(row.excess());
            rows.push(row);
        }
    }
    Ok(GridReport { rows, max_excess })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn q(sign: PhaseSign, big_n: u8, lambda: f64, t: f64) -> LambdaCorrelationQuery {
        LambdaCorrelationQuery {
            sign,
            big_n,
            lambda,
            t,
            n_max: 8,
        }
    }

    #[test]
    fn lambda_one_normalization() {
        // u = 0: theta ratios are exactly 1
        for &t in &[0.1, 0.25, 0.5] {
            let v = corr_theta(&q(PhaseSign::Minus, 0, 1.0, t), &tol()).unwrap();
            assert!((v - 1.0).abs() < 1e-14, "C-(0,0;1) at t = {t}: {v}");
            let v = corr_theta(&q(PhaseSign::Plus, 0, 1.0, t), &tol()).unwrap();
            assert!((v - 1.0).abs() < 1e-14, "C+(0,0;1) at t = {t}: {v}");
        }
    }

    #[test]
    fn lambda_zero_is_quarter_power() {
        // u = pi/2: theta_3(pi/2, q) = theta_4(0, q), so C-(0,0;0) = (1-t)^{1/4}
        for &t in &[0.1, 0.25, 0.5] {
            let v = corr_theta(&q(PhaseSign::Minus, 0, 0.0, t), &tol()).unwrap();
            let expect = (1.0 - t).powf(0.25);
            assert!((v - expect).abs() < 1e-13, "t = {t}: {v} vs {expect}");
            // series side is exact here: the lambda sum is empty
            let (s, tail) = corr_series(&q(PhaseSign::Minus, 0, 0.0, t), &tol()).unwrap();
            assert_eq!(s, expect);
            assert_eq!(tail, 0.0);
        }
    }

    #[test]
    fn routes_agree_inside_tail_bound() {
        let (s, tail) = corr_series(&q(PhaseSign::Minus, 0, 0.5, 0.25), &tol()).unwrap();
        let v = corr_theta(&q(PhaseSign::Minus, 0, 0.5, 0.25), &tol()).unwrap();
        assert!((s - v).abs() <= tail + 1e-9, "{s} vs {v} (tail {tail})");

        let (s, tail) = corr_series(&q(PhaseSign::Plus, 1, 1.0, 0.1), &tol()).unwrap();
        let v = corr_theta(&q(PhaseSign::Plus, 1, 1.0, 0.1), &tol()).unwrap();
        assert!((s - v).abs() <= tail + 1e-9, "{s} vs {v} (tail {tail})");
    }

    #[test]
    fn full_grid_report() {
        let t_grid = [0.1, 0.25, 0.5];
        let l_grid = [0.0, 0.3, 0.7, 1.0];
        for sign in [PhaseSign::Minus, PhaseSign::Plus] {
            for big_n in 0..=1u8 {
                let rep = corr_check_grid(sign, big_n, &t_grid, &l_grid, 8, &tol()).unwrap();
                assert!(
                    rep.max_excess < 1e-9,
                    "{sign} N = {big_n}: excess {}",
                    rep.max_excess
                );
                for row in &rep.rows {
                    assert!(row.diff() < 1e-7, "grid diff {}", row.diff());
                }
            }
        }
    }

    #[test]
    fn minus_series_is_even_in_lambda() {
        // C- depends on lambda only through lambda^2, so there is no linear
        // term at lambda = 0
        let (v0, _) = corr_series(&q(PhaseSign::Minus, 0, 0.0, 0.25), &tol()).unwrap();
        let (v1, _) = corr_series(&q(PhaseSign::Minus, 0, 1e-4, 0.25), &tol()).unwrap();
        assert!((v1 - v0).abs() < 1e-7, "linear lambda term present: {}", v1 - v0);
        // while the plus series is odd: it vanishes at lambda = 0
        let (p0, _) = corr_series(&q(PhaseSign::Plus, 0, 0.0, 0.25), &tol()).unwrap();
        assert_eq!(p0, 0.0);
    }

    #[test]
    fn monotone_interpolation_in_lambda() {
        // C-(0,0;lambda) runs from (1-t)^{1/4} at lambda=0 to 1 at lambda=1
        let t = 0.25;
        let mut prev = 0.0;
        for i in 0..=10 {
            let lambda = i as f64 / 10.0;
            let v = corr_theta(&q(PhaseSign::Minus, 0, lambda, t), &tol()).unwrap();
            assert!(v >= prev - 1e-12, "not monotone at lambda = {lambda}");
            prev = v;
        }
        assert!((prev - 1.0).abs() < 1e-13);
    }

    #[test]
    fn physical_column_monotone_in_t() {
        // at lambda = 1 the minus-phase values are physical correlations and
        // decrease with t
        for big_n in 0..=1u8 {
            let mut prev = f64::INFINITY;
            for &t in &[0.1, 0.25, 0.5, 0.8] {
                let v = corr_theta(&q(PhaseSign::Minus, big_n, 1.0, t), &tol()).unwrap();
                assert!(v < prev, "N = {big_n}, t = {t}: {v} not decreasing");
                prev = v;
            }
        }
    }

    #[test]
    fn zero_temperature_limit() {
        // t -> 0: C-(0,0) -> 1 and C-(1,1) -> 1 at lambda = 1
        for big_n in 0..=1u8 {
            let v = corr_theta(&q(PhaseSign::Minus, big_n, 1.0, 1e-6), &tol()).unwrap();
            assert!((v - 1.0).abs() < 1e-5, "N = {big_n}: {v}");
        }
    }

    #[test]
    fn validation_errors() {
        assert!(corr_theta(&q(PhaseSign::Minus, 2, 0.5, 0.25), &tol()).is_err());
        assert!(corr_theta(&q(PhaseSign::Minus, 0, 1.5, 0.25), &tol()).is_err());
        assert!(corr_theta(&q(PhaseSign::Minus, 0, 0.5, 0.96), &tol()).is_err());
    }
}
