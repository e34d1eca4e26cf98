//! Jacobi theta functions theta_1 .. theta_4 from their q-series.
//!
//! Series used (u, q complex, |q| < 1):
//!
//! ```text
//! theta_1(u,q) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1)u)
//! theta_2(u,q) = 2 sum_{n>=0}        q^{(n+1/2)^2} cos((2n+1)u)
//! theta_3(u,q) = 1 + 2 sum_{n>=1}        q^{n^2} cos(2nu)
//! theta_4(u,q) = 1 + 2 sum_{n>=1} (-1)^n q^{n^2} cos(2nu)
//! ```
//!
//! The u-derivative is the term-wise derivative of the same truncated series,
//! so value and derivative always refer to one truncation.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// One theta evaluation: series value and u-derivative at (u, q).
#[derive(Debug, Clone, Copy)]
pub struct ThetaValue {
    pub index: u8,
    pub u: Complex64,
    pub q: Complex64,
    pub value: Complex64,
    pub u_derivative: Complex64,
}

const MAX_TERMS: usize = 4000;

fn check_q(q: Complex64, tol: &Tolerances) -> Result<()> {
    if q.norm() > tol.q_max() {
        return Err(Error::precision(format!(
            "theta series refuses |q| = {} > {}",
            q.norm(),
            tol.q_max()
        )));
    }
    Ok(())
}

/// theta_index(u, q) with its u-derivative.
pub fn theta(index: u8, u: Complex64, q: Complex64, tol: &Tolerances) -> Result<ThetaValue> {
    if !(1..=4).contains(&index) {
        return Err(Error::domain(format!("theta index must be 1..4, got {index}")));
    }
    check_q(q, tol)?;
    let qn = q.norm();
    let eim = u.im.abs().exp();

    let mut value;
    let mut deriv = Complex64::new(0.0, 0.0);

    match index {
        1 | 2 => {
            value = Complex64::new(0.0, 0.0);
            // q^{(n+1/2)^2} = q^{1/4} * q^{n^2+n}; keep the integer part as a
            // running product so only one fractional power is taken.
            let q_quarter = q.powf(0.25);
            let mut q_int = Complex64::new(1.0, 0.0); // q^{n^2+n} at n=0
            for n in 0..MAX_TERMS {
                let m = (2 * n + 1) as f64;
                let qp = q_quarter * q_int;
                let sign = if index == 1 && n % 2 == 1 { -1.0 } else { 1.0 };
                let (tv, td) = if index == 1 {
                    ((m * u).sin(), m * (m * u).cos())
                } else {
                    ((m * u).cos(), -m * (m * u).sin())
                };
                value += 2.0 * sign * qp * tv;
                deriv += 2.0 * sign * qp * td;
                // |sin|,|cos| <= e^{m |Im u|}
                let bound = 2.0 * qp.norm() * eim.powf(m) * (m + 1.0);
                if bound < tol.q_tail * (1.0 + value.norm()) {
                    break;
                }
                // advance q^{n^2+n} -> q^{(n+1)^2+(n+1)}: multiply by q^{2n+2}
                q_int *= q.powu(2 * n as u32 + 2);
                if qn == 0.0 {
                    break;
                }
            }
        }
        _ => {
            value = Complex64::new(1.0, 0.0);
            let mut qp = Complex64::new(1.0, 0.0); // q^{n^2}
            for n in 1..MAX_TERMS {
                let m = (2 * n) as f64;
                qp *= q.powu(2 * n as u32 - 1); // q^{(n-1)^2} -> q^{n^2}
                let sign = if index == 4 && n % 2 == 1 { -1.0 } else { 1.0 };
                value += 2.0 * sign * qp * (m * u).cos();
                deriv += -2.0 * sign * qp * m * (m * u).sin();
                let bound = 2.0 * qp.norm() * eim.powf(m) * (m + 1.0);
                if bound < tol.q_tail * (1.0 + value.norm()) {
                    break;
                }
                if qn == 0.0 {
                    break;
                }
            }
        }
    }

    Ok(ThetaValue {
        index,
        u,
        q,
        value,
        u_derivative: deriv,
    })
}

/// Null value theta_index(0, q) as a real number for real q.
pub fn theta_null(index: u8, q: f64, tol: &Tolerances) -> Result<f64> {
    let tv = theta(index, Complex64::new(0.0, 0.0), Complex64::new(q, 0.0), tol)?;
    Ok(tv.value.re)
}

/// Real-argument evaluation: (value, u-derivative) at real u, q.
pub fn theta_real(index: u8, u: f64, q: f64, tol: &Tolerances) -> Result<(f64, f64)> {
    let tv = theta(index, Complex64::new(u, 0.0), Complex64::new(q, 0.0), tol)?;
    Ok((tv.value.re, tv.u_derivative.re))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn theta3_at_q_zero_is_one() {
        let v = theta(3, Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.0), &tol()).unwrap();
        assert_eq!(v.value.re, 1.0);
        assert_eq!(v.u_derivative.norm(), 0.0);
    }

    #[test]
    fn theta1_odd_theta234_even() {
        let q = Complex64::new(0.07, 0.0);
        let u = Complex64::new(0.41, 0.0);
        let t1 = theta(1, u, q, &tol()).unwrap().value;
        let t1m = theta(1, -u, q, &tol()).unwrap().value;
        assert!((t1 + t1m).norm() < 1e-15);
        for idx in 2..=4 {
            let tp = theta(idx, u, q, &tol()).unwrap().value;
            let tm = theta(idx, -u, q, &tol()).unwrap().value;
            assert!((tp - tm).norm() < 1e-15, "theta_{idx} not even");
        }
        let t1_at_zero = theta(1, Complex64::new(0.0, 0.0), q, &tol()).unwrap().value;
        assert_eq!(t1_at_zero.norm(), 0.0);
    }

    #[test]
    fn theta1_derivative_product_identity() {
        // theta_1'(0, q) = theta_2 theta_3 theta_4
        let q = 0.05;
        let d = theta(1, Complex64::new(0.0, 0.0), Complex64::new(q, 0.0), &tol())
            .unwrap()
            .u_derivative
            .re;
        let p = theta_null(2, q, &tol()).unwrap()
            * theta_null(3, q, &tol()).unwrap()
            * theta_null(4, q, &tol()).unwrap();
        assert!((d - p).abs() < 1e-13, "{d} vs {p}");
    }

    #[test]
    fn refuses_q_near_one() {
        let e = theta(3, Complex64::new(0.0, 0.0), Complex64::new(0.9999999, 0.0), &tol());
        assert!(matches!(e, Err(Error::Precision(_))));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let q = Complex64::new(0.12, 0.0);
        let u = 0.7;
        let h = 1e-6;
        for idx in 1..=4 {
            let d = theta(idx, Complex64::new(u, 0.0), q, &tol()).unwrap().u_derivative.re;
            let fp = theta(idx, Complex64::new(u + h, 0.0), q, &tol()).unwrap().value.re;
            let fm = theta(idx, Complex64::new(u - h, 0.0), q, &tol()).unwrap().value.re;
            assert!(
                (d - (fp - fm) / (2.0 * h)).abs() < 1e-8,
                "theta_{idx} derivative"
            );
        }
    }
}
