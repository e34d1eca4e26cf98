//! Nome-side evaluation of f^{(n)}_{0,0} and f^{(n)}_{1,1}.
//!
//! Everything reduces to the sparse q-sums
//!
//! ```text
//! S_n(q) = Phi_0( 2^n z^n (1 - z^2) / (1 + z^2)^{n+1} )
//! ```
//!
//! whose terms are exact integer multiples of q^{j^2} (n even) or
//! q^{(2j+1)^2/4} (n odd): the operator products act termwise as
//! prod_l (j^2 - l^2) and prod_l ((2j+1)^2 - (2l+1)^2), never by numerical
//! differentiation. The form factors are then
//!
//! ```text
//! f^{(n)}_{0,0} = (1, k^{-1/2}) S_n / theta_4
//! f^{(n)}_{1,1} = (n+1) (1, k^{-1/2}) S_{n+1} / (theta_2 theta_3 theta_4)
//! ```
//!
//! with the prefactor 1 for even n (below T_c) and k^{-1/2} for odd n.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exact::{rat, ExactSeries, Rat, Variable};
use crate::special::{nome_from_modulus_real, theta_null};

/// Which rational-function family a z-expansion belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    /// 2^n z^n (1-z^2)/(1+z^2)^{n+1}
    F00,
    /// 2^{n+1} z^{n+1} (1-z^2)/(1+z^2)^{n+2}
    F11,
}

const MAX_N: u8 = 8;

fn check_n(n: u8) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::unsupported(format!(
            "theta route supports 1 <= n <= {MAX_N}, got {n}"
        )));
    }
    Ok(())
}

fn nome_for(k: f64, tol: &Tolerances) -> Result<f64> {
    if !(0.0 < k && k < 1.0) {
        return Err(Error::domain(format!(
            "theta route requires 0 < k < 1, got {k}"
        )));
    }
    let q = nome_from_modulus_real(k)?;
    if q > tol.q_max() {
        return Err(Error::precision(format!(
            "k = {k} maps to q = {q} beyond the series limit"
        )));
    }
    Ok(q)
}

/// Termwise evaluation of S_n(q).
fn phi0_sum(n: u8, q: f64, tol: &Tolerances) -> f64 {
    let mut sum = 0.0;
    if n % 2 == 0 {
        let m = (n / 2) as i64;
        // 2 (-1)^M/(2M)! sum_j (-1)^j q^{j^2} prod_{l<M} 4 (j^2 - l^2)
        let mut fact = 1.0;
        for i in 2..=2 * m {
            fact *= i as f64;
        }
        let pref = 2.0 * if m % 2 == 0 { 1.0 } else { -1.0 } / fact;
        for j in 0..10_000i64 {
            let e = (j * j) as f64;
            let qp = q.powf(e);
            if j > 0 && qp < tol.q_tail {
                break;
            }
            let mut prod = 1.0;
            for l in 0..m {
                prod *= 4.0 * ((j * j - l * l) as f64);
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += pref * sign * prod * qp;
        }
    } else {
        let m = ((n - 1) / 2) as i64;
        let mut fact = 1.0;
        for i in 2..=2 * m + 1 {
            fact *= i as f64;
        }
        let pref = 2.0 * if m % 2 == 0 { 1.0 } else { -1.0 } / fact;
        for j in 0..10_000i64 {
            let tj = 2 * j + 1;
            let e = (tj * tj) as f64 / 4.0;
            let qp = q.powf(e);
            if j > 0 && qp < tol.q_tail {
                break;
            }
            let mut prod = tj as f64;
            for l in 0..m {
                prod *= (tj * tj - (2 * l + 1) * (2 * l + 1)) as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += pref * sign * prod * qp;
        }
    }
    sum
}

/// f^{(n)}_{0,0}(t) with t = k^2, evaluated through the nome.
pub fn f00_theta(n: u8, k: f64, tol: &Tolerances) -> Result<f64> {
    check_n(n)?;
    let q = nome_for(k, tol)?;
    let t4 = theta_null(4, q, tol)?;
    let s = phi0_sum(n, q, tol);
    let parity = if n % 2 == 0 { 1.0 } else { k.powf(-0.5) };
    Ok(parity * s / t4)
}

/// f^{(n)}_{1,1}(t) with t = k^2, evaluated through the nome.
pub fn f11_theta(n: u8, k: f64, tol: &Tolerances) -> Result<f64> {
    check_n(n)?;
    let q = nome_for(k, tol)?;
    let t2 = theta_null(2, q, tol)?;
    let t3 = theta_null(3, q, tol)?;
    let t4 = theta_null(4, q, tol)?;
    let s = phi0_sum(n + 1, q, tol);
    let parity = if n % 2 == 0 { 1.0 } else { k.powf(-0.5) };
    Ok((n as f64 + 1.0) * parity * s / (t2 * t3 * t4))
}

/// (q d/dq theta_i)(0, q) / theta_i(0, q) for i in {2, 3, 4}, from the exact
/// termwise q-derivative of the null series.
pub fn theta_q_log_derivative(index: u8, q: f64, tol: &Tolerances) -> Result<f64> {
    if q.abs() > tol.q_max() {
        return Err(Error::precision(format!("|q| = {q} too close to 1")));
    }
    let val = theta_null(index, q, tol)?;
    let mut der = 0.0;
    match index {
        2 => {
            for j in 0..10_000i64 {
                let e = (j as f64 + 0.5) * (j as f64 + 0.5);
                let qp = q.powf(e);
                if qp < tol.q_tail && j > 0 {
                    break;
                }
                der += 2.0 * e * qp;
            }
        }
        3 | 4 => {
            for j in 1..10_000i64 {
                let e = (j * j) as f64;
                let qp = q.powf(e);
                if qp < tol.q_tail {
                    break;
                }
                let sign = if index == 4 && j % 2 == 1 { -1.0 } else { 1.0 };
                der += 2.0 * sign * e * qp;
            }
        }
        _ => return Err(Error::domain("index must be 2..4".to_string())),
    }
    Ok(der / val)
}

/// Exact z-expansion of the numerator family, by the closed product formula:
///
/// even n (F00 with even index or F11 reaching an even index):
///   [z^{2j}] = 2 (-1)^{M+j}/(2M)! prod_{l<M} 4 (j^2 - l^2), n = 2M;
/// odd n: [z^{2j+1}] = 2 (-1)^{M+j}/(2M+1)! (2j+1) prod_{l<M} ((2j+1)^2-(2l+1)^2).
pub fn rational_z_expansion(n: u8, kind: ExpansionKind, order: usize) -> Result<ExactSeries> {
    let np = match kind {
        ExpansionKind::F00 => n,
        ExpansionKind::F11 => n + 1,
    };
    if order < 2 * np as usize + 2 {
        return Err(Error::domain(format!(
            "order {order} too small to show structure of index {np}"
        )));
    }
    let mut coeffs = vec![rat(0, 1); order];
    if np % 2 == 0 {
        let m = (np / 2) as i64;
        let mut fact = Rat::from(num_bigint::BigInt::from(1));
        for i in 2..=2 * m {
            fact *= rat(i, 1);
        }
        for j in 0.. {
            let idx = 2 * j as usize;
            if idx >= order {
                break;
            }
            let mut prod = rat(2, 1) / &fact;
            if (m + j) % 2 == 1 {
                prod = -prod;
            }
            for l in 0..m {
                prod *= rat(4 * (j * j - l * l), 1);
            }
            coeffs[idx] = prod;
        }
    } else {
        let m = ((np - 1) / 2) as i64;
        let mut fact = Rat::from(num_bigint::BigInt::from(1));
        for i in 2..=2 * m + 1 {
            fact *= rat(i, 1);
        }
        for j in 0.. {
            let idx = (2 * j + 1) as usize;
            if idx >= order {
                break;
            }
            let tj = 2 * j + 1;
            let mut prod = rat(2 * tj, 1) / &fact;
            if (m + j) % 2 == 1 {
                prod = -prod;
            }
            for l in 0..m {
                prod *= rat(tj * tj - (2 * l + 1) * (2 * l + 1), 1);
            }
            coeffs[idx as usize] = prod;
        }
    }
    Ok(ExactSeries::new(Variable::Z, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{phi0_transform, series_e, series_k};
    use crate::form_factors;
    use crate::special::{ellip_e, ellip_k};
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// Long-division oracle for the z-expansions:
    /// 2^n (z^n - z^{n+2}) / (1+z^2)^{n+1}.
    fn z_expansion_by_division(np: u8, order: usize) -> ExactSeries {
        let mut num = ExactSeries::zeros(Variable::Z, order);
        let two_n = rat(1 << np as i64, 1);
        if (np as usize) < order {
            *num.coeff_mut(np as usize) = two_n.clone();
        }
        if (np as usize + 2) < order {
            *num.coeff_mut(np as usize + 2) = -two_n;
        }
        let mut den = ExactSeries::zeros(Variable::Z, order);
        *den.coeff_mut(0) = rat(1, 1);
        *den.coeff_mut(2) = rat(1, 1);
        let mut denp = ExactSeries::one(Variable::Z, order);
        for _ in 0..=np {
            denp = denp.mul(&den).unwrap();
        }
        num.mul(&denp.invert().unwrap()).unwrap()
    }

    #[test]
    fn z_expansion_matches_long_division() {
        for np in 1..=6u8 {
            let kind = ExpansionKind::F00;
            let s = rational_z_expansion(np, kind, 24).unwrap();
            let oracle = z_expansion_by_division(np, 24);
            assert_eq!(s, oracle, "index {np}");
        }
        // f11 kind shifts the index by one
        let s = rational_z_expansion(0, ExpansionKind::F11, 16).unwrap();
        let oracle = z_expansion_by_division(1, 16);
        assert_eq!(s, oracle);
    }

    #[test]
    fn z_expansion_spot_values() {
        // 4 z^2 (1-z^2)/(1+z^2)^3: z^2 -> 4, z^4 -> -16
        let s = rational_z_expansion(2, ExpansionKind::F00, 8).unwrap();
        assert_eq!(s.coeff(2), &rat(4, 1));
        assert_eq!(s.coeff(4), &rat(-16, 1));
        // 2 z (1-z^2)/(1+z^2)^2 starts 2z - 6z^3
        let s = rational_z_expansion(0, ExpansionKind::F11, 8).unwrap();
        assert_eq!(s.coeff(1), &rat(2, 1));
        assert_eq!(s.coeff(3), &rat(-6, 1));
        // even expansions have no odd coefficients
        let s = rational_z_expansion(4, ExpansionKind::F00, 20).unwrap();
        for i in (1..20).step_by(2) {
            assert!(s.coeff(i).is_integer() && s.coeff(i) == &rat(0, 1));
        }
    }

    #[test]
    fn phi0_sum_consistent_with_sparse_transform() {
        // S_n evaluated directly equals Phi_0 of the z-expansion
        let q = 0.04;
        for np in 1..=5u8 {
            let s_direct = phi0_sum(np, q, &tol());
            let z = rational_z_expansion(np, ExpansionKind::F00, 40).unwrap();
            let sparse = phi0_transform(&z).unwrap();
            let s_sparse = sparse.eval_f64(q, 1e-30).unwrap();
            assert!(
                (s_direct - s_sparse).abs() < 1e-13 * (1.0 + s_direct.abs()),
                "index {np}: {s_direct} vs {s_sparse}"
            );
        }
    }

    #[test]
    fn f00_n1_is_theta3_squared() {
        for &k in &[0.2, 0.5, 0.8] {
            let f = f00_theta(1, k, &tol()).unwrap();
            let kk = 2.0 / PI * ellip_k(k * k).unwrap();
            assert!((f - kk).abs() < 1e-12, "k = {k}: {f} vs {kk}");
        }
    }

    #[test]
    fn f00_n2_matches_k_k_minus_e() {
        let k: f64 = 0.5;
        let t = k * k;
        let f = f00_theta(2, k, &tol()).unwrap();
        let kk = ellip_k(t).unwrap();
        let ee = ellip_e(t).unwrap();
        let expect = 2.0 / (PI * PI) * kk * (kk - ee);
        assert!((f - expect).abs() < 1e-10, "{f} vs {expect}");
    }

    #[test]
    fn f00_n3_matches_catalogue() {
        let k: f64 = 0.5;
        let t = k * k;
        let f = f00_theta(3, k, &tol()).unwrap();
        let kb = 2.0 / PI * ellip_k(t).unwrap();
        let eb = 2.0 / PI * ellip_e(t).unwrap();
        let expect = (kb - kb * kb * ((t - 2.0) * kb + 3.0 * eb)) / 6.0;
        assert!((f - expect).abs() < 1e-10, "{f} vs {expect}");
    }

    #[test]
    fn rel1_ties_f11_to_f00() {
        // Kb f^{(2n)}_{1,1} = (2n+1) f^{(2n+1)}_{0,0}
        for &k in &[0.3, 0.5, 0.7] {
            let kb = 2.0 / PI * ellip_k(k * k).unwrap();
            for n in 1..=3u8 {
                let lhs = kb * f11_theta(2 * n, k, &tol()).unwrap();
                let rhs = (2 * n + 1) as f64 * f00_theta(2 * n + 1, k, &tol()).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-10,
                    "rel1 n = {n}, k = {k}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn rel2_ties_f11_to_f00() {
        // Kb t^{1/2} f^{(2n+1)}_{1,1} = 2(n+1) f^{(2n+2)}_{0,0}
        for &k in &[0.3, 0.6] {
            let kb = 2.0 / PI * ellip_k(k * k).unwrap();
            for n in 0..=2u8 {
                let lhs = kb * k * f11_theta(2 * n + 1, k, &tol()).unwrap();
                let rhs = 2.0 * (n as f64 + 1.0) * f00_theta(2 * n + 2, k, &tol()).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-10,
                    "rel2 n = {n}, k = {k}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn f11_n1_small_t_expansion() {
        // t^{1/2} f^{(1)}_{1,1} = t/2 + 3 t^2/16 + O(t^3)
        let k: f64 = 0.1;
        let t = k * k;
        let v = k * f11_theta(1, k, &tol()).unwrap();
        let expansion = t / 2.0 + 3.0 * t * t / 16.0;
        assert!((v - expansion).abs() < t * t * t, "{v} vs {expansion}");
        // and the oracle: series of Kb - Eb
        let se = series_k(10).sub(&series_e(10)).unwrap();
        assert_eq!(se.coeff(1), &rat(1, 2));
        assert_eq!(se.coeff(2), &rat(3, 16));
    }

    #[test]
    fn n4_matches_catalogue_closed_forms() {
        let tol = tol();
        for &k in &[0.3, 0.5] {
            let t = k * k;
            let f40 = form_factors::entry(4, 0).unwrap().effective().eval(t).unwrap();
            let v40 = f00_theta(4, k, &tol).unwrap();
            assert!((f40 - v40).abs() < 1e-9, "f4_00 at k = {k}: {v40} vs {f40}");
            let f41 = form_factors::entry(4, 1).unwrap().effective().eval(t).unwrap();
            let v41 = f11_theta(4, k, &tol).unwrap();
            assert!((f41 - v41).abs() < 1e-9, "f4_11 at k = {k}: {v41} vs {f41}");
        }
    }

    #[test]
    fn log_derivative_identity_theta4() {
        // (1/theta4) q d theta4/dq = K(E-K)/pi^2
        for &k in &[0.2, 0.5, 0.8] {
            let q = nome_from_modulus_real(k).unwrap();
            let lhs = theta_q_log_derivative(4, q, &tol()).unwrap();
            let kk = ellip_k(k * k).unwrap();
            let ee = ellip_e(k * k).unwrap();
            let rhs = kk * (ee - kk) / (PI * PI);
            assert!((lhs - rhs).abs() < 1e-10, "k = {k}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn log_derivative_identity_product() {
        // q d/dq log(theta2 theta3 theta4) = K((k^2-2)K + 3E)/pi^2
        for &k in &[0.2, 0.5, 0.8] {
            let q = nome_from_modulus_real(k).unwrap();
            let lhs = theta_q_log_derivative(2, q, &tol()).unwrap()
                + theta_q_log_derivative(3, q, &tol()).unwrap()
                + theta_q_log_derivative(4, q, &tol()).unwrap();
            let kk = ellip_k(k * k).unwrap();
            let ee = ellip_e(k * k).unwrap();
            let rhs = kk * ((k * k - 2.0) * kk + 3.0 * ee) / (PI * PI);
            assert!((lhs - rhs).abs() < 1e-10, "k = {k}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(f00_theta(0, 0.5, &tol()).is_err());
        assert!(f00_theta(9, 0.5, &tol()).is_err());
        assert!(f00_theta(2, 1.0, &tol()).is_err());
        assert!(f00_theta(2, -0.5, &tol()).is_err());
    }
}
