//! Complete elliptic integrals via the arithmetic-geometric mean.
//!
//! Convention: `ellip_k`/`ellip_e` take the parameter `m = k^2`, so that
//! `(2/pi) * ellip_k(m) = F(1/2,1/2;1;m)`. The complex entry point
//! `ellip_k_complex_modulus` takes the modulus `k` itself, which is what the
//! nome-curve tracking needs.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_AGM_ITER: usize = 80;
const AGM_EPS: f64 = 1e-15;

/// Complete elliptic integral of the first kind, parameter form.
///
/// K(m) = integral_0^{pi/2} (1 - m sin^2 h)^{-1/2} dh = pi / (2 agm(1, sqrt(1-m))).
pub fn ellip_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::domain(format!(
            "ellip_k requires 0 <= m < 1 (logarithmic singularity at m = 1), got {m}"
        )));
    }
    if m == 0.0 {
        return Ok(PI / 2.0);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..MAX_AGM_ITER {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= AGM_EPS * an {
            return Ok(PI / (2.0 * an));
        }
        a = an;
        b = bn;
    }
    Ok(PI / (2.0 * a))
}

/// Complete elliptic integral of the second kind, parameter form.
///
/// Uses the AGM with the sum-of-c_n^2 correction:
/// E(m) = K(m) * (1 - sum_{n>=0} 2^{n-1} c_n^2), c_n = (a_n - b_n)/2, c_0 = sqrt(m).
pub fn ellip_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::domain(format!(
            "ellip_e requires 0 <= m <= 1, got {m}"
        )));
    }
    if m == 0.0 {
        return Ok(PI / 2.0);
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut sum = m; // c_0^2
    let mut pow2 = 1.0;
    for _ in 0..MAX_AGM_ITER {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        pow2 *= 2.0;
        sum += pow2 * c * c;
        if c.abs() <= AGM_EPS * an {
            let k = PI / (2.0 * an);
            return Ok(k * (1.0 - sum / 2.0));
        }
        a = an;
        b = bn;
    }
    let k = PI / (2.0 * a);
    Ok(k * (1.0 - sum / 2.0))
}

/// Principal square root: nonnegative real part, ties resolved towards
/// nonnegative imaginary part. `Complex64::sqrt` already implements this
/// branch (arg/2 in (-pi/2, pi/2]).
fn principal_sqrt(z: Complex64) -> Complex64 {
    z.sqrt()
}

/// Complex AGM with principal square roots at every step.
pub fn agm_complex(a0: Complex64, b0: Complex64) -> Complex64 {
    let mut a = a0;
    let mut b = b0;
    for _ in 0..MAX_AGM_ITER {
        let an = 0.5 * (a + b);
        let bn = principal_sqrt(a * b);
        if (an - bn).norm() <= AGM_EPS * an.norm() {
            return an;
        }
        a = an;
        b = bn;
    }
    0.5 * (a + b)
}

/// K as a function of the complex *modulus* k:
/// K(k) = pi / (2 agm(1, sqrt(1 - k^2))).
pub fn ellip_k_complex_modulus(k: Complex64) -> Complex64 {
    let kprime = principal_sqrt(Complex64::new(1.0, 0.0) - k * k);
    let one = Complex64::new(1.0, 0.0);
    let g = agm_complex(one, kprime);
    Complex64::new(PI / 2.0, 0.0) / g
}

/// Elliptic modulus `k` together with the derived parameter `m = k^2` and the
/// complementary modulus `k' = (1 - k^2)^{1/2}` (principal branch).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    pub k: Complex64,
    pub m: Complex64,
    pub kprime: Complex64,
}

impl EllipticModulus {
    /// Build from a complex modulus with principal branches.
    pub fn from_k(k: Complex64) -> Self {
        let m = k * k;
        let kprime = principal_sqrt(Complex64::new(1.0, 0.0) - m);
        EllipticModulus { k, m, kprime }
    }

    /// Physical real branch: k in (0,1) so m and k' are in (0,1) too.
    pub fn from_k_real(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::domain(format!(
                "real modulus must satisfy 0 <= k <= 1, got {k}"
            )));
        }
        Ok(Self::from_k(Complex64::new(k, 0.0)))
    }

    /// Build from the parameter m = k^2 (real branch).
    pub fn from_parameter(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::domain(format!(
                "parameter must satisfy 0 <= m <= 1, got {m}"
            )));
        }
        Self::from_k_real(m.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: midpoint rule on the defining integral. The
    /// integrand is smooth and periodic-symmetric on [0, pi/2], so the
    /// midpoint rule converges fast enough for 12+ digits at these m.
    fn k_oracle(m: f64) -> f64 {
        let n = 200_000;
        let h = (PI / 2.0) / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let th = (i as f64 + 0.5) * h;
            s += 1.0 / (1.0 - m * th.sin().powi(2)).sqrt();
        }
        s * h
    }

    fn e_oracle(m: f64) -> f64 {
        let n = 200_000;
        let h = (PI / 2.0) / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let th = (i as f64 + 0.5) * h;
            s += (1.0 - m * th.sin().powi(2)).sqrt();
        }
        s * h
    }

    #[test]
    fn k_special_values() {
        assert_eq!(ellip_k(0.0).unwrap(), PI / 2.0);
        // Frozen from the defining-integral oracle.
        assert!((ellip_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
        assert!((ellip_k(0.5).unwrap() - k_oracle(0.5)).abs() < 1e-11);
        assert!(ellip_k(1.0).is_err());
        assert!(ellip_k(-0.1).is_err());
    }

    #[test]
    fn e_special_values() {
        assert_eq!(ellip_e(0.0).unwrap(), PI / 2.0);
        assert_eq!(ellip_e(1.0).unwrap(), 1.0);
        assert!((ellip_e(0.5).unwrap() - 1.350_643_881_047_675_5).abs() < 1e-14);
        assert!((ellip_e(0.5).unwrap() - e_oracle(0.5)).abs() < 1e-11);
        assert!(ellip_e(1.1).is_err());
        assert!(ellip_e(-0.1).is_err());
    }

    #[test]
    fn legendre_relation() {
        // E K' + E' K - K K' = pi/2
        for &m in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let k = ellip_k(m).unwrap();
            let e = ellip_e(m).unwrap();
            let kp = ellip_k(1.0 - m).unwrap();
            let ep = ellip_e(1.0 - m).unwrap();
            assert!((e * kp + ep * k - k * kp - PI / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_identities() {
        // dK/dk = (E - k'^2 K)/(k k'^2), dE/dk = (E - K)/k, with K, E at m = k^2.
        for i in 1..=10 {
            let k = 0.05 + 0.09 * i as f64;
            let h = 1e-6;
            let f = |k: f64| ellip_k(k * k).unwrap();
            let g = |k: f64| ellip_e(k * k).unwrap();
            let dk = (f(k + h) - f(k - h)) / (2.0 * h);
            let de = (g(k + h) - g(k - h)) / (2.0 * h);
            let kk = f(k);
            let ee = g(k);
            let kp2 = 1.0 - k * k;
            assert!(
                (dk - (ee - kp2 * kk) / (k * kp2)).abs() < 1e-8,
                "dK/dk mismatch at k = {k}"
            );
            assert!((de - (ee - kk) / k).abs() < 1e-8, "dE/dk mismatch at k = {k}");
        }
    }

    #[test]
    fn complex_modulus_matches_real() {
        for &k in &[0.1, 0.5, 0.9] {
            let kc = ellip_k_complex_modulus(Complex64::new(k, 0.0));
            assert!((kc.re - ellip_k(k * k).unwrap()).abs() < 1e-13);
            assert!(kc.im.abs() < 1e-15);
        }
    }

    #[test]
    fn modulus_invariant() {
        let em = EllipticModulus::from_k_real(0.6).unwrap();
        let one = em.k * em.k + em.kprime * em.kprime;
        assert!((one.re - 1.0).abs() < 1e-15 && one.im.abs() < 1e-15);
        assert!(EllipticModulus::from_k_real(1.5).is_err());
    }
}
