//! Nome <-> modulus maps.
//!
//! q = exp(-pi K(k')/K(k)) = exp(i pi tau) with tau = i K(k')/K(k); the
//! inverse is the product form k = 4 q^{1/2} prod_n [(1+q^{2n})/(1+q^{2n-1})]^4,
//! cross-checked against k = theta_2^2/theta_3^2.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::special::elliptic::{ellip_k, ellip_k_complex_modulus};
use crate::special::theta::theta;

/// Nome value plus the tau ratio it came from. `boundary` marks the exact
/// k = 1 limit; `branch_flagged` marks complex inputs evaluated on principal
/// branches, where a different analytic continuation may be intended.
#[derive(Debug, Clone, Copy)]
pub struct Nome {
    pub q: Complex64,
    pub tau_ratio: Complex64,
    pub boundary: bool,
    pub branch_flagged: bool,
}

/// q(k) for a complex modulus, principal branches throughout.
pub fn nome_from_modulus(k: Complex64) -> Result<Nome> {
    if k.im == 0.0 && k.re == 1.0 {
        // K(k) diverges, K(k') = pi/2: q -> 1 exactly.
        return Ok(Nome {
            q: Complex64::new(1.0, 0.0),
            tau_ratio: Complex64::new(0.0, 0.0),
            boundary: true,
            branch_flagged: false,
        });
    }
    if k.im == 0.0 && (0.0..1.0).contains(&k.re) {
        let q = nome_from_modulus_real(k.re)?;
        let m = k.re * k.re;
        let tau = Complex64::new(0.0, ellip_k(1.0 - m)? / ellip_k(m)?);
        return Ok(Nome {
            q: Complex64::new(q, 0.0),
            tau_ratio: tau,
            boundary: false,
            branch_flagged: false,
        });
    }
    let kk = ellip_k_complex_modulus(k);
    if kk.norm() == 0.0 {
        return Err(Error::domain(format!("K(k) vanished at k = {k}")));
    }
    let kprime = (Complex64::new(1.0, 0.0) - k * k).sqrt();
    let kkp = ellip_k_complex_modulus(kprime);
    let tau = Complex64::i() * kkp / kk;
    let q = (Complex64::i() * std::f64::consts::PI * tau).exp();
    Ok(Nome {
        q,
        tau_ratio: tau,
        boundary: false,
        branch_flagged: true,
    })
}

/// q(k) on the physical branch k in [0, 1): real, q in [0, 1).
pub fn nome_from_modulus_real(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain(format!(
            "real nome map requires 0 <= k < 1, got {k}"
        )));
    }
    if k == 0.0 {
        return Ok(0.0);
    }
    let m = k * k;
    let kk = ellip_k(m)?;
    let kkp = ellip_k(1.0 - m)?;
    Ok((-std::f64::consts::PI * kkp / kk).exp())
}

/// Real-argument wrapper for [`modulus_from_nome`].
pub fn modulus_from_nome_real(q: f64, tol: &Tolerances) -> Result<f64> {
    Ok(modulus_from_nome(Complex64::new(q, 0.0), tol)?.re)
}

/// k(q) from the nome product form, cross-checked against theta_2^2/theta_3^2.
pub fn modulus_from_nome(q: Complex64, tol: &Tolerances) -> Result<Complex64> {
    if q.norm() > tol.q_max() {
        return Err(Error::domain(format!(
            "modulus_from_nome requires |q| <= {}, got {}",
            tol.q_max(),
            q.norm()
        )));
    }
    if q.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    let mut q2n = Complex64::new(1.0, 0.0); // q^{2n}
    let qn = q.norm();
    for n in 1..100_000 {
        q2n *= q * q;
        let q2nm1 = q2n / q;
        let ratio = (Complex64::new(1.0, 0.0) + q2n) / (Complex64::new(1.0, 0.0) + q2nm1);
        prod *= ratio * ratio * ratio * ratio;
        if qn.powi(2 * n - 1) < tol.q_tail {
            break;
        }
    }
    let k_prod = 4.0 * q.sqrt() * prod;

    let zero = Complex64::new(0.0, 0.0);
    let t2 = theta(2, zero, q, tol)?.value;
    let t3 = theta(3, zero, q, tol)?.value;
    let k_theta = (t2 * t2) / (t3 * t3);
    if (k_prod - k_theta).norm() > 1e-10 * (1.0 + k_prod.norm()) {
        return Err(Error::precision(format!(
            "nome product form and theta ratio disagree: {k_prod} vs {k_theta}"
        )));
    }
    Ok(k_prod)
}
