//! Exact half-integer beta moments.
//!
//! The diagonal integrands only ever involve per-variable factors
//! x^{p +- 1/2} (1-x)^{+- 1/2}, whose normalized moments
//! (1/pi) int_0^1 x^{a/2} (1-x)^{b/2} dx are rational exactly when a and b
//! are both odd (so both exponents are genuine half-integers).

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::series::Rat;

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Gamma(u + 1/2)/sqrt(pi) = (2u)! / (4^u u!) for integer u >= 0.
fn gamma_half_ratio(u: u64) -> Rat {
    let num = factorial(2 * u);
    let den = factorial(u) * BigInt::from(4u8).pow(u as u32);
    Rat::new(num, den)
}

/// (1/pi) * int_0^1 x^{a2/2} (1-x)^{b2/2} dx for odd a2, b2 >= -1,
/// i.e. (1/pi) * B(a2/2 + 1, b2/2 + 1) as an exact rational.
pub fn half_moment(a2: i64, b2: i64) -> Result<Rat> {
    if a2 < -1 || b2 < -1 {
        return Err(Error::domain(format!(
            "non-integrable endpoint exponent: x^{}/2 (1-x)^{}/2",
            a2, b2
        )));
    }
    if a2 % 2 == 0 || b2 % 2 == 0 {
        return Err(Error::unsupported(format!(
            "moment with exponents ({a2}/2, {b2}/2) is not pi times a rational"
        )));
    }
    // a2 = 2u - 1  =>  B-argument u + 1/2 with u >= 0
    let u = ((a2 + 1) / 2) as u64;
    let v = ((b2 + 1) / 2) as u64;
    // B(u+1/2, v+1/2) = Gamma(u+1/2) Gamma(v+1/2) / (u+v)!
    let num = gamma_half_ratio(u) * gamma_half_ratio(v);
    Ok(num / Rat::from(factorial(u + v)))
}

/// (1/pi) * int_0^1 x^{p + num_sign/2} (1-x)^{den_sign/2} dx, exact.
///
/// `num_sign`, `den_sign` are +-1 and select the half-integer exponent on x
/// and on (1-x) respectively.
pub fn beta_moment(p: u32, num_sign: i8, den_sign: i8) -> Result<Rat> {
    if num_sign.abs() != 1 || den_sign.abs() != 1 {
        return Err(Error::domain("signs must be +-1".to_string()));
    }
    half_moment(2 * p as i64 + num_sign as i64, den_sign as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::series::rat;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    #[test]
    fn arcsine_weight_normalization() {
        // B(1/2,1/2) = pi
        assert_eq!(beta_moment(0, -1, -1).unwrap(), rat(1, 1));
    }

    #[test]
    fn central_binomial_identity() {
        // (1/pi) int x^{p-1/2}(1-x)^{-1/2} = C(2p,p)/4^p, checked exactly
        for p in 0..=20u32 {
            let m = beta_moment(p, -1, -1).unwrap();
            let mut binom = BigInt::from(1);
            for i in 0..p as u64 {
                binom = binom * BigInt::from(2 * p as u64 - i) / BigInt::from(i + 1);
            }
            let expect = Rat::new(binom, BigInt::from(4u8).pow(p));
            assert_eq!(m, expect, "p = {p}");
        }
        assert_eq!(beta_moment(2, -1, -1).unwrap(), rat(3, 8));
    }

    #[test]
    fn semicircle_weight() {
        // B(3/2,3/2) = pi/8
        assert_eq!(beta_moment(0, 1, 1).unwrap(), rat(1, 8));
    }

    #[test]
    fn quadrature_cross_check() {
        // midpoint check of (1/pi) int x^{3/2} (1-x)^{-1/2} after the
        // substitution x = sin^2(pi s/2), which removes both endpoints
        let m = half_moment(3, -1).unwrap();
        let n = 200_000;
        let mut s = 0.0;
        for i in 0..n {
            let u = (i as f64 + 0.5) / n as f64;
            let half = 0.5 * std::f64::consts::PI * u;
            let x = half.sin() * half.sin();
            let jac = 0.5 * std::f64::consts::PI * (2.0 * half).sin();
            s += x.powf(1.5) * (1.0 - x).powf(-0.5) * jac;
        }
        s /= n as f64 * std::f64::consts::PI;
        assert!((m.to_f64().unwrap() - s).abs() < 1e-10, "{m} vs {s}");
    }

    #[test]
    fn unsupported_integer_exponents() {
        assert!(half_moment(0, -1).is_err());
        assert!(half_moment(-1, 2).is_err());
        assert!(half_moment(-3, -1).is_err());
    }
}
