//! Truncated power series with exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. Always reduced, denominator > 0 (both
/// guaranteed by the backing implementation).
pub type Rat = BigRational;

/// Small-integer rational constructor.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parse "p/q" or "p".
pub fn rat_from_str(s: &str) -> Result<Rat> {
    s.parse::<Rat>()
        .map_err(|e| Error::domain(format!("bad rational {s:?}: {e}")))
}

/// Lossy conversion to f64 that stays accurate for huge numerators by going
/// through a quotient split.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // fall back: split integer part and remainder
    let trunc = r.trunc();
    let frac = r - &trunc;
    trunc.to_f64().unwrap_or(f64::NAN) + frac.to_f64().unwrap_or(0.0)
}

/// Expansion variable of an [`ExactSeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variable {
    /// t = k^2, the diagonal temperature variable.
    #[serde(rename = "t")]
    T,
    /// x = t^{1/2}; odd diagonal sectors expand here.
    #[serde(rename = "x")]
    X,
    /// auxiliary variable of the nome-side rational expansions.
    #[serde(rename = "z")]
    Z,
    /// quarter-power nome grid q^{1/4}.
    #[serde(rename = "q_quarter")]
    QQuarter,
}

impl std::fmt::Display for Variable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Variable::T => "t",
            Variable::X => "x",
            Variable::Z => "z",
            Variable::QQuarter => "q_quarter",
        };
        f.write_str(s)
    }
}

/// Power series truncated at `order` (exclusive): coefficients of
/// `var^0 .. var^{order-1}`, all exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSeries {
    variable: Variable,
    coeffs: Vec<Rat>,
}

impl ExactSeries {
    pub fn new(variable: Variable, coeffs: Vec<Rat>) -> Self {
        ExactSeries { variable, coeffs }
    }

    pub fn zeros(variable: Variable, order: usize) -> Self {
        ExactSeries {
            variable,
            coeffs: vec![Rat::zero(); order],
        }
    }

    /// Constant 1 truncated at `order`.
    pub fn one(variable: Variable, order: usize) -> Self {
        let mut s = Self::zeros(variable, order);
        if order > 0 {
            s.coeffs[0] = Rat::one();
        }
        s
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    /// Truncation order (exclusive); equals the coefficient count.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn coeff_mut(&mut self, i: usize) -> &mut Rat {
        &mut self.coeffs[i]
    }

    fn check_tag(&self, other: &ExactSeries) -> Result<()> {
        if self.variable != other.variable {
            return Err(Error::TagMismatch {
                expected: self.variable.to_string(),
                got: other.variable.to_string(),
            });
        }
        Ok(())
    }

    /// Truncate (or zero-extend never happens: order can only shrink).
    pub fn truncated(&self, order: usize) -> ExactSeries {
        let n = order.min(self.coeffs.len());
        ExactSeries {
            variable: self.variable,
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    pub fn add(&self, other: &ExactSeries) -> Result<ExactSeries> {
        self.check_tag(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(ExactSeries {
            variable: self.variable,
            coeffs,
        })
    }

    pub fn sub(&self, other: &ExactSeries) -> Result<ExactSeries> {
        self.check_tag(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        Ok(ExactSeries {
            variable: self.variable,
            coeffs,
        })
    }

    /// Cauchy product truncated at the smaller input order.
    pub fn mul(&self, other: &ExactSeries) -> Result<ExactSeries> {
        self.check_tag(other)?;
        let n = self.order().min(other.order());
        let mut coeffs = vec![Rat::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        Ok(ExactSeries {
            variable: self.variable,
            coeffs,
        })
    }

    pub fn scalar_mul(&self, s: &Rat) -> ExactSeries {
        ExactSeries {
            variable: self.variable,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiply by var^by, keeping the truncation order.
    pub fn shift(&self, by: usize) -> ExactSeries {
        let n = self.order();
        let mut coeffs = vec![Rat::zero(); n];
        for i in 0..n.saturating_sub(by) {
            coeffs[i + by] = self.coeffs[i].clone();
        }
        ExactSeries {
            variable: self.variable,
            coeffs,
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<ExactSeries> {
        if self.coeffs.is_empty() || self.coeffs[0].is_zero() {
            return Err(Error::domain(
                "series inverse requires a nonzero constant term".to_string(),
            ));
        }
        let n = self.order();
        let c0inv = self.coeffs[0].recip();
        let mut inv = vec![Rat::zero(); n];
        inv[0] = c0inv.clone();
        for i in 1..n {
            let mut acc = Rat::zero();
            for j in 1..=i {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &inv[i - j];
                }
            }
            inv[i] = -acc * &c0inv;
        }
        Ok(ExactSeries {
            variable: self.variable,
            coeffs: inv,
        })
    }

    /// Term-by-term derivative d/dvar (order drops by one).
    pub fn derivative(&self) -> ExactSeries {
        let n = self.order();
        if n <= 1 {
            return ExactSeries::zeros(self.variable, 0);
        }
        let coeffs = (1..n)
            .map(|i| &self.coeffs[i] * Rat::from(BigInt::from(i)))
            .collect();
        ExactSeries {
            variable: self.variable,
            coeffs,
        }
    }

    /// Reinterpret an even series in x as a series in t = x^2.
    /// Fails if any odd coefficient is nonzero.
    pub fn even_to_t(&self) -> Result<ExactSeries> {
        if self.variable != Variable::X {
            return Err(Error::domain("even_to_t expects an x-series".to_string()));
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 1 && !c.is_zero() {
                return Err(Error::domain(format!(
                    "odd coefficient {i} nonzero; series is not even"
                )));
            }
        }
        let coeffs = self.coeffs.iter().step_by(2).cloned().collect();
        Ok(ExactSeries {
            variable: Variable::T,
            coeffs,
        })
    }

    /// Horner evaluation in f64.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    /// Maximum absolute value of the dropped-tail estimate when evaluating at
    /// |x| < 1: |c_{last}| |x|^order / (1 - |x|).
    pub fn tail_estimate(&self, x: f64) -> f64 {
        if self.coeffs.is_empty() || x.abs() >= 1.0 {
            return f64::INFINITY;
        }
        let last = self
            .coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .map(|c| rat_to_f64(&c.abs()))
            .unwrap_or(0.0);
        last * x.abs().powi(self.order() as i32) / (1.0 - x.abs())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "variable": self.variable.to_string(),
            "order": self.order(),
            "coefficients": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ExactSeries> {
        let var = match v["variable"].as_str() {
            Some("t") => Variable::T,
            Some("x") => Variable::X,
            Some("z") => Variable::Z,
            Some("q_quarter") => Variable::QQuarter,
            other => return Err(Error::domain(format!("bad variable tag {other:?}"))),
        };
        let coeffs = v["coefficients"]
            .as_array()
            .ok_or_else(|| Error::domain("missing coefficients".to_string()))?
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| Error::domain("coefficient must be a string".to_string()))
                    .and_then(rat_from_str)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactSeries::new(var, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(coeffs: &[i64]) -> ExactSeries {
        ExactSeries::new(Variable::X, coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn product_of_conjugates() {
        // (1 + x)(1 - x) = 1 - x^2
        let a = s(&[1, 1, 0, 0]);
        let b = s(&[1, -1, 0, 0]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, s(&[1, 0, -1, 0]));
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_x = s(&[1, -1, 0, 0, 0]);
        let inv = one_minus_x.invert().unwrap();
        assert_eq!(inv, s(&[1, 1, 1, 1, 1]));
        assert!(s(&[0, 1]).invert().is_err());
    }

    #[test]
    fn shift_moves_coefficients() {
        let a = s(&[1, 1, 0, 0]);
        assert_eq!(a.shift(2), s(&[0, 0, 1, 1]));
    }

    #[test]
    fn tag_mismatch_rejected() {
        let a = s(&[1, 2]);
        let b = ExactSeries::new(Variable::T, vec![rat(1, 1), rat(2, 1)]);
        assert!(matches!(a.add(&b), Err(Error::TagMismatch { .. })));
    }

    #[test]
    fn json_round_trip() {
        let a = ExactSeries::new(Variable::T, vec![rat(1, 3), rat(-7, 2), rat(0, 1)]);
        let j = a.to_json();
        let b = ExactSeries::from_json(&j).unwrap();
        assert_eq!(a, b);
        assert_eq!(j["coefficients"][1], "-7/2");
    }

    proptest! {
        #[test]
        fn mul_associative(a in proptest::collection::vec(-20i64..20, 4),
                           b in proptest::collection::vec(-20i64..20, 4),
                           c in proptest::collection::vec(-20i64..20, 4)) {
            let (a, b, c) = (s(&a), s(&b), s(&c));
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn invert_is_inverse(mut coeffs in proptest::collection::vec(-9i64..9, 5)) {
            coeffs[0] = if coeffs[0] == 0 { 1 } else { coeffs[0] };
            let a = s(&coeffs);
            let prod = a.mul(&a.invert().unwrap()).unwrap();
            prop_assert_eq!(prod, ExactSeries::one(Variable::X, 5));
        }
    }
}
