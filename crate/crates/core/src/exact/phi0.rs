//! The Phi_0 operator: sum c_n z^n  |->  sum c_n q^{n^2/4}.
//!
//! The image exponents n^2/4 are quadratically spaced, so the result is kept
//! sparse; dense evaluation happens only at float time.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::series::{ExactSeries, Rat, Variable};

/// Sparse series sum_j c_{n_j} q^{n_j^2/4} with exact coefficients; the
/// stored key is the original z-power n_j (exponent quarters = n_j^2).
#[derive(Debug, Clone, PartialEq)]
pub struct QSeriesSparse {
    terms: Vec<(u64, Rat)>,
}

impl QSeriesSparse {
    pub fn terms(&self) -> &[(u64, Rat)] {
        &self.terms
    }

    /// Exponent of q for stored key n, in quarter units: n^2.
    pub fn exponent_quarters(n: u64) -> u64 {
        n * n
    }

    /// Float evaluation at real q in [0, 1); terms with q^{n^2/4} below
    /// `tail` are dropped (exponents grow monotonically).
    pub fn eval_f64(&self, q: f64, tail: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::domain(format!(
                "q-series evaluation requires 0 <= q < 1, got {q}"
            )));
        }
        let mut sum = 0.0;
        for (n, c) in &self.terms {
            let qp = q.powf((*n * *n) as f64 / 4.0);
            if qp < tail && *n > 0 {
                break;
            }
            sum += crate::exact::rat_to_f64(c) * qp;
        }
        Ok(sum)
    }
}

/// Apply Phi_0 to a z-series: the coefficient of z^n is re-attached to
/// q^{n^2/4}, exactly.
pub fn phi0_transform(s: &ExactSeries) -> Result<QSeriesSparse> {
    if s.variable() != Variable::Z {
        return Err(Error::TagMismatch {
            expected: Variable::Z.to_string(),
            got: s.variable().to_string(),
        });
    }
    let terms = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n as u64, c.clone()))
        .collect();
    Ok(QSeriesSparse { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::series::rat;

    #[test]
    fn definition_on_short_series() {
        let s = ExactSeries::new(Variable::Z, vec![rat(3, 1), rat(5, 1), rat(7, 1)]);
        let q = phi0_transform(&s).unwrap();
        assert_eq!(
            q.terms(),
            &[(0, rat(3, 1)), (1, rat(5, 1)), (2, rat(7, 1))]
        );
        // evaluates to 3 + 5 q^{1/4} + 7 q
        let v = q.eval_f64(0.0625, 1e-30).unwrap();
        assert!((v - (3.0 + 5.0 * 0.5 + 7.0 * 0.0625)).abs() < 1e-14);
    }

    #[test]
    fn zero_series_maps_to_zero() {
        let s = ExactSeries::zeros(Variable::Z, 6);
        let q = phi0_transform(&s).unwrap();
        assert!(q.terms().is_empty());
        assert_eq!(q.eval_f64(0.3, 1e-30).unwrap(), 0.0);
    }

    #[test]
    fn rejects_wrong_variable() {
        let s = ExactSeries::zeros(Variable::T, 3);
        assert!(phi0_transform(&s).is_err());
    }
}
