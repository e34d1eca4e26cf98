//! Double-exponential (tanh-sinh) nodes on (0, 1).

use std::f64::consts::PI;

/// Symmetric tanh-sinh rule with (about) n nodes on (0, 1):
/// x(u) = 1/(1 + exp(-pi sinh u)), w(u) = h (pi/4) cosh u / cosh^2((pi/2) sinh u).
pub fn rule_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    const U_MAX: f64 = 3.4;
    let half = (n.max(9) - 1) / 2;
    let h = U_MAX / half as f64;
    let mut xs = Vec::with_capacity(2 * half + 1);
    let mut ws = Vec::with_capacity(2 * half + 1);
    for j in -(half as i64)..=half as i64 {
        let u = j as f64 * h;
        let s = PI / 2.0 * u.sinh();
        let x = 1.0 / (1.0 + (-2.0 * s).exp());
        let w = h * (PI / 2.0) * u.cosh() / (s.cosh() * s.cosh()) / 2.0;
        if w.is_finite() && w > 0.0 {
            xs.push(x);
            ws.push(w);
        }
    }
    (xs, ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_constant() {
        let (xs, ws) = rule_01(101);
        let s: f64 = xs.iter().zip(&ws).map(|(_, w)| w).sum();
        assert!((s - 1.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn integrates_log_singularity() {
        // int_0^1 ln(x) dx = -1
        let (xs, ws) = rule_01(101);
        let s: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.ln()).sum();
        assert!((s + 1.0).abs() < 1e-12, "{s}");
    }
}
