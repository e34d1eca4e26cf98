//! Deterministic tensor-product quadrature on [0,1]^d, d <= 4, with
//! endpoint-singularity-removing substitutions.
//!
//! The default scheme is per-axis Gauss-Legendre after the substitution
//! x = sin^2(pi s / 2), which turns x^{+-1/2}, (1-x)^{+-1/2} endpoint factors
//! into smooth integrands; tanh-sinh is available as a fallback. Summation
//! order is fixed (per-slab Kahan, slabs combined in index order), so results
//! are bit-identical across runs and across thread counts.

mod gauss;
mod tanh_sinh;

pub use gauss::gauss_legendre_01;

use rayon::prelude::*;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Endpoint substitution applied independently on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substitution {
    /// No substitution; integrand must be smooth up to the endpoints.
    None,
    /// x = sin^2(pi s/2); removes half-integer endpoint exponents >= -1/2.
    Trig,
    /// Double-exponential tanh-sinh nodes; handles any exponent > -1.
    TanhSinh,
}

/// Per-axis node budget: the full tensor grid stays affordable.
pub fn max_nodes_per_axis(dim: usize) -> usize {
    match dim {
        1 => 1 << 14,
        2 => 512,
        3 => 160,
        _ => 64,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub dim: usize,
    pub nodes_per_axis: usize,
    pub substitution: Substitution,
    pub tol: f64,
}

impl QuadratureSpec {
    pub fn new(dim: usize, nodes_per_axis: usize, substitution: Substitution, tol: f64) -> Self {
        QuadratureSpec {
            dim,
            nodes_per_axis,
            substitution,
            tol,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > 4 {
            return Err(Error::domain(format!("dim must be 1..=4, got {}", self.dim)));
        }
        if self.nodes_per_axis < 8 {
            return Err(Error::domain(format!(
                "nodes_per_axis must be >= 8, got {}",
                self.nodes_per_axis
            )));
        }
        if self.nodes_per_axis > max_nodes_per_axis(self.dim) {
            return Err(Error::BudgetExhausted(format!(
                "{} nodes/axis exceeds the {}d budget of {}",
                self.nodes_per_axis,
                self.dim,
                max_nodes_per_axis(self.dim)
            )));
        }
        Ok(())
    }
}

/// Integrand on (0,1)^dim with declared endpoint exponents per axis:
/// near 0 the integrand behaves like x^{a}, near 1 like (1-x)^{b}.
#[derive(Clone)]
pub struct IntegrandHandle {
    pub dim: usize,
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    /// (exponent at 0, exponent at 1) per axis.
    pub endpoint_exponents: Vec<(f64, f64)>,
}

impl IntegrandHandle {
    pub fn new(
        dim: usize,
        endpoint_exponents: Vec<(f64, f64)>,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if endpoint_exponents.len() != dim {
            return Err(Error::domain(
                "endpoint exponent list must match the dimension".to_string(),
            ));
        }
        for &(a, b) in &endpoint_exponents {
            if a <= -1.0 || b <= -1.0 {
                return Err(Error::domain(format!(
                    "declared endpoint exponent ({a}, {b}) is not integrable"
                )));
            }
        }
        Ok(IntegrandHandle {
            dim,
            f: Arc::new(f),
            endpoint_exponents,
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Quadrature outcome; `converged` is false when the error estimate exceeds
/// the requested tolerance (flagged, never silent).
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub nodes_per_axis: usize,
}

struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    fn new() -> Self {
        Kahan { s: 0.0, c: 0.0 }
    }
    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
}

/// Transformed nodes and weights on (0,1) for one axis.
fn axis_rule(substitution: Substitution, n: usize) -> (Vec<f64>, Vec<f64>) {
    match substitution {
        Substitution::None => {
            let r = gauss_legendre_01(n);
            (r.0.clone(), r.1.clone())
        }
        Substitution::Trig => {
            let r = gauss_legendre_01(n);
            let mut xs = Vec::with_capacity(n);
            let mut ws = Vec::with_capacity(n);
            for (&s, &w) in r.0.iter().zip(&r.1) {
                let half = 0.5 * std::f64::consts::PI * s;
                xs.push(half.sin() * half.sin());
                ws.push(w * 0.5 * std::f64::consts::PI * (2.0 * half).sin());
            }
            (xs, ws)
        }
        Substitution::TanhSinh => tanh_sinh::rule_01(n),
    }
}

fn check_consistency(f: &IntegrandHandle, spec: &QuadratureSpec) -> Result<()> {
    for &(a, b) in &f.endpoint_exponents {
        let ok = match spec.substitution {
            Substitution::None => a >= 0.0 && b >= 0.0,
            Substitution::Trig => a >= -0.5 && b >= -0.5,
            Substitution::TanhSinh => a > -1.0 && b > -1.0,
        };
        if !ok {
            return Err(Error::domain(format!(
                "endpoint exponents ({a}, {b}) inconsistent with {:?} substitution",
                spec.substitution
            )));
        }
    }
    Ok(())
}

/// Plain tensor-product pass at a fixed node count.
fn tensor_pass(f: &IntegrandHandle, substitution: Substitution, n: usize) -> f64 {
    let (xs, ws) = axis_rule(substitution, n);
    let n = xs.len(); // tanh-sinh rules round to a symmetric count
    let dim = f.dim;
    if dim == 1 {
        let mut acc = Kahan::new();
        let mut pt = [0.0];
        for i in 0..n {
            pt[0] = xs[i];
            acc.add(ws[i] * f.eval(&pt));
        }
        return acc.s;
    }
    // parallel over the outermost axis; each slab is summed sequentially and
    // the slab results are combined in index order
    let slabs: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i0| {
            let mut acc = Kahan::new();
            let mut idx = vec![0usize; dim - 1];
            let mut pt = vec![0.0f64; dim];
            pt[0] = xs[i0];
            loop {
                let mut w = ws[i0];
                for (d, &j) in idx.iter().enumerate() {
                    pt[d + 1] = xs[j];
                    w *= ws[j];
                }
                acc.add(w * f.eval(&pt));
                // increment multi-index
                let mut d = dim - 1;
                loop {
                    if d == 0 {
                        return acc.s;
                    }
                    d -= 1;
                    idx[d] += 1;
                    if idx[d] < n {
                        break;
                    }
                    idx[d] = 0;
                }
            }
        })
        .collect();
    let mut total = Kahan::new();
    for s in slabs {
        total.add(s);
    }
    total.s
}

/// Integrate with an error estimate obtained by halving the node count.
pub fn integrate(f: &IntegrandHandle, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    if f.dim != spec.dim {
        return Err(Error::domain(format!(
            "integrand dimension {} does not match spec dimension {}",
            f.dim, spec.dim
        )));
    }
    check_consistency(f, spec)?;
    let n = spec.nodes_per_axis;
    let coarse = tensor_pass(f, spec.substitution, (n / 2).max(8));
    let fine = tensor_pass(f, spec.substitution, n);
    let err = (fine - coarse).abs();
    Ok(QuadResult {
        value: fine,
        error_estimate: err,
        converged: err <= spec.tol * (1.0 + fine.abs()),
    nodes_per_axis: n,
    })
}

/// Refine by doubling the node count until two successive estimates differ
/// by less than `target_tol`, or the dimension budget runs out (flagged).
pub fn refine_until(
    f: &IntegrandHandle,
    spec: &QuadratureSpec,
    target_tol: f64,
) -> Result<QuadResult> {
    spec.validate()?;
    check_consistency(f, spec)?;
    let cap = max_nodes_per_axis(spec.dim);
    let mut n = spec.nodes_per_axis.max(8);
    let mut prev = tensor_pass(f, spec.substitution, n);
    loop {
        let n2 = n * 2;
        if n2 > cap {
            return Ok(QuadResult {
                value: prev,
                error_estimate: f64::INFINITY,
                converged: false,
                nodes_per_axis: n,
            });
        }
        let cur = tensor_pass(f, spec.substitution, n2);
        let err = (cur - prev).abs();
        if err <= target_tol * (1.0 + cur.abs()) {
            return Ok(QuadResult {
                value: cur,
                error_estimate: err,
                converged: true,
                nodes_per_axis: n2,
            });
        }
        n = n2;
        prev = cur;
    }
}
