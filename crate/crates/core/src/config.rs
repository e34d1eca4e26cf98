//! Centralized numeric tolerance constants.

/// Tolerances shared by the floating-point kernels. All float routines pull
/// their cutoffs from here so there is a single place to tighten or relax
/// them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative convergence threshold for AGM iterations.
    pub agm: f64,
    /// Relative tail threshold for hypergeometric and theta series.
    pub series: f64,
    /// Absolute tail cutoff for sparse q-series: terms with |q|^e below this
    /// are dropped.
    pub q_tail: f64,
    /// Theta series and nome products refuse |q| > 1 - q_margin instead of
    /// silently losing precision.
    pub q_margin: f64,
    /// Default quadrature target tolerance.
    pub quad: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            agm: 1e-15,
            series: 1e-16,
            q_tail: 1e-30,
            q_margin: 1e-6,
            quad: 1e-10,
        }
    }
}

impl Tolerances {
    /// Largest |q| accepted by theta/nome series.
    pub fn q_max(&self) -> f64 {
        1.0 - self.q_margin
    }
}
