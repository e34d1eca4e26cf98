//! Multi-route evaluation of the 2D Ising model's diagonal form factors,
//! lambda-generalized correlations and (diagonal and leading bulk)
//! susceptibility.
//!
//! The same quantities are computed along independent analytic routes —
//! multidimensional quadrature of the defining integrals, closed forms in the
//! complete elliptic integrals E and K, theta-function/nome series, and exact
//! rational power series — and cross-validated against each other. On top of
//! the evaluators sit a singularity enumerator (unit-circle singularity
//! families and natural-boundary evidence) and a series-to-ODE fitter that
//! recovers Fuchsian annihilators from exact series.
//!
//! Conventions used throughout:
//!
//! * `K(m)`, `E(m)` take the *parameter* `m = k^2`, so `(2/pi) K(m) =
//!   F(1/2,1/2;1;m)`.
//! * The diagonal temperature variable is `t = k^2`; odd sectors expand in
//!   `x = t^{1/2}`.
//! * The nome is `q = exp(-pi K(1-m)/K(m))`.

pub mod config;
pub mod correlations;
pub mod error;
pub mod exact;
pub mod form_factors;
pub mod ode;
pub mod quad;
pub mod report;
pub mod singularities;
pub mod special;
pub mod susceptibility;
pub mod theta_route;

pub mod cli;

pub use config::Tolerances;
pub use error::{Error, Result};
