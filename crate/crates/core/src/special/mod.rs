//! Leaf-level numeric kernel: complete elliptic integrals, Gauss
//! hypergeometric 2F1, Jacobi theta functions and the nome/modulus maps.
//!
//! Everything here is pure and stateless; the same inputs give bit-identical
//! outputs.

mod elliptic;
mod gamma;
mod hyp2f1;
mod nome;
mod theta;

pub use elliptic::{agm_complex, ellip_e, ellip_k, ellip_k_complex_modulus, EllipticModulus};
pub use gamma::{digamma, gamma, ln_gamma};
pub use hyp2f1::hyp2f1;
pub use nome::{modulus_from_nome, modulus_from_nome_real, nome_from_modulus, nome_from_modulus_real, Nome};
pub use theta::{theta, theta_null, theta_real, ThetaValue};
