//! Numerical verification of contractive inequalities for Hardy spaces of the
//! unit disc.
//!
//! The crate computes weighted coefficient norms, `H^p`, `L^r` and Bergman
//! norms by adaptive quadrature, hyperbolic measures of level sets of
//! `|f(z)|^2 (1 - |z|^2)`, and Riesz-projection margins, and runs seeded
//! random campaigns that record how close each inequality comes to failing.

// Negated comparisons are used on purpose so that NaN fails every range check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod functions;
pub mod harness;
pub mod levelsets;
pub mod norms;
pub mod quadrature;
pub mod sampling;
pub mod weights;

pub use error::{Error, Result};
pub use functions::{AnalyticPolynomial, CircleFunction, DiscFunction, PullbackFunction, TrigPolynomial};
pub use num_complex::Complex64;
pub use quadrature::QuadratureConfig;
