//! Entrywise positivity preservers in fixed dimension.
//!
//! Exact and floating-point Schur polynomial evaluation, the determinantal
//! identities behind the sharp threshold for `h_c(z) + c' z^M`, generalized
//! Rayleigh quotients of Hadamard powers, and the orbit stratification of the
//! PSD cone.

pub mod cli;
pub mod error;
pub mod hadamard;
pub mod identities;
pub mod matrix;
pub mod partitions;
pub mod psd;
pub mod sampling;
pub mod scalar;
pub mod schur;
pub mod strata;
pub mod threshold;

pub use error::{Error, Result};
