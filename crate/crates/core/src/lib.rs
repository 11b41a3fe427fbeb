//! Quantitative Kronecker approximation with rigorous arithmetic.
//!
//! The crate computes the explicit constants of the theorem, checks its
//! Diophantine hypothesis by complete enumeration of an integer box, finds
//! witnesses `t` with `‖λ_j t − α_j‖ ≤ ε_j` inside a window of the
//! guaranteed length, and exercises the transference machinery behind it.

pub mod bounds;
mod enumerate;
pub mod error;
pub mod forms;
pub mod hypothesis;
pub mod precision;
pub mod real;
pub mod scalar;
pub mod transference;
pub mod witness;

pub use error::{Error, Result};
pub use forms::{IntVector, LinearFormSystem};
pub use precision::Precision;
pub use real::Real;
pub use scalar::Scalar;
