//! Extended eigenvalues `Σ(T) = {λ : XT = λTX for some X ≠ 0}`.
//!
//! Three operator classes are covered:
//!
//! * bilateral weighted shifts `T e_n = w_n e_{n-1}`, decided exactly from the
//!   tail behaviour of a symbolic weight family ([`weights`], [`shift`]);
//! * finite matrices, decided by the eigenvalue-ratio rule and cross-checked
//!   against the null space of the map `X ↦ XT − λTX` ([`matrix`]);
//! * discretisations of the Volterra operator, where only witness residuals
//!   and their convergence can be measured ([`volterra`]).
//!
//! The crate is `no_std` and only needs `alloc`. IO, JSON and the command
//! line live in the `xeig` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod lambda;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod shift;
pub mod volterra;
pub mod weights;

pub use error::{Error, Result};
pub use lambda::Lambda;
pub use linalg::{CMatrix, Matrix, QMatrix};
pub use matrix::{DenseOperator, MatrixSigmaSet, SigmaKind};
pub use scalar::ExactScalar;
pub use weights::{GrowthDescriptor, TailClass, WeightFamily};
