//! Log-majorization toolkit: spectral calculus for complex matrices, compound
//! matrices, majorization predicates and gauge functions, the `β_θ` measures,
//! and verifiers for multivariate trace and norm inequalities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compound;
pub mod error;
pub mod ineq;
pub mod major;
pub mod measure;
pub mod random;
pub mod spectral;

pub use error::{Error, Result};
