//! Generalized Riesz systems and J-orthonormal sequences in Krein spaces:
//! construction of biorthogonal pairs φₙ = e^{Q/2}eₙ, ψₙ = e^{-Q/2}eₙ and
//! numerical verification of the identities they satisfy.

// `!(x > t)` is used on purpose so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod catalog;
pub mod csymmetry;
pub mod defaults;
mod error;
pub mod function;
pub mod grs;
pub mod hamiltonian;
pub mod krein;
pub mod metric;
pub mod report;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
