//! Exact finite-dimensional spaces the generators act on.

mod fock;
mod poly;

use thiserror::Error;

pub use fock::{fock_conjugation, FockSpace};
pub use poly::{apply, Exponent, PolySpace, PullbackOperator};

use crate::matrix::MatrixError;

#[derive(Debug, Error)]
pub enum RealizationError {
    #[error("substitution left the truncated polynomial basis")]
    BasisOverflow,
    #[error("component matrix is {got:?}, field has {expected} components")]
    ComponentMismatch { expected: usize, got: (usize, usize) },
    #[error("coordinate map is not an affine map of R⁴")]
    NotAffine4,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
