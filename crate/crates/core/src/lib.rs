//! Derive Heisenberg commutation relations from parametrized group
//! representations and verify them on exact finite-dimensional realizations.

pub mod autodiff;
pub mod catalog;
pub mod cli;
pub mod dsl;
pub mod expm;
pub mod matrix;
pub mod realization;
pub mod scalar;
pub mod verify;
