//! Exact-arithmetic operator calculus on weight blocks of the polynomial
//! space in k*n variables: the rational/trigonometric KZ and dynamical
//! differential operators, their difference counterparts built from B-series
//! and rational R-matrices, and zero-residual verification of the
//! commutativity and duality identities relating them across the two
//! commuting gl actions.
//!
//! Everything is computed over arbitrary-precision rationals; identities are
//! checked as exact matrix equalities at deterministically sampled
//! non-singular parameter points.

pub mod action;
pub mod diffop;
pub mod error;
pub mod exec;
pub mod matrix;
pub mod qop;
pub mod rat;
pub mod report;
pub mod sample;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use matrix::{lagrange_projectors, mat_inverse, QMatrix};
pub use rat::Rat;
pub use sample::{sample_point, sample_t_pair, ParamPoint};
pub use weights::{block_dimension, enumerate_partitions, enumerate_tables, weyl_dimension};
