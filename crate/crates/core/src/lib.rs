//! Implementability of inverse noise maps.
//!
//! Builds Choi operators for noise channels and their (generally non-physical)
//! inverses, evaluates implementability and entanglement measures, and runs
//! reproducible sweeps over sampled input states.
//!
//! Core types are generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix `f64`.

pub mod channel;
mod error;
pub mod experiment;
pub mod linalg;
pub mod measures;
pub mod noise;
pub mod sampling;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{Scalar, Tolerances};

pub type Matrix = linalg::ComplexMatrix<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Choi = channel::ChoiOperator<f64>;
pub type Choi32 = channel::ChoiOperator<f32>;
pub type State = channel::StateOperator<f64>;
pub type State32 = channel::StateOperator<f32>;
