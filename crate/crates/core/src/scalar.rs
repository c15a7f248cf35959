//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type backing the complex matrices (`f32` or `f64`).
///
/// The associated constants carry precision-appropriate default tolerances.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Tolerance for Hermitian / unitary / PSD / trace predicates.
    const PREDICATE_TOL: f64;
    /// Off-diagonal norm at which the Jacobi eigensolver stops.
    const EIGEN_TOL: f64;
    /// Largest accepted 1-norm condition estimate for inversion.
    const MAX_CONDITION: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const PREDICATE_TOL: f64 = 1e-9;
    const EIGEN_TOL: f64 = 1e-12;
    const MAX_CONDITION: f64 = 1e12;
}

impl Scalar for f32 {
    const PREDICATE_TOL: f64 = 1e-4;
    const EIGEN_TOL: f64 = 1e-6;
    const MAX_CONDITION: f64 = 1e6;
}

/// Numeric tolerances used across the crate. All fields are configurable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Hermiticity, unitarity, positivity and trace checks.
    pub predicate: T,
    /// Jacobi convergence threshold on the off-diagonal Frobenius norm.
    pub eigen: T,
    /// Condition-number ceiling for [`crate::linalg::invert`].
    pub max_condition: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            predicate: T::lit(T::PREDICATE_TOL),
            eigen: T::lit(T::EIGEN_TOL),
            max_condition: T::lit(T::MAX_CONDITION),
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    pub fn with_predicate(mut self, tol: T) -> Self {
        self.predicate = tol;
        self
    }
}
