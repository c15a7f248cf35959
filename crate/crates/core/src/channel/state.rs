use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Factorization};
use crate::scalar::Scalar;

/// Hermitian, unit-trace operator on a factored system. `physical` records
/// whether it is also positive semidefinite; non-physical inputs are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct StateOperator<T> {
    matrix: ComplexMatrix<T>,
    factorization: Factorization,
    physical: bool,
}

impl<T: Scalar> StateOperator<T> {
    /// Validates hermiticity and unit trace within `tol`; the physical flag is
    /// λ_min ≥ −tol. Stored data is never clamped.
    pub fn new(matrix: ComplexMatrix<T>, factorization: Factorization, tol: T) -> Result<Self> {
        factorization.check(matrix.dim())?;
        let dev = matrix.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian(dev.to_f64_lossy()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::Trace(tr.re.to_f64_lossy()));
        }
        let min = linalg::hermitian_eigenvalues(&matrix, T::lit(T::EIGEN_TOL))?[0];
        Ok(Self {
            matrix,
            factorization,
            physical: min >= -tol,
        })
    }

    /// |ψ⟩⟨ψ| for a ket normalised here.
    pub fn pure(ket: &[Complex<T>], factorization: Factorization) -> Result<Self> {
        factorization.check(ket.len())?;
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::min_positive_value() {
            return Err(Error::InvalidChannel("zero state vector".into()));
        }
        let v: Vec<Complex<T>> = ket.iter().map(|z| *z / norm).collect();
        Ok(Self {
            matrix: ComplexMatrix::projector(&v),
            factorization,
            physical: true,
        })
    }

    pub fn maximally_mixed(factorization: Factorization) -> Self {
        let d = factorization.total_dim();
        Self {
            matrix: ComplexMatrix::identity(d).scale(T::one() / T::lit(d as f64)),
            factorization,
            physical: true,
        }
    }

    /// Maximally entangled state across the half cut of `n` qubits (n even),
    /// pairing qubit k with qubit n−1−k: 2^{−n/4} Σ |i₁…i_{n/2} i_{n/2}…i₁⟩.
    pub fn max_entangled(n: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidNoise(format!(
                "maximally entangled reference needs an even qubit count, got {n}"
            )));
        }
        let half = n / 2;
        let d = 1usize << n;
        let mut ket = vec![Complex::new(T::zero(), T::zero()); d];
        for a in 0..(1usize << half) {
            // B half is the bit-reversal of A half.
            let mut b = 0;
            for k in 0..half {
                b |= ((a >> k) & 1) << (half - 1 - k);
            }
            ket[(a << half) | b] = Complex::new(T::one(), T::zero());
        }
        Self::pure(&ket, Factorization::qubits(n))
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_physical(&self) -> bool {
        self.physical
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        linalg::hermitian_eigenvalues(&self.matrix, T::lit(T::EIGEN_TOL))
    }

    /// ρ^{T_S} for the listed subsystems S. Still Hermitian with unit trace.
    pub fn partial_transpose(&self, which: &[usize]) -> Result<ComplexMatrix<T>> {
        linalg::partial_transpose(&self.matrix, &self.factorization, which)
    }

    /// U ρ U†
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Ok(Self {
            matrix: &(u * &self.matrix) * &u.adjoint(),
            factorization: self.factorization.clone(),
            physical: self.physical,
        })
    }
}
