use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense square complex matrix stored in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::one();
        }
        m
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_vec(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Row-major real entries, convenient for literals in tests and constructors.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_vec(
            dim,
            entries.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let dim = diag.len();
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// |ψ⟩⟨φ|
    pub fn outer(ket: &[Complex<T>], bra: &[Complex<T>]) -> Result<Self> {
        if ket.len() != bra.len() {
            return Err(Error::DimensionMismatch {
                expected: ket.len(),
                found: bra.len(),
            });
        }
        Ok(Self::from_fn(ket.len(), |i, j| ket[i] * bra[j].conj()))
    }

    /// |ψ⟩⟨ψ|
    pub fn projector(ket: &[Complex<T>]) -> Self {
        Self::from_fn(ket.len(), |i, j| ket[i] * ket[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn one_norm(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Frobenius distance ‖self − other‖_F.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "distance on mismatched dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    pub fn hermiticity_deviation(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// max |U†U − I|
    pub fn unitarity_deviation(&self) -> T {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Positive semidefinite within `tol`: Hermitian and minimum eigenvalue ≥ −tol.
    pub fn is_psd(&self, tol: T) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match super::hermitian_eigenvalues(self, tol) {
            Ok(vals) => vals.first().is_none_or(|&min| min >= -tol),
            Err(_) => false,
        }
    }

    /// Replaces the matrix by (M + M†)/2, removing round-off anti-Hermitian parts.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// Converts between scalar precisions.
    pub fn cast<U: Scalar>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix product on mismatched dimensions");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * *b;
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix sum on mismatched dimensions");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix difference on mismatched dimensions");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Scalar> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

/// Ordered subsystem dimensions of a composite space. Subsystem 0 is the most
/// significant tensor factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Factorization(Vec<usize>);

impl Factorization {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            let dim = dims.iter().product();
            return Err(Error::Factorization { dims, dim });
        }
        Ok(Self(dims))
    }

    /// `n` qubit factors.
    pub fn qubits(n: usize) -> Self {
        Self(vec![2; n.max(1)])
    }

    /// A single unfactored system of dimension `d`.
    pub fn single(d: usize) -> Self {
        Self(vec![d.max(1)])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.0.iter().product()
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if self.total_dim() != dim {
            return Err(Error::Factorization {
                dims: self.0.clone(),
                dim,
            });
        }
        Ok(())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut dims = self.0.clone();
        dims.extend_from_slice(&other.0);
        Self(dims)
    }

    /// Groups subsystems `[0, cut)` and `[cut, len)` into a two-factor description.
    pub fn bipartite(&self, cut: usize) -> Result<Self> {
        if cut == 0 || cut >= self.0.len() {
            return Err(Error::SubsystemIndex {
                index: cut,
                count: self.0.len(),
            });
        }
        Ok(Self(vec![
            self.0[..cut].iter().product(),
            self.0[cut..].iter().product(),
        ]))
    }

    /// Mixed-radix digits of a flat index, most significant subsystem first.
    pub(crate) fn digits(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = index % d;
            index /= d;
        }
    }

    pub(crate) fn flat(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.0).fold(0, |acc, (&x, &d)| acc * d + x)
    }
}

impl TryFrom<Vec<usize>> for Factorization {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<Factorization> for Vec<usize> {
    fn from(f: Factorization) -> Self {
        f.0
    }
}
