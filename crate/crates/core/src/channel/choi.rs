use num_complex::Complex;
use num_traits::{One, Zero};

use super::{KrausChannel, MixedUnitaryDecomposition, StateOperator};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Factorization};
use crate::scalar::Scalar;

/// Choi operator of a linear map on a `d`-dimensional system.
///
/// The matrix is `d² × d²` over the ordered pair (σ input, τ output) with
/// σ the more significant index:
/// `⟨i_σ k_τ| Λ |j_σ l_τ⟩ = ⟨k| N(|i⟩⟨j|) |l⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiOperator<T> {
    dim: usize,
    matrix: ComplexMatrix<T>,
    factorization: Factorization,
}

#[inline]
fn pair(a: usize, b: usize, d: usize) -> usize {
    a * d + b
}

impl<T: Scalar> ChoiOperator<T> {
    /// Wraps a `d² × d²` matrix; `factorization` describes the physical system.
    pub fn new(matrix: ComplexMatrix<T>, factorization: Factorization) -> Result<Self> {
        let d = factorization.total_dim();
        if matrix.dim() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: matrix.dim(),
            });
        }
        Ok(Self {
            dim: d,
            matrix,
            factorization,
        })
    }

    /// Builds the Choi operator of an arbitrary linear map by evaluating it on
    /// the matrix units |i⟩⟨j|.
    pub fn from_map(
        factorization: Factorization,
        map: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>,
    ) -> Result<Self> {
        let d = factorization.total_dim();
        let mut m = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut unit = ComplexMatrix::zeros(d);
                unit[(i, j)] = Complex::one();
                let out = map(&unit);
                if out.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: out.dim(),
                    });
                }
                for k in 0..d {
                    for l in 0..d {
                        m[(pair(i, k, d), pair(j, l, d))] = out[(k, l)];
                    }
                }
            }
        }
        Self::new(m, factorization)
    }

    /// d|Φ⟩⟨Φ|
    pub fn identity(factorization: Factorization) -> Self {
        let d = factorization.total_dim();
        let mut m = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                m[(pair(i, i, d), pair(j, j, d))] = Complex::one();
            }
        }
        Self {
            dim: d,
            matrix: m,
            factorization,
        }
    }

    /// The map ρ ↦ Tr[ρ] I/d, with Choi operator I/d.
    pub fn completely_depolarizing(factorization: Factorization) -> Self {
        let d = factorization.total_dim();
        Self {
            dim: d,
            matrix: ComplexMatrix::identity(d * d).scale(T::one() / T::lit(d as f64)),
            factorization,
        }
    }

    /// Choi operator of ρ ↦ UρU†.
    pub fn from_unitary(u: &ComplexMatrix<T>, factorization: Factorization) -> Result<Self> {
        let d = factorization.total_dim();
        if u.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: u.dim(),
            });
        }
        let mut m = ComplexMatrix::zeros(d * d);
        accumulate_conjugation(&mut m, u, T::one());
        Self::new(m, factorization)
    }

    pub fn from_kraus(k: &KrausChannel<T>, factorization: Factorization) -> Result<Self> {
        let d = factorization.total_dim();
        if k.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k.dim(),
            });
        }
        let mut m = ComplexMatrix::zeros(d * d);
        for e in k.operators() {
            accumulate_conjugation(&mut m, e, T::one());
        }
        Self::new(m, factorization)
    }

    /// Σᵢ qᵢ Λ_{Uᵢ}. The weights may be negative, giving an HPTP map.
    pub fn from_mixed_unitary(dec: &MixedUnitaryDecomposition<T>) -> Self {
        let d = dec.dim();
        let mut m = ComplexMatrix::zeros(d * d);
        for (q, u) in dec.terms() {
            accumulate_conjugation(&mut m, u, *q);
        }
        Self {
            dim: d,
            matrix: m,
            factorization: dec.factorization().clone(),
        }
    }

    #[inline]
    pub fn system_dim(&self) -> usize {
        self.dim
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

    /// Subsystem description of the Choi matrix itself: σ factors then τ factors.
    pub fn choi_factorization(&self) -> Factorization {
        self.factorization.concat(&self.factorization)
    }

    pub fn with_factorization(mut self, factorization: Factorization) -> Result<Self> {
        factorization.check(self.dim)?;
        self.factorization = factorization;
        Ok(self)
    }

    /// Tr_τ[Λ], which equals I_σ exactly when the map is trace preserving.
    pub fn output_trace(&self) -> ComplexMatrix<T> {
        let d = self.dim;
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| self.matrix[(pair(i, k, d), pair(j, k, d))])
                .fold(Complex::zero(), |a, b| a + b)
        })
    }

    pub fn is_hp(&self, tol: T) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn tp_deviation(&self) -> T {
        self.output_trace().max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    pub fn is_tp(&self, tol: T) -> bool {
        self.tp_deviation() <= tol
    }

    /// Smallest eigenvalue of the (Hermitian) Choi matrix.
    pub fn min_eigenvalue(&self, tol: T) -> Result<T> {
        let vals = linalg::hermitian_eigenvalues(&self.matrix, tol.min(T::lit(T::EIGEN_TOL)))?;
        Ok(vals[0])
    }

    /// CP ⇔ Λ ≥ 0, tested as λ_min ≥ −tol. Non-HP maps are never CP.
    pub fn is_cp(&self, tol: T) -> bool {
        self.is_hp(tol) && self.min_eigenvalue(tol).is_ok_and(|m| m >= -tol)
    }

    /// N(ρ) = Tr_σ[(ρᵀ ⊗ I_τ) Λ], evaluated as Σᵢⱼ ρᵢⱼ Λ_(iσ,·),(jσ,·).
    pub fn apply_matrix(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        let d = self.dim;
        if rho.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rho.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let r = rho[(i, j)];
                if r.is_zero() {
                    continue;
                }
                for k in 0..d {
                    for l in 0..d {
                        out[(k, l)] += r * self.matrix[(pair(i, k, d), pair(j, l, d))];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies the map to a state. The result must again be Hermitian with
    /// unit trace (true for HPTP maps); its physical flag comes from a PSD test.
    pub fn apply(&self, state: &StateOperator<T>, tol: T) -> Result<StateOperator<T>> {
        let out = self.apply_matrix(state.matrix())?;
        StateOperator::new(out, state.factorization().clone(), tol)
    }

    /// Superoperator S with vec(N(ρ)) = S vec(ρ), using row-major
    /// vectorization vec(ρ)[i·d + j] = ρᵢⱼ. Then S_(k,l),(i,j) = Λ_(i,k),(j,l).
    pub fn transfer_matrix(&self) -> ComplexMatrix<T> {
        let d = self.dim;
        let mut s = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        s[(pair(k, l, d), pair(i, j, d))] = self.matrix[(pair(i, k, d), pair(j, l, d))];
                    }
                }
            }
        }
        s
    }

    /// Inverse of [`Self::transfer_matrix`].
    pub fn from_transfer_matrix(s: &ComplexMatrix<T>, factorization: Factorization) -> Result<Self> {
        let d = factorization.total_dim();
        if s.dim() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: s.dim(),
            });
        }
        let mut m = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        m[(pair(i, k, d), pair(j, l, d))] = s[(pair(k, l, d), pair(i, j, d))];
                    }
                }
            }
        }
        Self::new(m, factorization)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let s = &self.transfer_matrix() * &other.transfer_matrix();
        Self::from_transfer_matrix(&s, self.factorization.clone())
    }

    /// `self ⊗ other` acting on the joint system (self's factors first).
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let a = &self.matrix;
        let b = &other.matrix;
        let m = ComplexMatrix::from_fn(d * d, |r, c| {
            let (i, k) = (r / d, r % d);
            let (j, l) = (c / d, c % d);
            let (ia, ib) = (i / db, i % db);
            let (ka, kb) = (k / db, k % db);
            let (ja, jb) = (j / db, j % db);
            let (la, lb) = (l / db, l % db);
            a[(pair(ia, ka, da), pair(ja, la, da))] * b[(pair(ib, kb, db), pair(jb, lb, db))]
        });
        Self {
            dim: d,
            matrix: m,
            factorization: self.factorization.concat(&other.factorization),
        }
    }

    /// Inverse map via the transfer matrix. Fails when the transfer matrix
    /// condition estimate exceeds `max_condition`.
    pub fn inverse(&self, max_condition: T) -> Result<Self> {
        let s = linalg::invert(&self.transfer_matrix(), max_condition)?;
        Self::from_transfer_matrix(&s, self.factorization.clone())
    }

    /// Partial transpose of the map: the Choi matrix transposed on the listed
    /// system subsystems of both σ and τ.
    pub fn partial_transpose(&self, which: &[usize]) -> Result<Self> {
        let n = self.factorization.len();
        let mut idx = Vec::with_capacity(2 * which.len());
        for &w in which {
            if w >= n {
                return Err(Error::SubsystemIndex { index: w, count: n });
            }
            idx.push(w);
            idx.push(n + w);
        }
        let m = linalg::partial_transpose(&self.matrix, &self.choi_factorization(), &idx)?;
        Self::new(m, self.factorization.clone())
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.scale(s),
            factorization: self.factorization.clone(),
        }
    }

    /// Σ qᵢ Λᵢ over maps of equal dimension.
    pub fn linear_combination<'a>(
        terms: impl IntoIterator<Item = (T, &'a ChoiOperator<T>)>,
    ) -> Result<Self> {
        let mut acc: Option<Self> = None;
        for (q, c) in terms {
            acc = Some(match acc {
                None => c.scale(q),
                Some(a) => {
                    if a.dim != c.dim {
                        return Err(Error::DimensionMismatch {
                            expected: a.dim,
                            found: c.dim,
                        });
                    }
                    Self {
                        dim: a.dim,
                        matrix: &a.matrix + &c.matrix.scale(q),
                        factorization: a.factorization,
                    }
                }
            });
        }
        acc.ok_or_else(|| Error::InvalidChannel("empty linear combination".into()))
    }

    pub fn cast<U: Scalar>(&self) -> ChoiOperator<U> {
        ChoiOperator {
            dim: self.dim,
            matrix: self.matrix.cast(),
            factorization: self.factorization.clone(),
        }
    }
}

/// m += q · Λ_{ρ ↦ EρE†}
fn accumulate_conjugation<T: Scalar>(m: &mut ComplexMatrix<T>, e: &ComplexMatrix<T>, q: T) {
    let d = e.dim();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let eki = e[(k, i)];
                if eki.is_zero() {
                    continue;
                }
                for l in 0..d {
                    m[(pair(i, k, d), pair(j, l, d))] += eki * e[(l, j)].conj() * q;
                }
            }
        }
    }
}
