use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix, Factorization};
use crate::scalar::Scalar;

/// Operator-sum representation ρ ↦ Σ EᵢρEᵢ†.
#[derive(Clone, Debug)]
pub struct KrausChannel<T> {
    ops: Vec<ComplexMatrix<T>>,
}

impl<T: Scalar> KrausChannel<T> {
    /// Validates common dimension and completeness Σ Eᵢ†Eᵢ = I within `tol`.
    pub fn new(ops: Vec<ComplexMatrix<T>>, tol: T) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let d = first.dim();
        let mut sum = ComplexMatrix::zeros(d);
        for e in &ops {
            if e.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: e.dim(),
                });
            }
            sum = &sum + &(&e.adjoint() * e);
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if dev > tol {
            return Err(Error::InvalidChannel(format!(
                "Kraus completeness violated by {:e}",
                dev.to_f64_lossy()
            )));
        }
        Ok(Self { ops })
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.ops
    }

    pub fn apply(&self, rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.ops
            .iter()
            .fold(ComplexMatrix::zeros(rho.dim()), |acc, e| &acc + &(&(e * rho) * &e.adjoint()))
    }
}

/// Signed mixture of unitary conjugations N(ρ) = Σ qᵢ UᵢρUᵢ†.
#[derive(Clone, Debug)]
pub struct MixedUnitaryDecomposition<T> {
    terms: Vec<(T, ComplexMatrix<T>)>,
    factorization: Factorization,
}

impl<T: Scalar> MixedUnitaryDecomposition<T> {
    /// Checks that each term is unitary and the weights sum to one (TP).
    pub fn new(
        terms: Vec<(T, ComplexMatrix<T>)>,
        factorization: Factorization,
        tol: T,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidChannel("empty mixed-unitary decomposition".into()));
        }
        let d = factorization.total_dim();
        for (_, u) in &terms {
            if u.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: u.dim(),
                });
            }
            let dev = u.unitarity_deviation();
            if dev > tol {
                return Err(Error::NotUnitary(dev.to_f64_lossy()));
            }
        }
        let total: T = terms.iter().map(|(q, _)| *q).sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidChannel(format!(
                "weights sum to {}, expected 1",
                total
            )));
        }
        Ok(Self {
            terms,
            factorization,
        })
    }

    pub fn dim(&self) -> usize {
        self.factorization.total_dim()
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn terms(&self) -> &[(T, ComplexMatrix<T>)] {
        &self.terms
    }

    pub fn weights(&self) -> Vec<T> {
        self.terms.iter().map(|(q, _)| *q).collect()
    }

    /// Σ|qᵢ|
    pub fn total_weight(&self) -> T {
        self.terms.iter().map(|(q, _)| q.abs()).sum()
    }

    /// max over pairs of |Tr[Uᵢ†Uⱼ] − d·δᵢⱼ|.
    pub fn orthogonality_deviation(&self) -> T {
        let d = T::lit(self.dim() as f64);
        let mut dev = T::zero();
        for (a, (_, ua)) in self.terms.iter().enumerate() {
            let ua_dag = ua.adjoint();
            for (b, (_, ub)) in self.terms.iter().enumerate().skip(a) {
                let t = (&ua_dag * ub).trace();
                let target = if a == b { d } else { T::zero() };
                dev = dev.max((t - target).norm());
            }
        }
        dev
    }

    /// Tr[Uᵢ†Uⱼ] = d·δᵢⱼ within `tol`.
    pub fn is_orthogonal(&self, tol: T) -> bool {
        self.orthogonality_deviation() <= tol
    }

    /// The decomposition {(qᵢ, U Uᵢ V)} of U ∘ N ∘ V.
    pub fn conjugated(&self, u: &ComplexMatrix<T>, v: &ComplexMatrix<T>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(q, ui)| (*q, &(u * ui) * v))
                .collect(),
            factorization: self.factorization.clone(),
        }
    }

    /// Decomposition of N_A ⊗ N_B with terms (qᵢqⱼ, Uᵢ ⊗ Uⱼ).
    pub fn tensor(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (qa, ua) in &self.terms {
            for (qb, ub) in &other.terms {
                terms.push((*qa * *qb, tensor_product(ua, ub)));
            }
        }
        Self {
            terms,
            factorization: self.factorization.concat(&other.factorization),
        }
    }

    pub fn apply(&self, rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.terms.iter().fold(ComplexMatrix::zeros(rho.dim()), |acc, (q, u)| {
            &acc + &(&(u * rho) * &u.adjoint()).scale(*q)
        })
    }
}
