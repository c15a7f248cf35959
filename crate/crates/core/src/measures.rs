//! Scalar functionals of states and maps. Logarithms are base 2 throughout.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::channel::{ChoiOperator, MixedUnitaryDecomposition, StateOperator};
use crate::error::{Error, Result};
use crate::linalg::pauli::{all_labels, pauli_string};
use crate::linalg::{self, ComplexMatrix};
use crate::scalar::Scalar;

/// Tr[ρ²]
pub fn purity<T: Scalar>(s: &StateOperator<T>) -> T {
    s.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Expansion coefficients over the non-identity Pauli strings, with
/// ρ = (I + Σ rᵢ Pᵢ)/d. Strings are unnormalised (Tr[PᵢPⱼ] = d δᵢⱼ), so
/// rᵢ = Tr[ρ Pᵢ] and Tr[ρ²] = (1 + |r|²)/d.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector<T> {
    qubits: usize,
    coefficients: Vec<T>,
}

impl<T: Scalar> BlochVector<T> {
    /// Order follows [`all_labels`] with the identity string dropped.
    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn norm(&self) -> T {
        self.coefficients.iter().map(|r| *r * *r).sum::<T>().sqrt()
    }

    pub fn purity(&self) -> T {
        let d = T::lit((1usize << self.qubits) as f64);
        (T::one() + self.norm().powi(2)) / d
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let d = 1usize << self.qubits;
        let mut m = ComplexMatrix::identity(d);
        for (r, label) in self.coefficients.iter().zip(all_labels(self.qubits).iter().skip(1)) {
            m = &m + &pauli_string::<T>(label).scale(*r);
        }
        m.scale(T::one() / T::lit(d as f64))
    }
}

/// Bloch vector of a qubit state.
pub fn bloch_vector<T: Scalar>(s: &StateOperator<T>) -> Result<BlochVector<T>> {
    let f = s.factorization();
    if f.dims().iter().any(|&d| d != 2) {
        return Err(Error::Unsupported(
            "Bloch vectors are defined for qubit factorizations only".into(),
        ));
    }
    let n = f.len();
    let rho = s.matrix();
    let coefficients = all_labels(n)
        .iter()
        .skip(1)
        .map(|label| {
            let p = pauli_string::<T>(label);
            // Tr[ρP] = Σ ρᵢⱼ Pⱼᵢ
            let mut acc = Complex::zero();
            for i in 0..rho.dim() {
                for j in 0..rho.dim() {
                    acc += rho[(i, j)] * p[(j, i)];
                }
            }
            acc.re
        })
        .collect();
    Ok(BlochVector {
        qubits: n,
        coefficients,
    })
}

/// log₂[(P(ρ)d − 1)/(P(ρ₀)d − 1)], or `None` when the input Bloch vector
/// vanishes (the ratio is 0/0 or undefined).
pub fn purity_log_ratio<T: Scalar>(p_out: T, p_in: T, d: usize, tol: T) -> Option<T> {
    let d = T::lit(d as f64);
    let num = p_out * d - T::one();
    let den = p_in * d - T::one();
    if den.abs() <= tol {
        return None;
    }
    Some((num / den).log2())
}

/// E_N = log₂‖ρ^{T_B}‖₁ where A is the first `cut` subsystems.
pub fn log_negativity<T: Scalar>(s: &StateOperator<T>, cut: usize) -> Result<T> {
    Ok(partial_transpose_norm(s.matrix(), s, cut)?.log2())
}

fn partial_transpose_norm<T: Scalar>(m: &ComplexMatrix<T>, s: &StateOperator<T>, cut: usize) -> Result<T> {
    let bip = s.factorization().bipartite(cut)?;
    let pt = linalg::partial_transpose(m, &bip, &[1])?;
    linalg::trace_norm(&pt, T::lit(T::EIGEN_TOL))
}

/// Eigenvalues (ascending) of ρ^{T_B} across the cut after the first `cut` subsystems.
pub fn partial_transpose_spectrum<T: Scalar>(s: &StateOperator<T>, cut: usize) -> Result<Vec<T>> {
    let bip = s.factorization().bipartite(cut)?;
    let pt = linalg::partial_transpose(s.matrix(), &bip, &[1])?;
    linalg::hermitian_eigenvalues(&pt, T::lit(T::EIGEN_TOL))
}

/// Physical implementability of a map given an orthogonal mixed-unitary
/// decomposition: log₂ Σ|qᵢ|. The trace-norm value log₂(‖Λ‖₁/d) is computed
/// as well and must agree within 1e−9 (scaled for `f32`).
pub fn nu_orthogonal<T: Scalar>(
    c: &ChoiOperator<T>,
    dec: &MixedUnitaryDecomposition<T>,
    tol: T,
) -> Result<T> {
    let dev = dec.orthogonality_deviation();
    if dev > tol {
        return Err(Error::NotOrthogonal(dev.to_f64_lossy()));
    }
    let rebuilt = ChoiOperator::from_mixed_unitary(dec);
    let mismatch = rebuilt.matrix().max_abs_diff(c.matrix());
    if mismatch > tol * dec.total_weight() {
        return Err(Error::Reconstruction(mismatch.to_f64_lossy()));
    }
    let by_weights = dec.total_weight().log2();
    let d = T::lit(c.system_dim() as f64);
    let by_norm = (linalg::trace_norm(c.matrix(), T::lit(T::EIGEN_TOL))? / d).log2();
    let agree = T::lit(1e-9).max(T::lit(T::PREDICATE_TOL) * T::lit(10.0));
    if (by_weights - by_norm).abs() > agree {
        return Err(Error::Inconsistent(format!(
            "weight sum gives {} bits, trace norm gives {} bits",
            by_weights, by_norm
        )));
    }
    Ok(by_weights)
}

/// Bounds on ν (bits) from the spectrum of a Hermitian-preserving map's Choi matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImplementabilityBounds<T> {
    /// log₂(‖Λ‖₁/d)
    pub lower_trace: T,
    /// log₂‖Λ‖₁
    pub upper_trace: T,
    /// log₂(2λ_max/d − 1); −∞ when the argument is not positive.
    pub lower_max_eig: T,
    /// log₂(1 − 2λ_min/d)
    pub lower_min_eig: T,
    /// log₂(1 − 2 d min(λ_min, 0))
    pub upper_min_eig: T,
}

impl<T: Scalar> ImplementabilityBounds<T> {
    pub fn lower(&self) -> T {
        self.lower_trace.max(self.lower_max_eig).max(self.lower_min_eig)
    }

    pub fn upper(&self) -> T {
        self.upper_trace.min(self.upper_min_eig)
    }

    pub fn contains(&self, nu: T, tol: T) -> bool {
        nu >= self.lower() - tol && nu <= self.upper() + tol
    }
}

pub fn nu_bounds<T: Scalar>(c: &ChoiOperator<T>, tol: T) -> Result<ImplementabilityBounds<T>> {
    let dev = c.matrix().hermiticity_deviation();
    if dev > tol {
        return Err(Error::NotHermitian(dev.to_f64_lossy()));
    }
    let vals = linalg::hermitian_eigenvalues(c.matrix(), T::lit(T::EIGEN_TOL))?;
    let d = T::lit(c.system_dim() as f64);
    let two = T::lit(2.0);
    let norm: T = vals.iter().map(|v| v.abs()).sum();
    let lmin = vals[0];
    let lmax = vals[vals.len() - 1];
    let arg = two * lmax / d - T::one();
    Ok(ImplementabilityBounds {
        lower_trace: (norm / d).log2(),
        upper_trace: norm.log2(),
        lower_max_eig: if arg > T::zero() { arg.log2() } else { T::neg_infinity() },
        lower_min_eig: (T::one() - two * lmin / d).log2(),
        upper_min_eig: (T::one() - two * lmin.min(T::zero()) * d).log2(),
    })
}

/// Upper bound on η: log₂ Σ|qᵢ| for a supplied decomposition Σ qᵢ Aᵢ ⊗ Bᵢ of
/// `target` into product CPTP maps.
pub fn eta_upper<T: Scalar>(
    target: &ChoiOperator<T>,
    terms: &[(T, ChoiOperator<T>, ChoiOperator<T>)],
    tol: T,
) -> Result<T> {
    if terms.is_empty() {
        return Err(Error::InvalidChannel("empty product decomposition".into()));
    }
    let mut sum: Option<ComplexMatrix<T>> = None;
    for (q, a, b) in terms {
        for (side, f) in [("A", a), ("B", b)] {
            if !(f.is_tp(tol) && f.is_cp(tol)) {
                return Err(Error::InvalidChannel(format!("{side} factor is not CPTP")));
            }
        }
        let ab = a.tensor(b);
        if ab.system_dim() != target.system_dim() {
            return Err(Error::DimensionMismatch {
                expected: target.system_dim(),
                found: ab.system_dim(),
            });
        }
        let scaled = ab.matrix().scale(*q);
        sum = Some(match sum {
            None => scaled,
            Some(s) => &s + &scaled,
        });
    }
    let weight: T = terms.iter().map(|(q, _, _)| q.abs()).sum();
    let mismatch = sum.expect("non-empty").max_abs_diff(target.matrix());
    if mismatch > tol * weight {
        return Err(Error::Reconstruction(mismatch.to_f64_lossy()));
    }
    Ok(weight.log2())
}

/// μ = log₂√(Σqᵢ²)
pub fn mu_from_weights<T: Scalar>(q: &[T]) -> T {
    q.iter().map(|x| *x * *x).sum::<T>().sqrt().log2()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

/// The off-diagonal input block whose output partial trace is largest.
/// `(i, j)` index subsystem A of the input, `(k, l)` subsystem B; `side` says
/// which output factor was traced out.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparabilityWitness<T> {
    pub side: Side,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub norm: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparabilityVerdict<T> {
    pub passes: bool,
    pub witness: Option<SeparabilityWitness<T>>,
}

/// Necessary condition for a map to be a signed combination of product
/// channels across the cut after the first `cut` subsystems.
///
/// Writing Λ = Σ |i⟩⟨j|_A ⊗ |k⟩⟨l|_B ⊗ O_ijkl (input indices, O on the
/// output), every separable TP map has Tr_A O_ijkl = 0 for i ≠ j and
/// Tr_B O_ijkl = 0 for k ≠ l. The witness is the largest Frobenius-norm
/// violation.
pub fn separability_necessary<T: Scalar>(
    c: &ChoiOperator<T>,
    cut: usize,
    tol: T,
) -> Result<SeparabilityVerdict<T>> {
    let bip = c.factorization().bipartite(cut)?;
    let (da, db) = (bip.dims()[0], bip.dims()[1]);
    let d = da * db;
    let m = c.matrix();
    let at = |ia: usize, ib: usize, ka: usize, kb: usize, ja: usize, jb: usize, la: usize, lb: usize| {
        m[((ia * db + ib) * d + ka * db + kb, (ja * db + jb) * d + la * db + lb)]
    };
    let mut worst: Option<SeparabilityWitness<T>> = None;
    let mut consider = |w: SeparabilityWitness<T>| {
        if worst.is_none_or(|cur| w.norm > cur.norm) {
            worst = Some(w);
        }
    };
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    if i != j {
                        // Tr over output A: matrix on output B.
                        let mut sq = T::zero();
                        for kb in 0..db {
                            for lb in 0..db {
                                let mut acc = Complex::zero();
                                for a in 0..da {
                                    acc += at(i, k, a, kb, j, l, a, lb);
                                }
                                sq += acc.norm_sqr();
                            }
                        }
                        consider(SeparabilityWitness { side: Side::A, i, j, k, l, norm: sq.sqrt() });
                    }
                    if k != l {
                        let mut sq = T::zero();
                        for ka in 0..da {
                            for la in 0..da {
                                let mut acc = Complex::zero();
                                for b in 0..db {
                                    acc += at(i, k, ka, b, j, l, la, b);
                                }
                                sq += acc.norm_sqr();
                            }
                        }
                        consider(SeparabilityWitness { side: Side::B, i, j, k, l, norm: sq.sqrt() });
                    }
                }
            }
        }
    }
    let passes = worst.is_none_or(|w| w.norm <= tol);
    Ok(SeparabilityVerdict {
        passes,
        witness: if passes { None } else { worst },
    })
}
