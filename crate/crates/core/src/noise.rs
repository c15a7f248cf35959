//! Parametric multi-qubit noise families, their inverses and closed-form costs.

use std::fmt;

use num_complex::Complex;

use crate::channel::{ChoiOperator, KrausChannel, MixedUnitaryDecomposition, StateOperator};
use crate::error::{Error, Result};
use crate::linalg::pauli::{all_labels, pauli, pauli_string, z_labels, Pauli};
use crate::linalg::{ComplexMatrix, Factorization};
use crate::measures::mu_from_weights;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoiseKind {
    /// ρ ↦ (1−ε)ρ + ε σ_α ρ σ_α for a fixed string of non-identity axes.
    PauliString(Vec<Pauli>),
    /// ρ ↦ (1−ε)ρ + ε I/2ⁿ
    Depolarizing,
    /// ρ ↦ (1−ε)ρ + ε/2ⁿ Σ over Z-strings
    Dephasing,
    /// Independent single-qubit amplitude damping on every qubit.
    AmplitudeDamping,
}

impl NoiseKind {
    /// Parses `depolarizing`, `dephasing`, `amplitude-damping` (or `ad`),
    /// `phase-flip` (Z on every qubit) and `pauli:<axes>` such as `pauli:zz`.
    pub fn parse(s: &str, qubits: usize) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "depolarizing" | "depol" => Ok(Self::Depolarizing),
            "dephasing" => Ok(Self::Dephasing),
            "amplitude-damping" | "amplitude_damping" | "ad" => Ok(Self::AmplitudeDamping),
            "phase-flip" | "phase_flip" => Ok(Self::PauliString(vec![Pauli::Z; qubits])),
            other => {
                let axes = other
                    .strip_prefix("pauli:")
                    .ok_or_else(|| Error::InvalidNoise(format!("unknown noise kind '{s}'")))?;
                let axes = axes
                    .chars()
                    .map(|c| {
                        Pauli::from_char(c)
                            .ok_or_else(|| Error::InvalidNoise(format!("bad Pauli axis '{c}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::PauliString(axes))
            }
        }
    }

    /// Largest admissible error rate (exclusive).
    pub fn epsilon_max(&self) -> f64 {
        match self {
            Self::PauliString(_) => 0.5,
            _ => 1.0,
        }
    }

    /// Whether the channel is a mixed-unitary map over orthogonal unitaries.
    pub fn is_orthogonal_mixed_unitary(&self) -> bool {
        !matches!(self, Self::AmplitudeDamping)
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PauliString(axes) => {
                write!(f, "pauli:")?;
                axes.iter().try_for_each(|p| write!(f, "{}", p.to_char()))
            }
            Self::Depolarizing => write!(f, "depolarizing"),
            Self::Dephasing => write!(f, "dephasing"),
            Self::AmplitudeDamping => write!(f, "amplitude-damping"),
        }
    }
}

/// One signed term of a decomposition into product CPTP maps, stored as one
/// single-qubit channel per qubit.
#[derive(Clone, Debug)]
pub struct ProductTerm<T> {
    pub weight: T,
    pub factors: Vec<ChoiOperator<T>>,
}

impl<T: Scalar> ProductTerm<T> {
    /// Tensor product of the factors over `range`.
    pub fn block(&self, range: std::ops::Range<usize>) -> ChoiOperator<T> {
        let mut it = self.factors[range].iter();
        let first = it.next().expect("non-empty factor range").clone();
        it.fold(first, |acc, c| acc.tensor(c))
    }

    pub fn full(&self) -> ChoiOperator<T> {
        self.block(0..self.factors.len())
    }
}

/// A Choi operator together with a signed mixed-unitary decomposition when
/// one is known.
#[derive(Clone, Debug)]
pub struct NoiseMap<T> {
    pub choi: ChoiOperator<T>,
    pub decomposition: Option<MixedUnitaryDecomposition<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseFamily {
    kind: NoiseKind,
    qubits: usize,
    epsilon: f64,
}

/// The default error-rate grid 0.01, 0.02, …, 0.30.
pub fn default_epsilons() -> Vec<f64> {
    (1..=30).map(|k| k as f64 * 0.01).collect()
}

impl NoiseFamily {
    pub fn new(kind: NoiseKind, qubits: usize, epsilon: f64) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::InvalidNoise("qubit count must be positive".into()));
        }
        if let NoiseKind::PauliString(axes) = &kind {
            if axes.len() != qubits {
                return Err(Error::InvalidNoise(format!(
                    "Pauli string has {} axes for {} qubits",
                    axes.len(),
                    qubits
                )));
            }
            if axes.contains(&Pauli::I) {
                return Err(Error::InvalidNoise("Pauli axes must be x, y or z".into()));
            }
        }
        let max = kind.epsilon_max();
        if !(0.0..max).contains(&epsilon) {
            return Err(Error::ErrorRate { epsilon, max });
        }
        Ok(Self {
            kind,
            qubits,
            epsilon,
        })
    }

    pub fn parse(kind: &str, qubits: usize, epsilon: f64) -> Result<Self> {
        Self::new(NoiseKind::parse(kind, qubits)?, qubits, epsilon)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.kind.clone(), self.qubits, epsilon)
    }

    pub fn kind(&self) -> &NoiseKind {
        &self.kind
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn factorization(&self) -> Factorization {
        Factorization::qubits(self.qubits)
    }

    /// Labels and channel weights for the mixed-unitary kinds.
    fn channel_weights(&self) -> Option<Vec<(f64, Vec<Pauli>)>> {
        let e = self.epsilon;
        let n = self.qubits;
        match &self.kind {
            NoiseKind::PauliString(axes) => {
                Some(vec![(1.0 - e, vec![Pauli::I; n]), (e, axes.clone())])
            }
            NoiseKind::Depolarizing => Some(uniform_twirl(all_labels(n), e, 1.0 - e)),
            NoiseKind::Dephasing => Some(uniform_twirl(z_labels(n), e, 1.0 - e)),
            NoiseKind::AmplitudeDamping => None,
        }
    }

    /// Signed weights of the analytic inverse over the same Pauli strings.
    fn inverse_pauli_weights(&self) -> Option<Vec<(f64, Vec<Pauli>)>> {
        let e = self.epsilon;
        let n = self.qubits;
        match &self.kind {
            NoiseKind::PauliString(axes) => {
                let s = 1.0 - 2.0 * e;
                Some(vec![((1.0 - e) / s, vec![Pauli::I; n]), (-e / s, axes.clone())])
            }
            // E⁻¹(ρ) = ρ/(1−ε) − ε/(1−ε) · (twirl)(ρ)
            NoiseKind::Depolarizing => {
                Some(uniform_twirl(all_labels(n), -e / (1.0 - e), 1.0 / (1.0 - e)))
            }
            NoiseKind::Dephasing => {
                Some(uniform_twirl(z_labels(n), -e / (1.0 - e), 1.0 / (1.0 - e)))
            }
            NoiseKind::AmplitudeDamping => None,
        }
    }

    fn single_qubit_ad<T: Scalar>(&self) -> Result<ChoiOperator<T>> {
        let e = T::lit(self.epsilon);
        let e0 = ComplexMatrix::from_diagonal(&[T::one(), (T::one() - e).sqrt()]);
        let e1 = ComplexMatrix::from_fn(2, |i, j| {
            Complex::new(if (i, j) == (0, 1) { e.sqrt() } else { T::zero() }, T::zero())
        });
        let k = KrausChannel::new(vec![e0, e1], T::lit(T::PREDICATE_TOL))?;
        ChoiOperator::from_kraus(&k, Factorization::qubits(1))
    }

    /// CPTP channel, with its orthogonal mixed-unitary decomposition for all
    /// kinds except amplitude damping.
    pub fn build_channel<T: Scalar>(&self) -> Result<NoiseMap<T>> {
        match self.channel_weights() {
            Some(w) => {
                let dec = self.decomposition(w)?;
                Ok(NoiseMap {
                    choi: ChoiOperator::from_mixed_unitary(&dec),
                    decomposition: Some(dec),
                })
            }
            None => {
                let one = self.single_qubit_ad::<T>()?;
                let choi = (1..self.qubits).fold(one.clone(), |acc, _| acc.tensor(&one));
                Ok(NoiseMap {
                    choi,
                    decomposition: None,
                })
            }
        }
    }

    /// The inverse map. Analytic signed decompositions for the mixed-unitary
    /// kinds; amplitude damping is inverted numerically.
    pub fn build_inverse<T: Scalar>(&self) -> Result<NoiseMap<T>> {
        match self.inverse_pauli_weights() {
            Some(w) => {
                let dec = self.decomposition(w)?;
                Ok(NoiseMap {
                    choi: ChoiOperator::from_mixed_unitary(&dec),
                    decomposition: Some(dec),
                })
            }
            None => {
                let channel = self.build_channel::<T>()?.choi;
                Ok(NoiseMap {
                    choi: channel.inverse(T::lit(T::MAX_CONDITION))?,
                    decomposition: None,
                })
            }
        }
    }

    fn decomposition<T: Scalar>(
        &self,
        weights: Vec<(f64, Vec<Pauli>)>,
    ) -> Result<MixedUnitaryDecomposition<T>> {
        let terms = weights
            .into_iter()
            .map(|(q, label)| (T::lit(q), pauli_string::<T>(&label)))
            .collect();
        // Weights of the inverse grow like 1/(1−2ε); scale the sum check accordingly.
        let tol = T::lit(T::PREDICATE_TOL) * T::lit(1.0 + self.total_inverse_weight());
        MixedUnitaryDecomposition::new(terms, self.factorization(), tol)
    }

    /// Signed weights of the inverse decomposition used for μ. For amplitude
    /// damping these are the tensored per-qubit pair (1/(1−ε), −ε/(1−ε)).
    pub fn inverse_weights(&self) -> Vec<f64> {
        match self.inverse_pauli_weights() {
            Some(w) => w.into_iter().map(|(q, _)| q).collect(),
            None => {
                let (plus, minus) = ad_inverse_pair(self.epsilon);
                (0..1usize << self.qubits)
                    .map(|mask| {
                        let neg = mask.count_ones() as i32;
                        plus.powi(self.qubits as i32 - neg) * minus.powi(neg)
                    })
                    .collect()
            }
        }
    }

    fn total_inverse_weight(&self) -> f64 {
        self.inverse_weights().iter().map(|q| q.abs()).sum()
    }

    /// Signed decomposition of the inverse into product CPTP maps, one
    /// single-qubit channel per qubit in each term.
    pub fn inverse_product_terms<T: Scalar>(&self) -> Result<Vec<ProductTerm<T>>> {
        let single = Factorization::qubits(1);
        match self.inverse_pauli_weights() {
            Some(w) => w
                .into_iter()
                .map(|(q, label)| {
                    let factors = label
                        .iter()
                        .map(|p| ChoiOperator::from_unitary(&pauli::<T>(*p), single.clone()))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(ProductTerm {
                        weight: T::lit(q),
                        factors,
                    })
                })
                .collect(),
            None => {
                let (plus, minus) = ad_inverse_pair(self.epsilon);
                let dephase = phase_damping::<T>(T::lit((1.0 - self.epsilon).sqrt()))?;
                let reset = reset_to_zero::<T>()?;
                Ok((0..1usize << self.qubits)
                    .map(|mask| {
                        let mut weight = 1.0;
                        let factors = (0..self.qubits)
                            .map(|k| {
                                if (mask >> (self.qubits - 1 - k)) & 1 == 1 {
                                    weight *= minus;
                                    reset.clone()
                                } else {
                                    weight *= plus;
                                    dephase.clone()
                                }
                            })
                            .collect();
                        ProductTerm {
                            weight: T::lit(weight),
                            factors,
                        }
                    })
                    .collect())
            }
        }
    }

    /// Closed-form physical implementability of the inverse, in bits.
    pub fn nu_inverse(&self) -> f64 {
        let e = self.epsilon;
        let n = self.qubits as i32;
        match &self.kind {
            NoiseKind::PauliString(_) => (1.0 / (1.0 - 2.0 * e)).log2(),
            NoiseKind::Depolarizing => {
                ((1.0 + (1.0 - 2.0 / 4f64.powi(n)) * e) / (1.0 - e)).log2()
            }
            NoiseKind::Dephasing => ((1.0 + (1.0 - 2.0 / 2f64.powi(n)) * e) / (1.0 - e)).log2(),
            NoiseKind::AmplitudeDamping => n as f64 * ((1.0 + e) / (1.0 - e)).log2(),
        }
    }

    /// Root-mean-square estimator log₂√(Σq²) of the inverse weights.
    pub fn mu_inverse(&self) -> f64 {
        mu_from_weights(&self.inverse_weights())
    }

    /// Closed-form ΔE_N = E_N(out) − E_N(in) for the maximally entangled state
    /// across the half cut (see [`StateOperator::max_entangled`]).
    pub fn max_entangled_delta(&self) -> Result<f64> {
        let n = self.qubits;
        if n % 2 == 1 {
            return Err(Error::InvalidNoise(format!(
                "maximally entangled reference needs an even qubit count, got {n}"
            )));
        }
        let e = self.epsilon;
        let ds = (1usize << (n / 2)) as f64;
        Ok(match &self.kind {
            NoiseKind::PauliString(axes) => {
                let mirrored = (0..n).all(|k| axes[k] == axes[n - 1 - k]);
                if mirrored {
                    0.0
                } else {
                    (1.0 - e).log2()
                }
            }
            NoiseKind::Depolarizing => {
                // Spectrum of the output partial transpose: ds(ds+1)/2 copies of
                // a and ds(ds−1)/2 copies of b.
                let a = (1.0 - e) / ds + e / (ds * ds);
                let b = -(1.0 - e) / ds + e / (ds * ds);
                let norm = ds * (ds + 1.0) / 2.0 * a.abs() + ds * (ds - 1.0) / 2.0 * b.abs();
                norm.log2() - ds.log2()
            }
            NoiseKind::Dephasing => (1.0 - (1.0 - 1.0 / ds) * e).log2(),
            NoiseKind::AmplitudeDamping => (n as f64 / 2.0) * (1.0 - e + e * e / 2.0).log2(),
        })
    }

    /// The maximally entangled reference state for this family's qubit count.
    pub fn max_entangled_state<T: Scalar>(&self) -> Result<StateOperator<T>> {
        StateOperator::max_entangled(self.qubits)
    }
}

impl fmt::Display for NoiseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, eps={})", self.kind, self.qubits, self.epsilon)
    }
}

/// Identity gets `identity_extra + spread/len`, every label gets `spread/len`.
fn uniform_twirl(labels: Vec<Vec<Pauli>>, spread: f64, identity_extra: f64) -> Vec<(f64, Vec<Pauli>)> {
    let share = spread / labels.len() as f64;
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| (if i == 0 { identity_extra + share } else { share }, l))
        .collect()
}

fn ad_inverse_pair(e: f64) -> (f64, f64) {
    (1.0 / (1.0 - e), -e / (1.0 - e))
}

/// Single-qubit channel scaling coherences by `c ∈ [0, 1]`, as the mixture
/// ((1+c)/2) I + ((1−c)/2) Z.
fn phase_damping<T: Scalar>(c: T) -> Result<ChoiOperator<T>> {
    let half = T::lit(0.5);
    let dec = MixedUnitaryDecomposition::new(
        vec![
            ((T::one() + c) * half, pauli(Pauli::I)),
            ((T::one() - c) * half, pauli(Pauli::Z)),
        ],
        Factorization::qubits(1),
        T::lit(T::PREDICATE_TOL),
    )?;
    Ok(ChoiOperator::from_mixed_unitary(&dec))
}

/// ρ ↦ Tr[ρ] |0⟩⟨0|
fn reset_to_zero<T: Scalar>() -> Result<ChoiOperator<T>> {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    let k0 = ComplexMatrix::from_vec(2, vec![o, z, z, z])?;
    let k1 = ComplexMatrix::from_vec(2, vec![z, o, z, z])?;
    let k = KrausChannel::new(vec![k0, k1], T::lit(T::PREDICATE_TOL))?;
    ChoiOperator::from_kraus(&k, Factorization::qubits(1))
}
