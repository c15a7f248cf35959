//! Seeded ensembles of input states.
//!
//! Every sample draws from its own ChaCha20 stream: the generator is seeded
//! with `seed_from_u64(seed)` and the stream id is the sample index, so any
//! sample can be regenerated on its own and parallel evaluation stays
//! deterministic. Uniforms take the top 53 bits of `next_u64`; standard normals
//! come from the Box–Muller transform. All sampling happens in `f64` and is
//! cast afterwards, so `f32` and `f64` runs see the same draws.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{KrausChannel, StateOperator};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Factorization};
use crate::scalar::Scalar;

/// Recorded in output metadata.
pub const GENERATOR: &str =
    "chacha20(rand_chacha 0.3; seed_from_u64(seed); stream=sample_index); box-muller normals; u53 uniforms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// |ψ⟩⟨ψ| with ψ Haar-random.
    HaarPure,
    /// λ₁|ψ₁⟩⟨ψ₁| + (1−λ₁)|ψ₂⟩⟨ψ₂|, ψ₁ ⊥ ψ₂, λ₁ uniform on [−1, 1].
    SignedMixture,
    /// As above with λ₁ uniform on [0, 1].
    PhysicalMixture,
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "haar" | "haar-pure" | "haar_pure" => Ok(Self::HaarPure),
            "signed" | "signed-mixture" | "signed_mixture" => Ok(Self::SignedMixture),
            "physical" | "physical-mixture" | "physical_mixture" => Ok(Self::PhysicalMixture),
            other => Err(Error::Config(format!("unknown ensemble '{other}'"))),
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::HaarPure => "haar-pure",
            Self::SignedMixture => "signed-mixture",
            Self::PhysicalMixture => "physical-mixture",
        })
    }
}

/// One independent random stream.
pub struct Substream(ChaCha20Rng);

impl Substream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// A pair of independent standard normals.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        (r * c, r * s)
    }

    /// Standard complex normal (unit variance overall).
    pub fn complex_normal(&mut self) -> Complex<f64> {
        let (a, b) = self.normal_pair();
        Complex::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Haar-random unit vector in dimension `d`.
    pub fn haar_ket(&mut self, d: usize) -> Vec<Complex<f64>> {
        let v: Vec<_> = (0..d).map(|_| self.complex_normal()).collect();
        normalized(v)
    }

    /// Haar-random unitary from Gram–Schmidt on a complex Gaussian matrix.
    pub fn haar_unitary(&mut self, d: usize) -> ComplexMatrix<f64> {
        let mut cols: Vec<Vec<Complex<f64>>> = Vec::with_capacity(d);
        while cols.len() < d {
            let mut v: Vec<_> = (0..d).map(|_| self.complex_normal()).collect();
            for c in &cols {
                let p = inner(c, &v);
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= p * y);
            }
            if norm(&v) > 1e-8 {
                cols.push(normalized(v));
            }
        }
        ComplexMatrix::from_fn(d, |i, j| cols[j][i])
    }

    /// Random CPTP map with `rank` Kraus operators, cut from a Haar unitary
    /// on dimension `d·rank`.
    pub fn random_channel(&mut self, d: usize, rank: usize) -> KrausChannel<f64> {
        let v = self.haar_unitary(d * rank);
        let ops = (0..rank)
            .map(|a| ComplexMatrix::from_fn(d, |i, j| v[(a * d + i, j)]))
            .collect();
        KrausChannel::new(ops, 1e-9).expect("isometry blocks are complete")
    }

    /// Random Hermitian matrix with Gaussian entries.
    pub fn hermitian(&mut self, d: usize) -> ComplexMatrix<f64> {
        let g = ComplexMatrix::from_fn(d, |_, _| self.complex_normal());
        (&g + &g.adjoint()).scale(0.5)
    }

    /// Random full-rank density operator ρ = GG†/Tr[GG†].
    pub fn density(&mut self, d: usize) -> ComplexMatrix<f64> {
        let g = ComplexMatrix::from_fn(d, |_, _| self.complex_normal());
        let r = &g * &g.adjoint();
        let tr = r.trace().re;
        r.scale(1.0 / tr)
    }
}

fn inner(a: &[Complex<f64>], b: &[Complex<f64>]) -> Complex<f64> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex<f64>]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized(v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
    let n = norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub qubits: usize,
    pub count: usize,
    pub seed: u64,
}

/// One generated input with the parameters that produced it.
#[derive(Clone, Debug)]
pub struct Sample<T> {
    pub index: usize,
    pub state: StateOperator<T>,
    /// (λ₁, λ₂) for mixtures.
    pub weights: Option<(f64, f64)>,
    /// |⟨ψ₁|ψ₂⟩| for mixtures.
    pub overlap: Option<f64>,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, qubits: usize, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::Config("ensemble count must be at least 1".into()));
        }
        if qubits == 0 {
            return Err(Error::Config("ensemble qubit count must be positive".into()));
        }
        Ok(Self {
            kind,
            qubits,
            count,
            seed,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    /// Sample `index`; a pure function of (spec, index).
    pub fn sample<T: Scalar>(&self, index: usize) -> Result<Sample<T>> {
        let mut rng = Substream::new(self.seed, index as u64);
        let d = self.dim();
        let f = Factorization::qubits(self.qubits);
        match self.kind {
            EnsembleKind::HaarPure => {
                let ket: Vec<Complex<T>> = rng.haar_ket(d).into_iter().map(cast).collect();
                Ok(Sample {
                    index,
                    state: StateOperator::pure(&ket, f)?,
                    weights: None,
                    overlap: None,
                })
            }
            EnsembleKind::SignedMixture | EnsembleKind::PhysicalMixture => {
                let lo = if self.kind == EnsembleKind::SignedMixture { -1.0 } else { 0.0 };
                let psi1 = rng.haar_ket(d);
                let mut psi2 = rng.haar_ket(d);
                let p = inner(&psi1, &psi2);
                psi2.iter_mut().zip(&psi1).for_each(|(x, y)| *x -= p * y);
                let psi2 = normalized(psi2);
                let l1 = rng.uniform_in(lo, 1.0);
                let l2 = 1.0 - l1;
                let m = &ComplexMatrix::projector(&psi1).scale(l1)
                    + &ComplexMatrix::projector(&psi2).scale(l2);
                let state = StateOperator::new(m.cast(), f, T::lit(T::PREDICATE_TOL))?;
                Ok(Sample {
                    index,
                    state,
                    weights: Some((l1, l2)),
                    overlap: Some(inner(&psi1, &psi2).norm()),
                })
            }
        }
    }

    pub fn samples<T: Scalar>(&self) -> Result<Vec<Sample<T>>> {
        (0..self.count).map(|i| self.sample(i)).collect()
    }
}

fn cast<T: Scalar>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}
