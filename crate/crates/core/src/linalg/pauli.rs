//! Pauli matrices and n-qubit Pauli strings.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{tensor_all, ComplexMatrix};
use crate::scalar::Scalar;

/// Single-qubit Pauli operator σ₀…σ₃.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'i' | '0' => Some(Pauli::I),
            'x' | '1' => Some(Pauli::X),
            'y' | '2' => Some(Pauli::Y),
            'z' | '3' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        ['i', 'x', 'y', 'z'][self.index()]
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

pub fn pauli<T: Scalar>(p: Pauli) -> ComplexMatrix<T> {
    let (o, z) = (Complex::<T>::one(), Complex::<T>::zero());
    let i = Complex::new(T::zero(), T::one());
    let data = match p {
        Pauli::I => vec![o, z, z, o],
        Pauli::X => vec![z, o, o, z],
        Pauli::Y => vec![z, -i, i, z],
        Pauli::Z => vec![o, z, z, -o],
    };
    ComplexMatrix::from_vec(2, data).expect("2x2 Pauli")
}

/// σ_{α₁} ⊗ … ⊗ σ_{αₙ}, qubit 0 most significant.
pub fn pauli_string<T: Scalar>(axes: &[Pauli]) -> ComplexMatrix<T> {
    let mats: Vec<ComplexMatrix<T>> = axes.iter().map(|&p| pauli(p)).collect();
    tensor_all(&mats)
}

/// All 4ⁿ label tuples in lexicographic order; the all-identity string is first.
pub fn all_labels(n: usize) -> Vec<Vec<Pauli>> {
    labels_over(n, &Pauli::ALL)
}

/// The 2ⁿ strings built from σ₀ and σ₃ only; the all-identity string is first.
pub fn z_labels(n: usize) -> Vec<Vec<Pauli>> {
    labels_over(n, &[Pauli::I, Pauli::Z])
}

fn labels_over(n: usize, alphabet: &[Pauli]) -> Vec<Vec<Pauli>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |&p| {
                    let mut s = prefix.clone();
                    s.push(p);
                    s
                })
            })
            .collect();
    }
    out
}
