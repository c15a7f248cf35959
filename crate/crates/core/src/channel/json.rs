//! JSON layout for Choi matrices:
//!
//! ```json
//! { "d": 2, "factorization": [2], "entries": [[1.0, 0.0], [0.0, 0.0], ...] }
//! ```
//!
//! `d` is the system dimension, `factorization` its subsystem dimensions
//! (product = d), and `entries` the `d⁴` entries of the `d² × d²` Choi matrix in
//! row-major order as `[re, im]` pairs, index order (σ input ⊗ τ output).

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::ChoiOperator;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Factorization};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChoiFile {
    pub d: usize,
    pub factorization: Vec<usize>,
    pub entries: Vec<[f64; 2]>,
}

impl ChoiFile {
    pub fn from_choi(c: &ChoiOperator<f64>) -> Self {
        Self {
            d: c.system_dim(),
            factorization: c.factorization().dims().to_vec(),
            entries: c.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_choi(self) -> Result<ChoiOperator<f64>> {
        let f = Factorization::new(self.factorization)?;
        if f.total_dim() != self.d {
            return Err(Error::Factorization {
                dims: f.dims().to_vec(),
                dim: self.d,
            });
        }
        let n = self.d * self.d;
        if self.entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: self.entries.len(),
            });
        }
        let data = self.entries.iter().map(|[re, im]| Complex::new(*re, *im)).collect();
        ChoiOperator::new(ComplexMatrix::from_vec(n, data)?, f)
    }
}

pub fn to_json(c: &ChoiOperator<f64>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ChoiFile::from_choi(c))?)
}

pub fn from_json(s: &str) -> Result<ChoiOperator<f64>> {
    serde_json::from_str::<ChoiFile>(s)?.into_choi()
}

pub fn read_choi(path: impl AsRef<Path>) -> Result<ChoiOperator<f64>> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write_choi(c: &ChoiOperator<f64>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(c)?)?;
    Ok(())
}
