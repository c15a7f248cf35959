use num_complex::Complex;
use num_traits::Zero;

use super::{ComplexMatrix, Factorization};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Kronecker product `a ⊗ b`, with `a` the more significant factor.
pub fn tensor_product<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |r, c| a[(r / db, c / db)] * b[(r % db, c % db)])
}

/// Kronecker product of a sequence of matrices, left to right.
pub fn tensor_all<'a, T: Scalar>(
    factors: impl IntoIterator<Item = &'a ComplexMatrix<T>>,
) -> ComplexMatrix<T> {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, m| tensor_product(&acc, m))
}

fn check_indices(f: &Factorization, indices: &[usize]) -> Result<()> {
    for &i in indices {
        if i >= f.len() {
            return Err(Error::SubsystemIndex {
                index: i,
                count: f.len(),
            });
        }
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems retain
/// their original relative order.
pub fn partial_trace<T: Scalar>(
    m: &ComplexMatrix<T>,
    f: &Factorization,
    keep: &[usize],
) -> Result<ComplexMatrix<T>> {
    f.check(m.dim())?;
    check_indices(f, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..f.len()).filter(|i| !kept.contains(i)).collect();

    let kept_f = Factorization::new(kept.iter().map(|&i| f.dims()[i]).collect())
        .unwrap_or_else(|_| Factorization::single(1));
    let kept_dim = if kept.is_empty() { 1 } else { kept_f.total_dim() };
    let mut out = ComplexMatrix::zeros(kept_dim);

    let n = f.len();
    let mut rd = vec![0; n];
    let mut cd = vec![0; n];
    let mut kr = vec![0; kept.len()];
    let mut kc = vec![0; kept.len()];
    for r in 0..m.dim() {
        f.digits(r, &mut rd);
        for c in 0..m.dim() {
            f.digits(c, &mut cd);
            if traced.iter().any(|&t| rd[t] != cd[t]) {
                continue;
            }
            for (slot, &k) in kept.iter().enumerate() {
                kr[slot] = rd[k];
                kc[slot] = cd[k];
            }
            let (i, j) = if kept.is_empty() {
                (0, 0)
            } else {
                (kept_f.flat(&kr), kept_f.flat(&kc))
            };
            out[(i, j)] += m[(r, c)];
        }
    }
    Ok(out)
}

/// Transposes the listed subsystems, leaving the others untouched.
pub fn partial_transpose<T: Scalar>(
    m: &ComplexMatrix<T>,
    f: &Factorization,
    which: &[usize],
) -> Result<ComplexMatrix<T>> {
    f.check(m.dim())?;
    check_indices(f, which)?;
    let n = f.len();
    let mut out = ComplexMatrix::from_fn(m.dim(), |_, _| Complex::zero());
    let mut rd = vec![0; n];
    let mut cd = vec![0; n];
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            f.digits(r, &mut rd);
            f.digits(c, &mut cd);
            for &w in which {
                std::mem::swap(&mut rd[w], &mut cd[w]);
            }
            out[(f.flat(&rd), f.flat(&cd))] = m[(r, c)];
        }
    }
    Ok(out)
}
