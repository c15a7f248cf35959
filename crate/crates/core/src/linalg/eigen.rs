//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching unit eigenvectors stored as
/// the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct Eigh<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Scalar> Eigh<T> {
    /// V diag(λ) V†
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * self.values[k])
                .fold(Complex::zero(), |a, b| a + b)
        })
    }
}

fn off_diagonal_norm<T: Scalar>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<T: Scalar>(m: &ComplexMatrix<T>, tol: T, want_vectors: bool) -> Result<Eigh<T>> {
    let dev = m.hermiticity_deviation();
    let scale = m.frobenius_norm().max(T::one());
    if dev > tol.max(T::lit(T::PREDICATE_TOL)) * scale {
        return Err(Error::NotHermitian(dev.to_f64_lossy()));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = if want_vectors {
        ComplexMatrix::identity(n)
    } else {
        ComplexMatrix::zeros(0)
    };
    // Absolute threshold, floored at what the precision can resolve.
    let threshold = tol.max(T::epsilon() * scale * T::lit(n as f64));

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off.to_f64_lossy(),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                let g_abs = g.norm();
                if g_abs <= T::min_positive_value() {
                    continue;
                }
                let phase = g / g_abs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (T::lit(2.0) * g_abs);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // Unitary acting on the (p, q) plane:
                // [[c, s], [-s e^{-iφ}, c e^{-iφ}]] with e^{iφ} = g/|g|.
                let vpp = Complex::new(c, T::zero());
                let vpq = Complex::new(s, T::zero());
                let vqp = phase.conj() * (-s);
                let vqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * vpp + akq * vqp;
                    a[(k, q)] = akp * vpq + akq * vqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

                if want_vectors {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * vpp + vkq * vqp;
                        v[(k, q)] = vkp * vpq + vkq * vqq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = if want_vectors {
        ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])])
    } else {
        ComplexMatrix::from_fn(0, |_, _| Complex::one())
    };
    Ok(Eigh { values, vectors })
}

/// Ascending eigenvalues of a Hermitian matrix. `tol` is the convergence
/// threshold on the off-diagonal Frobenius norm.
pub fn hermitian_eigenvalues<T: Scalar>(m: &ComplexMatrix<T>, tol: T) -> Result<Vec<T>> {
    jacobi(m, tol, false).map(|e| e.values)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigh<T: Scalar>(m: &ComplexMatrix<T>, tol: T) -> Result<Eigh<T>> {
    jacobi(m, tol, true)
}

/// Trace norm Σ|λᵢ| of a Hermitian matrix. Non-Hermitian input is rejected.
pub fn trace_norm<T: Scalar>(m: &ComplexMatrix<T>, tol: T) -> Result<T> {
    if !m.is_hermitian(T::lit(T::PREDICATE_TOL).max(tol) * m.frobenius_norm().max(T::one())) {
        return Err(Error::Unsupported(format!(
            "trace norm of a non-Hermitian matrix (deviation {:e})",
            m.hermiticity_deviation().to_f64_lossy()
        )));
    }
    Ok(hermitian_eigenvalues(m, tol)?.into_iter().map(T::abs).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::{pauli, Pauli};

    #[test]
    fn pauli_z_spectrum() {
        let v = hermitian_eigenvalues(&pauli::<f64>(Pauli::Z), 1e-12).unwrap();
        assert_eq!(v, vec![-1.0, 1.0]);
        assert!((trace_norm(&pauli::<f64>(Pauli::Z), 1e-12).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn identity_spectrum() {
        let v = hermitian_eigenvalues(&ComplexMatrix::<f64>::identity(5), 1e-12).unwrap();
        assert!(v.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn pauli_y_vectors_reconstruct() {
        let y = pauli::<f64>(Pauli::Y);
        let e = hermitian_eigh(&y, 1e-12).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::<f64>::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m, 1e-12), Err(Error::NotHermitian(_))));
        assert!(matches!(trace_norm(&m, 1e-12), Err(Error::Unsupported(_))));
    }

    #[test]
    fn single_precision_converges() {
        let m = ComplexMatrix::<f32>::from_fn(3, |i, j| {
            Complex::new((i + j) as f32 * 0.5, if i < j { 0.25 } else if i > j { -0.25 } else { 0.0 })
        });
        let e = hermitian_eigh(&m, 1e-6).unwrap();
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-5);
    }
}
