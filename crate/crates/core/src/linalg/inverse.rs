use num_complex::Complex;
use num_traits::{One, Zero};

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Gauss-Jordan inversion with partial pivoting. The result is rejected when
/// the 1-norm condition number ‖A‖₁‖A⁻¹‖₁ exceeds `max_condition`.
pub fn invert<T: Scalar>(m: &ComplexMatrix<T>, max_condition: T) -> Result<ComplexMatrix<T>> {
    let n = m.dim();
    let mut a = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    let norm = m.one_norm();
    let singular = || Error::NotInvertible {
        condition: f64::INFINITY,
    };
    if norm.is_zero() {
        return Err(singular());
    }

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[(i, col)]
                    .norm()
                    .partial_cmp(&a[(j, col)].norm())
                    .expect("finite matrix entries")
            })
            .expect("non-empty pivot range");
        let p = a[(pivot, col)];
        if p.norm() <= T::min_positive_value() {
            return Err(singular());
        }
        if pivot != col {
            for k in 0..n {
                let (x, y) = (a[(col, k)], a[(pivot, k)]);
                a[(col, k)] = y;
                a[(pivot, k)] = x;
                let (x, y) = (inv[(col, k)], inv[(pivot, k)]);
                inv[(col, k)] = y;
                inv[(pivot, k)] = x;
            }
        }
        let scale = Complex::<T>::one() / p;
        for k in 0..n {
            a[(col, k)] *= scale;
            inv[(col, k)] *= scale;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[(row, col)];
            if factor.is_zero() {
                continue;
            }
            for k in 0..n {
                let ak = a[(col, k)];
                let ik = inv[(col, k)];
                a[(row, k)] -= factor * ak;
                inv[(row, k)] -= factor * ik;
            }
        }
    }

    let condition = norm * inv.one_norm();
    if !condition.is_finite() || condition > max_condition {
        return Err(Error::NotInvertible {
            condition: condition.to_f64_lossy(),
        });
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let i = ComplexMatrix::<f64>::identity(3);
        assert_eq!(invert(&i, 1e12).unwrap(), i);
        let d = ComplexMatrix::<f64>::from_diagonal(&[2.0, 4.0]);
        let inv = invert(&d, 1e12).unwrap();
        assert!(inv.max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.25])) < 1e-16);
    }

    #[test]
    fn needs_pivoting() {
        let m = ComplexMatrix::<f64>::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let inv = invert(&m, 1e12).unwrap();
        assert_eq!(inv, m);
    }

    #[test]
    fn singular_and_ill_conditioned() {
        let s = ComplexMatrix::<f64>::from_real(2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(invert(&s, 1e12), Err(Error::NotInvertible { .. })));
        let ill = ComplexMatrix::<f64>::from_diagonal(&[1.0, 1e-14]);
        match invert(&ill, 1e12) {
            Err(Error::NotInvertible { condition }) => assert!(condition > 1e13),
            other => panic!("expected NotInvertible, got {other:?}"),
        }
    }
}
