#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qimpl::linalg::Factorization;
use qimpl::{Matrix, State};

pub fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

pub fn square(d: usize) -> impl Strategy<Value = Matrix> {
    complex_vec(d * d).prop_map(move |v| Matrix::from_vec(d, v).unwrap())
}

pub fn hermitian(d: usize) -> impl Strategy<Value = Matrix> {
    square(d).prop_map(|a| (&a + &a.adjoint()).scale(0.5))
}

/// Hermitian with unit trace; usually has negative eigenvalues.
pub fn unit_trace_hermitian(d: usize) -> impl Strategy<Value = Matrix> {
    hermitian(d).prop_map(move |h| {
        let shift = (1.0 - h.trace().re) / d as f64;
        &h + &Matrix::identity(d).scale(shift)
    })
}

/// A A† normalized; full rank almost surely.
pub fn density(d: usize) -> impl Strategy<Value = Matrix> {
    square(d).prop_map(|a| {
        let p = &a * &a.adjoint();
        let t = p.trace().re;
        p.scale(1.0 / t)
    })
}

pub fn ket(d: usize) -> impl Strategy<Value = Vec<Complex64>> {
    complex_vec(d).prop_filter("nonzero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
}

/// Gram–Schmidt on the columns of a random square matrix.
pub fn unitary(d: usize) -> impl Strategy<Value = Matrix> {
    complex_vec(d * d).prop_filter_map("degenerate", move |v| gram_schmidt(d, &v))
}

pub fn gram_schmidt(d: usize, v: &[Complex64]) -> Option<Matrix> {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for c in 0..d {
        let mut x: Vec<Complex64> = (0..d).map(|r| v[r * d + c]).collect();
        for q in &cols {
            let dot: Complex64 = q.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi -= dot * qi;
            }
        }
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            return None;
        }
        cols.push(x.into_iter().map(|z| z / norm).collect());
    }
    Some(Matrix::from_fn(d, |r, c| cols[c][r]))
}

pub fn physical_state(n: usize) -> impl Strategy<Value = State> {
    density(1 << n).prop_map(move |m| State::new(m, Factorization::qubits(n), 1e-9).unwrap())
}

pub fn pure_state(n: usize) -> impl Strategy<Value = State> {
    ket(1 << n).prop_map(move |k| State::pure(&k, Factorization::qubits(n)).unwrap())
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Closed-form spectrum of a 2×2 Hermitian matrix, ascending.
pub fn eig2(m: &Matrix) -> [f64; 2] {
    let (a, d, b) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
    let mid = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mid - r, mid + r]
}
