//! Dense complex linear algebra over a qubit (or general) tensor factorization.
//!
//! Matrices are small (Choi operators of at most a few qubits), so everything
//! is plain row-major storage with straightforward loops.

mod eigen;
mod inverse;
mod matrix;
mod ops;
pub mod pauli;

pub use eigen::{hermitian_eigenvalues, hermitian_eigh, trace_norm, Eigh};
pub use inverse::invert;
pub use matrix::{ComplexMatrix, Factorization};
pub use ops::{partial_trace, partial_transpose, tensor_all, tensor_product};
