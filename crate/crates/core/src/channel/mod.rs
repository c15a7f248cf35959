//! Linear maps on matrices, represented by their Choi operators.

mod choi;
mod decomp;
pub mod json;
mod state;

pub use choi::ChoiOperator;
pub use decomp::{KrausChannel, MixedUnitaryDecomposition};
pub use state::StateOperator;
