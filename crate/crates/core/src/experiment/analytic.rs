use serde::Serialize;

use crate::error::Result;
use crate::noise::NoiseFamily;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticRow {
    pub noise: String,
    pub qubits: usize,
    pub epsilon: f64,
    pub nu: f64,
    pub mu: f64,
    /// ΔE_N of the maximally entangled state; `None` for odd qubit counts.
    pub max_entangled_delta: Option<f64>,
}

/// Closed-form ν, μ and maximally-entangled ΔE_N for every (kind, ε).
/// Error rates at or beyond a family's pole are skipped.
pub fn analytic_table(kinds: &[String], qubits: usize, epsilons: &[f64]) -> Result<Vec<AnalyticRow>> {
    let mut rows = Vec::new();
    for kind in kinds {
        // Validate the kind once even if every ε is out of range.
        NoiseFamily::parse(kind, qubits, 0.0)?;
        for &e in epsilons {
            let Ok(f) = NoiseFamily::parse(kind, qubits, e) else {
                continue;
            };
            rows.push(AnalyticRow {
                noise: f.kind().to_string(),
                qubits,
                epsilon: e,
                nu: f.nu_inverse(),
                mu: f.mu_inverse(),
                max_entangled_delta: f.max_entangled_delta().ok(),
            });
        }
    }
    Ok(rows)
}
