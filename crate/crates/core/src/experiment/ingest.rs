use std::path::Path;

use serde::Serialize;

use crate::channel::{json, ChoiOperator};
use crate::error::Result;
use crate::measures::{nu_bounds, separability_necessary, ImplementabilityBounds, SeparabilityVerdict};
use crate::scalar::{Scalar, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapAudit {
    pub is_hp: bool,
    pub is_tp: bool,
    pub is_cp: bool,
    pub min_eigenvalue: f64,
    pub bounds: ImplementabilityBounds<f64>,
    /// [max lower bound, min upper bound], in bits.
    pub nu_interval: [f64; 2],
}

impl MapAudit {
    fn of(c: &ChoiOperator<f64>, tol: &Tolerances<f64>) -> Result<Self> {
        let bounds = nu_bounds(c, tol.predicate)?;
        Ok(Self {
            is_hp: c.is_hp(tol.predicate),
            is_tp: c.is_tp(tol.predicate),
            is_cp: c.is_cp(tol.predicate),
            min_eigenvalue: c.min_eigenvalue(tol.eigen)?,
            nu_interval: [bounds.lower(), bounds.upper()],
            bounds,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IngestReport {
    pub d: usize,
    pub factorization: Vec<usize>,
    pub channel: MapAudit,
    /// Audit of the numerically inverted map; absent when inversion fails.
    pub inverse: Option<MapAudit>,
    pub inverse_error: Option<String>,
    /// Cut used for the separability test (leading subsystems in A).
    pub cut: Option<usize>,
    pub separability: Option<SeparabilityVerdict<f64>>,
}

/// Audits a Choi matrix: predicates, ν bounds of the map and of its inverse,
/// and the separability necessary condition across the middle cut.
pub fn audit_channel(c: &ChoiOperator<f64>) -> Result<IngestReport> {
    let tol = Tolerances::<f64>::default();
    let channel = MapAudit::of(c, &tol)?;
    let (inverse, inverse_error) = match c.inverse(f64::MAX_CONDITION) {
        Ok(inv) => (Some(MapAudit::of(&inv, &tol)?), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let n = c.factorization().len();
    let cut = (n >= 2).then_some(n / 2);
    let separability = match cut {
        Some(k) => Some(separability_necessary(c, k, tol.predicate)?),
        None => None,
    };
    Ok(IngestReport {
        d: c.system_dim(),
        factorization: c.factorization().dims().to_vec(),
        channel,
        inverse,
        inverse_error,
        cut,
        separability,
    })
}

pub fn ingest_channel(path: impl AsRef<Path>) -> Result<IngestReport> {
    audit_channel(&json::read_choi(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Factorization;
    use crate::noise::NoiseFamily;

    #[test]
    fn identity_channel() {
        let r = audit_channel(&ChoiOperator::identity(Factorization::qubits(2))).unwrap();
        assert!(r.channel.is_hp && r.channel.is_tp && r.channel.is_cp);
        let inv = r.inverse.unwrap();
        assert!(inv.nu_interval[0].abs() < 1e-12 && inv.nu_interval[1].abs() < 1e-12);
        assert!(r.separability.unwrap().passes);
    }

    #[test]
    fn dephasing_inverse_sandwich() {
        let f = NoiseFamily::parse("dephasing", 1, 0.2).unwrap();
        let r = audit_channel(&f.build_channel::<f64>().unwrap().choi).unwrap();
        let inv = r.inverse.unwrap();
        assert!(!inv.is_cp);
        assert!(inv.bounds.contains(f.nu_inverse(), 1e-9));
        assert!(r.separability.is_none());
    }

    #[test]
    fn singular_channel_reports_error() {
        let r = audit_channel(&ChoiOperator::completely_depolarizing(Factorization::qubits(1))).unwrap();
        assert!(r.inverse.is_none() && r.inverse_error.is_some());
    }
}
