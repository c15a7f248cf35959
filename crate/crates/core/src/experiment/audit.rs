use rayon::prelude::*;
use serde::Serialize;

use super::config::SweepConfig;
use super::sweep::BOUND_TOL;
use crate::error::{Error, Result};
use crate::measures::{bloch_vector, purity, purity_log_ratio};
use crate::noise::NoiseKind;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PurityRecord {
    pub epsilon: f64,
    pub sample_index: usize,
    pub physical_in: bool,
    pub purity_in: f64,
    pub purity_out: f64,
    /// `None` is the degenerate sentinel (maximally mixed input).
    pub ratio: Option<f64>,
    /// |r(out)|/|r(in)|; `None` when |r(in)| = 0.
    pub bloch_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PurityEpsilonSummary {
    pub epsilon: f64,
    pub nu: f64,
    /// −2ν, the lower end of the admissible ratio band.
    pub lower_bound: f64,
    pub checked: usize,
    pub degenerate: usize,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    /// Physical records outside [−2ν, 0].
    pub violations: usize,
    /// Depolarizing only: records whose ratio differs from 2 log₂(1−ε) by more than tol.
    pub exact_ratio_violations: Option<usize>,
    /// Dephasing only: records with |r(out)|/|r(in)| outside [1−ε, 1].
    pub shrinkage_violations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PurityAuditSummary {
    pub noise: String,
    pub qubits: usize,
    pub per_epsilon: Vec<PurityEpsilonSummary>,
}

impl PurityAuditSummary {
    pub fn violations(&self) -> usize {
        self.per_epsilon
            .iter()
            .map(|s| {
                s.violations
                    + s.exact_ratio_violations.unwrap_or(0)
                    + s.shrinkage_violations.unwrap_or(0)
            })
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct PurityAuditOutput {
    pub records: Vec<PurityRecord>,
    pub summary: PurityAuditSummary,
}

/// Audits the purity-ratio band −2ν ≤ log₂[(P(ρ)d−1)/(P(ρ₀)d−1)] ≤ 0 over the
/// configured ensemble. Only mixed-unitary families qualify; amplitude
/// damping is refused.
pub fn run_purity_audit(cfg: &SweepConfig) -> Result<PurityAuditOutput> {
    let families = cfg.families()?;
    let kind = families[0].kind().clone();
    if kind == NoiseKind::AmplitudeDamping {
        return Err(Error::Unsupported(
            "purity audit needs a channel that mixes orthogonal unitaries; \
             amplitude damping is not of that form"
                .into(),
        ));
    }
    let spec = cfg.ensemble_spec()?;
    let inputs = (0..cfg.samples)
        .into_par_iter()
        .map(|k| spec.sample::<f64>(k).map(|s| s.state))
        .collect::<Result<Vec<_>>>()?;
    let d = spec.dim();
    let mut records = Vec::new();
    let mut per_epsilon = Vec::new();
    for fam in &families {
        let choi = fam.build_channel::<f64>()?.choi;
        let eps = fam.epsilon();
        let batch = inputs
            .par_iter()
            .enumerate()
            .map(|(k, rho)| -> Result<PurityRecord> {
                let out = choi.apply(rho, BOUND_TOL)?;
                let (p_in, p_out) = (purity(rho), purity(&out));
                let r_in = bloch_vector(rho)?.norm();
                let r_out = bloch_vector(&out)?.norm();
                Ok(PurityRecord {
                    epsilon: eps,
                    sample_index: k,
                    physical_in: rho.is_physical(),
                    purity_in: p_in,
                    purity_out: p_out,
                    ratio: purity_log_ratio(p_out, p_in, d, 1e-12),
                    bloch_ratio: (r_in > 1e-12).then(|| r_out / r_in),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let nu = fam.nu_inverse();
        let lower = -2.0 * nu;
        let physical = || batch.iter().filter(|r| r.physical_in);
        let ratios: Vec<f64> = physical().filter_map(|r| r.ratio).collect();
        let exact = 2.0 * (1.0 - eps).log2();
        per_epsilon.push(PurityEpsilonSummary {
            epsilon: eps,
            nu,
            lower_bound: lower,
            checked: ratios.len(),
            degenerate: physical().filter(|r| r.ratio.is_none()).count(),
            min_ratio: ratios.iter().copied().reduce(f64::min),
            max_ratio: ratios.iter().copied().reduce(f64::max),
            violations: ratios
                .iter()
                .filter(|&&x| x < lower - BOUND_TOL || x > BOUND_TOL)
                .count(),
            exact_ratio_violations: (kind == NoiseKind::Depolarizing).then(|| {
                ratios.iter().filter(|&&x| (x - exact).abs() > BOUND_TOL).count()
            }),
            shrinkage_violations: (kind == NoiseKind::Dephasing).then(|| {
                physical()
                    .filter_map(|r| r.bloch_ratio)
                    .filter(|&b| b < 1.0 - eps - BOUND_TOL || b > 1.0 + BOUND_TOL)
                    .count()
            }),
        });
        records.extend(batch);
    }
    Ok(PurityAuditOutput {
        records,
        summary: PurityAuditSummary {
            noise: kind.to_string(),
            qubits: cfg.qubits,
            per_epsilon,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(noise: &str, qubits: usize, eps: Vec<f64>) -> SweepConfig {
        SweepConfig {
            noise: noise.into(),
            qubits,
            epsilons: eps,
            samples: 100,
            ..Default::default()
        }
    }

    #[test]
    fn refuses_amplitude_damping() {
        assert!(matches!(run_purity_audit(&cfg("ad", 2, vec![0.1])), Err(Error::Unsupported(_))));
    }

    #[test]
    fn depolarizing_ratio_is_exact() {
        let out = run_purity_audit(&cfg("depolarizing", 2, vec![0.1, 0.2])).unwrap();
        assert_eq!(out.summary.violations(), 0);
        for s in &out.summary.per_epsilon {
            let exact = 2.0 * (1.0 - s.epsilon).log2();
            assert!((s.min_ratio.unwrap() - exact).abs() < 1e-9);
            assert_eq!(s.exact_ratio_violations, Some(0));
        }
    }

    #[test]
    fn dephasing_single_qubit_band() {
        let e: f64 = 0.3;
        let out = run_purity_audit(&cfg("dephasing", 1, vec![e])).unwrap();
        let s = &out.summary.per_epsilon[0];
        assert!(s.min_ratio.unwrap() >= -2.0 * (1.0 / (1.0 - e)).log2() - 1e-9);
        assert_eq!(s.shrinkage_violations, Some(0));
        assert_eq!(out.summary.violations(), 0);
    }
}
