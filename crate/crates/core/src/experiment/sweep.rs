use rayon::prelude::*;
use serde::Serialize;

use super::config::SweepConfig;
use crate::channel::{ChoiOperator, StateOperator};
use crate::error::Result;
use crate::measures::{log_negativity, purity, purity_log_ratio};

/// Slack used for every bound check on sweep records.
pub const BOUND_TOL: f64 = 1e-9;

/// One (ε, input) evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub epsilon: f64,
    /// 0 is the maximally entangled reference when present; ensemble sample
    /// `k` (drawn from stream `k`) is recorded as `k + 1` in that case and
    /// as `k` otherwise.
    pub sample_index: usize,
    pub reference: bool,
    pub en_in: f64,
    pub en_out: f64,
    /// E_N(out) − E_N(in), in bits.
    pub delta: f64,
    pub purity_in: f64,
    pub purity_out: f64,
    pub physical_in: bool,
    /// log₂[(P_out d − 1)/(P_in d − 1)]; `None` when the input is maximally mixed.
    pub purity_log_ratio: Option<f64>,
}

impl SweepRecord {
    pub fn abs_delta(&self) -> f64 {
        self.delta.abs()
    }

    /// Whether the ratio column holds the degenerate sentinel.
    pub fn degenerate(&self) -> bool {
        self.purity_log_ratio.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
}

impl Stats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Some(Self {
            count: v.len(),
            min: v[0],
            max: v[v.len() - 1],
            mean: v.iter().sum::<f64>() / v.len() as f64,
            p05: q(0.05),
            p25: q(0.25),
            p50: q(0.5),
            p75: q(0.75),
            p95: q(0.95),
        })
    }
}

/// Uniform-bin density histogram over `[lo, hi]`. Values outside the range
/// are counted in `underflow` / `overflow` and excluded from the densities,
/// which integrate to 1 over the in-range values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub counts: Vec<usize>,
    pub underflow: usize,
    pub overflow: usize,
}

impl Histogram {
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Self {
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|k| lo + width * k as f64).collect();
        let mut counts = vec![0usize; bins];
        let (mut underflow, mut overflow) = (0, 0);
        for &x in values {
            if x < lo {
                underflow += 1;
            } else if x > hi {
                overflow += 1;
            } else {
                let k = (((x - lo) / width) as usize).min(bins - 1);
                counts[k] += 1;
            }
        }
        let inside: usize = counts.iter().sum();
        let densities = counts
            .iter()
            .map(|&c| if inside == 0 { 0.0 } else { c as f64 / (inside as f64 * width) })
            .collect();
        Self {
            edges,
            densities,
            counts,
            underflow,
            overflow,
        }
    }

    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    /// Σ density·width; 1 unless the range is empty of samples.
    pub fn area(&self) -> f64 {
        self.densities.iter().sum::<f64>() * self.bin_width()
    }

    /// Centre of the fullest bin (first one on ties).
    pub fn peak(&self) -> f64 {
        let (k, _) = self
            .counts
            .iter()
            .enumerate()
            .fold((0, 0), |best, (k, &c)| if c > best.1 { (k, c) } else { best });
        0.5 * (self.edges[k] + self.edges[k + 1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonSummary {
    pub epsilon: f64,
    /// Ensemble samples (the reference is excluded from the distribution).
    pub samples: usize,
    pub physical_samples: usize,
    /// Distribution of |ΔE_N| over the ensemble.
    pub abs_delta: Option<Stats>,
    pub histogram: Histogram,
    pub nu: f64,
    pub mu: f64,
    pub max_entangled_delta: Option<f64>,
    /// Simulated ΔE_N of the reference input.
    pub reference_delta: Option<f64>,
    /// Physical records with |ΔE_N| > ν + tol.
    pub bound_violation_count: usize,
    /// Physical records with ΔE_N > tol.
    pub increase_count: usize,
    /// Physical ensemble records with |ΔE_N| > μ.
    pub mu_exceed_count: usize,
    /// Fraction of physical ensemble records with |ΔE_N| ≤ μ.
    pub mu_within_fraction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub noise: String,
    pub qubits: usize,
    pub cut: usize,
    pub per_epsilon: Vec<EpsilonSummary>,
}

impl SweepSummary {
    /// Total Corollary-type violations (bound exceeded or negativity increased).
    pub fn violations(&self) -> usize {
        self.per_epsilon
            .iter()
            .map(|s| s.bound_violation_count + s.increase_count)
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

struct Input {
    index: usize,
    reference: bool,
    state: StateOperator<f64>,
    en: f64,
    purity: f64,
}

fn evaluate(
    choi: &ChoiOperator<f64>,
    epsilon: f64,
    input: &Input,
    cut: usize,
) -> Result<SweepRecord> {
    let out = choi.apply(&input.state, BOUND_TOL)?;
    let en_out = log_negativity(&out, cut)?;
    let purity_out = purity(&out);
    let d = input.state.dim();
    Ok(SweepRecord {
        epsilon,
        sample_index: input.index,
        reference: input.reference,
        en_in: input.en,
        en_out,
        delta: en_out - input.en,
        purity_in: input.purity,
        purity_out,
        physical_in: input.state.is_physical(),
        purity_log_ratio: purity_log_ratio(purity_out, input.purity, d, 1e-12),
    })
}

fn inputs(cfg: &SweepConfig) -> Result<Vec<Input>> {
    let spec = cfg.ensemble_spec()?;
    let cut = cfg.cut();
    let offset = usize::from(cfg.has_reference());
    let mut all: Vec<Input> = Vec::with_capacity(cfg.samples + offset);
    if cfg.has_reference() {
        let state = StateOperator::max_entangled(cfg.qubits)?;
        all.push(Input {
            index: 0,
            reference: true,
            en: log_negativity(&state, cut)?,
            purity: purity(&state),
            state,
        });
    }
    let ensemble: Vec<Input> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| -> Result<Input> {
            let s = spec.sample::<f64>(k)?;
            Ok(Input {
                index: k + offset,
                reference: false,
                en: log_negativity(&s.state, cut)?,
                purity: purity(&s.state),
                state: s.state,
            })
        })
        .collect::<Result<_>>()?;
    all.extend(ensemble);
    Ok(all)
}

/// Runs the ε-sweep. Inputs are shared across ε; samples are evaluated in
/// parallel and gathered in index order, so the output depends only on the
/// configuration.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let families = cfg.families()?;
    let cut = cfg.cut();
    let inputs = inputs(cfg)?;
    let mut records = Vec::with_capacity(inputs.len() * families.len());
    let mut per_epsilon = Vec::with_capacity(families.len());
    for fam in &families {
        let choi = fam.build_channel::<f64>()?.choi;
        let eps = fam.epsilon();
        let batch: Vec<SweepRecord> = inputs
            .par_iter()
            .map(|inp| evaluate(&choi, eps, inp, cut))
            .collect::<Result<_>>()?;
        let nu = fam.nu_inverse();
        let mu = fam.mu_inverse();
        let max_ent = if cfg.has_reference() {
            Some(fam.max_entangled_delta()?)
        } else {
            None
        };
        per_epsilon.push(summarize(&batch, eps, nu, mu, max_ent, cfg.bins));
        records.extend(batch);
    }
    Ok(SweepOutput {
        records,
        summary: SweepSummary {
            noise: families[0].kind().to_string(),
            qubits: cfg.qubits,
            cut,
            per_epsilon,
        },
    })
}

fn summarize(
    batch: &[SweepRecord],
    epsilon: f64,
    nu: f64,
    mu: f64,
    max_entangled_delta: Option<f64>,
    bins: usize,
) -> EpsilonSummary {
    let ensemble: Vec<&SweepRecord> = batch.iter().filter(|r| !r.reference).collect();
    let abs: Vec<f64> = ensemble.iter().map(|r| r.abs_delta()).collect();
    let physical: Vec<&&SweepRecord> = ensemble.iter().filter(|r| r.physical_in).collect();
    let within_mu = physical.iter().filter(|r| r.abs_delta() <= mu).count();
    let all_physical = batch.iter().filter(|r| r.physical_in);
    EpsilonSummary {
        epsilon,
        samples: ensemble.len(),
        physical_samples: physical.len(),
        abs_delta: Stats::from_values(&abs),
        histogram: Histogram::new(&abs, 0.0, nu, bins),
        nu,
        mu,
        max_entangled_delta,
        reference_delta: batch.iter().find(|r| r.reference).map(|r| r.delta),
        bound_violation_count: all_physical
            .clone()
            .filter(|r| r.abs_delta() > nu + BOUND_TOL)
            .count(),
        increase_count: all_physical.filter(|r| r.delta > BOUND_TOL).count(),
        mu_exceed_count: physical.len() - within_mu,
        mu_within_fraction: if physical.is_empty() {
            None
        } else {
            Some(within_mu as f64 / physical.len() as f64)
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::EnsembleKind;

    fn cfg(noise: &str, eps: Vec<f64>, samples: usize) -> SweepConfig {
        SweepConfig {
            noise: noise.into(),
            epsilons: eps,
            samples,
            ..Default::default()
        }
    }

    #[test]
    fn histogram_area_and_overflow() {
        let h = Histogram::new(&[0.1, 0.2, 0.25, 0.9, 1.5, -0.1], 0.0, 1.0, 10);
        assert_eq!(h.overflow, 1);
        assert_eq!(h.underflow, 1);
        assert!((h.area() - 1.0).abs() < 1e-12);
        assert_eq!(h.counts[2], 2);
        assert!((h.peak() - 0.25).abs() < 1e-12);
        // Right edge is inclusive.
        assert_eq!(Histogram::new(&[1.0], 0.0, 1.0, 4).counts[3], 1);
    }

    #[test]
    fn stats_percentiles() {
        let s = Stats::from_values(&[3.0, 1.0, 2.0, 4.0, 5.0]).unwrap();
        assert_eq!((s.min, s.max, s.mean, s.p50), (1.0, 5.0, 3.0, 3.0));
        assert!((s.p25 - 2.0).abs() < 1e-12);
        assert!(Stats::from_values(&[]).is_none());
    }

    #[test]
    fn small_sweep_is_consistent() {
        let out = run_sweep(&cfg("depolarizing", vec![0.05, 0.1], 200)).unwrap();
        assert_eq!(out.records.len(), 2 * 201);
        for s in &out.summary.per_epsilon {
            assert_eq!(s.bound_violation_count, 0);
            assert_eq!(s.increase_count, 0);
            assert!((s.histogram.area() - 1.0).abs() < 1e-9);
            assert!((s.reference_delta.unwrap() - s.max_entangled_delta.unwrap()).abs() < 1e-10);
            assert!(s.abs_delta.as_ref().unwrap().max <= s.reference_delta.unwrap().abs() + 1e-10);
        }
        for r in &out.records {
            assert_eq!(r.delta, r.en_out - r.en_in);
        }
    }

    #[test]
    fn zz_reference_is_unchanged_and_continuity() {
        let out = run_sweep(&cfg("pauli:zz", vec![0.2], 50)).unwrap();
        assert!(out.records[0].reference && out.records[0].delta.abs() < 1e-12);
        let out = run_sweep(&cfg("dephasing", vec![1e-6], 200)).unwrap();
        assert!(out.summary.per_epsilon[0].abs_delta.as_ref().unwrap().mean < 1e-4);
    }

    #[test]
    fn signed_mixtures_flag_nonphysical() {
        let mut c = cfg("depolarizing", vec![0.1], 300);
        c.ensemble = EnsembleKind::SignedMixture;
        let out = run_sweep(&c).unwrap();
        assert!(out.records.iter().any(|r| !r.physical_in));
        assert_eq!(out.summary.violations(), 0);
    }

    #[test]
    fn deterministic() {
        let c = cfg("ad", vec![0.1, 0.3], 100);
        let a = run_sweep(&c).unwrap();
        let b = run_sweep(&c).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.summary, b.summary);
    }
}
