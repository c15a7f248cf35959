use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{default_epsilons, NoiseFamily};
use crate::sampling::{EnsembleKind, EnsembleSpec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown output format '{other}'"))),
        }
    }
}

/// Sweep / audit configuration. Mirrors the CLI flags one-to-one; every
/// field has a default so partial JSON files are accepted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Noise kind string, see [`crate::noise::NoiseKind::parse`].
    pub noise: String,
    pub qubits: usize,
    pub epsilons: Vec<f64>,
    pub ensemble: EnsembleKind,
    pub samples: usize,
    pub seed: u64,
    /// Number of leading qubits in subsystem A; defaults to `qubits / 2`.
    pub cut: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Histogram bins over [0, ν(ε)].
    pub bins: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            noise: "depolarizing".into(),
            qubits: 2,
            epsilons: default_epsilons(),
            ensemble: EnsembleKind::HaarPure,
            samples: 10_000,
            seed: 1,
            cut: None,
            out: None,
            format: OutputFormat::Csv,
            bins: 100,
        }
    }
}

impl SweepConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn cut(&self) -> usize {
        self.cut.unwrap_or(self.qubits / 2)
    }

    pub fn ensemble_spec(&self) -> Result<EnsembleSpec> {
        EnsembleSpec::new(self.ensemble, self.qubits, self.samples, self.seed)
    }

    /// One validated family per ε, in configuration order.
    pub fn families(&self) -> Result<Vec<NoiseFamily>> {
        if self.epsilons.is_empty() {
            return Err(Error::Config("at least one error rate is required".into()));
        }
        self.epsilons
            .iter()
            .map(|&e| {
                let f = NoiseFamily::parse(&self.noise, self.qubits, e)?;
                if e <= 0.0 {
                    return Err(Error::ErrorRate {
                        epsilon: e,
                        max: f.kind().epsilon_max(),
                    });
                }
                Ok(f)
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.families()?;
        self.ensemble_spec()?;
        let cut = self.cut();
        if cut == 0 || cut >= self.qubits {
            return Err(Error::Config(format!(
                "cut {cut} must leave both sides non-empty for {} qubits",
                self.qubits
            )));
        }
        if self.bins == 0 {
            return Err(Error::Config("histogram needs at least one bin".into()));
        }
        Ok(())
    }

    /// Whether the maximally entangled reference is meaningful for this cut.
    pub fn has_reference(&self) -> bool {
        self.qubits.is_multiple_of(2) && self.cut() == self.qubits / 2
    }
}
