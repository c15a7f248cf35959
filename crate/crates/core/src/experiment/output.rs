//! CSV and JSON writers. Output contains no timestamps or host details, so
//! identical configurations produce byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::audit::PurityAuditOutput;
use super::config::{OutputFormat, SweepConfig};
use super::sweep::SweepOutput;
use super::analytic::AnalyticRow;
use crate::error::Result;
use crate::sampling::GENERATOR;

/// Placeholder for absent values in CSV cells.
pub const NA: &str = "NA";

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub generator: &'static str,
    pub seed: u64,
    pub ensemble: String,
    /// Configuration echo; the output path is omitted.
    pub config: SweepConfig,
}

impl Metadata {
    pub fn new(cfg: &SweepConfig) -> Self {
        Self {
            tool: "qimpl",
            version: env!("CARGO_PKG_VERSION"),
            generator: GENERATOR,
            seed: cfg.seed,
            ensemble: cfg.ensemble.to_string(),
            config: SweepConfig {
                out: None,
                ..cfg.clone()
            },
        }
    }

    fn csv_header(&self) -> Result<String> {
        let mut s = String::new();
        let _ = writeln!(s, "# tool: {} {}", self.tool, self.version);
        let _ = writeln!(s, "# generator: {}", self.generator);
        let _ = writeln!(s, "# seed: {}", self.seed);
        let _ = writeln!(s, "# ensemble: {}", self.ensemble);
        let _ = writeln!(s, "# config: {}", serde_json::to_string(&self.config)?);
        Ok(s)
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| NA.to_string(), |x| x.to_string())
}

pub fn sweep_csv(cfg: &SweepConfig, out: &SweepOutput) -> Result<String> {
    let mut s = Metadata::new(cfg).csv_header()?;
    s.push_str(
        "epsilon,sample_index,reference,en_in,en_out,delta,abs_delta,purity_in,purity_out,physical_in,purity_log_ratio,degenerate\n",
    );
    for r in &out.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.epsilon,
            r.sample_index,
            r.reference,
            r.en_in,
            r.en_out,
            r.delta,
            r.abs_delta(),
            r.purity_in,
            r.purity_out,
            r.physical_in,
            opt(r.purity_log_ratio),
            r.degenerate()
        );
    }
    Ok(s)
}

pub fn sweep_json(cfg: &SweepConfig, out: &SweepOutput) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a> {
        metadata: Metadata,
        summary: &'a super::sweep::SweepSummary,
        records: &'a [super::sweep::SweepRecord],
    }
    Ok(serde_json::to_string_pretty(&Doc {
        metadata: Metadata::new(cfg),
        summary: &out.summary,
        records: &out.records,
    })?)
}

pub fn summary_json<S: Serialize>(cfg: &SweepConfig, summary: &S) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a, S> {
        metadata: Metadata,
        summary: &'a S,
    }
    Ok(serde_json::to_string_pretty(&Doc {
        metadata: Metadata::new(cfg),
        summary,
    })?)
}

/// Path of the summary written next to a CSV file: `<path>.summary.json`.
pub fn summary_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".summary.json");
    PathBuf::from(name)
}

/// Writes a sweep. JSON holds metadata, summary and records in one document;
/// CSV holds the records and gets a sibling summary file. Returns the paths
/// written.
pub fn write_sweep(cfg: &SweepConfig, out: &SweepOutput, path: &Path) -> Result<Vec<PathBuf>> {
    match cfg.format {
        OutputFormat::Json => {
            std::fs::write(path, sweep_json(cfg, out)?)?;
            Ok(vec![path.to_path_buf()])
        }
        OutputFormat::Csv => {
            std::fs::write(path, sweep_csv(cfg, out)?)?;
            let side = summary_path(path);
            std::fs::write(&side, summary_json(cfg, &out.summary)?)?;
            Ok(vec![path.to_path_buf(), side])
        }
    }
}

pub fn purity_csv(cfg: &SweepConfig, out: &PurityAuditOutput) -> Result<String> {
    let mut s = Metadata::new(cfg).csv_header()?;
    s.push_str("epsilon,sample_index,physical_in,purity_in,purity_out,ratio,bloch_ratio,degenerate\n");
    for r in &out.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.epsilon,
            r.sample_index,
            r.physical_in,
            r.purity_in,
            r.purity_out,
            opt(r.ratio),
            opt(r.bloch_ratio),
            r.ratio.is_none()
        );
    }
    Ok(s)
}

pub fn write_purity_audit(cfg: &SweepConfig, out: &PurityAuditOutput, path: &Path) -> Result<Vec<PathBuf>> {
    match cfg.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                metadata: Metadata,
                summary: &'a super::audit::PurityAuditSummary,
                records: &'a [super::audit::PurityRecord],
            }
            let doc = Doc {
                metadata: Metadata::new(cfg),
                summary: &out.summary,
                records: &out.records,
            };
            std::fs::write(path, serde_json::to_string_pretty(&doc)?)?;
            Ok(vec![path.to_path_buf()])
        }
        OutputFormat::Csv => {
            std::fs::write(path, purity_csv(cfg, out)?)?;
            let side = summary_path(path);
            std::fs::write(&side, summary_json(cfg, &out.summary)?)?;
            Ok(vec![path.to_path_buf(), side])
        }
    }
}

pub fn analytic_csv(rows: &[AnalyticRow]) -> String {
    let mut s = String::from("noise,qubits,epsilon,nu,mu,max_entangled_delta\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.noise,
            r.qubits,
            r.epsilon,
            r.nu,
            r.mu,
            opt(r.max_entangled_delta)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::run_sweep;

    #[test]
    fn csv_layout() {
        let cfg = SweepConfig {
            epsilons: vec![0.1],
            samples: 3,
            out: Some("/somewhere/else.csv".into()),
            ..Default::default()
        };
        let out = run_sweep(&cfg).unwrap();
        let csv = sweep_csv(&cfg, &out).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# tool: qimpl"));
        assert!(lines.iter().take(5).all(|l| l.starts_with('#')));
        assert!(!csv.contains("somewhere"));
        assert!(lines[5].starts_with("epsilon,"));
        assert_eq!(lines.len(), 6 + 4);
        assert!(lines[6].starts_with("0.1,0,true,"));
        let doc: serde_json::Value = serde_json::from_str(&sweep_json(&cfg, &out).unwrap()).unwrap();
        assert_eq!(doc["records"].as_array().unwrap().len(), 4);
        assert_eq!(doc["metadata"]["seed"], 1);
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(summary_path(Path::new("a/b.csv")), PathBuf::from("a/b.csv.summary.json"));
    }
}
