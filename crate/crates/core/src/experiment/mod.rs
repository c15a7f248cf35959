//! Sweeps, audits, channel ingestion and the runtime invariant suites behind
//! the command-line tool.

mod analytic;
mod audit;
mod config;
mod ingest;
pub mod output;
mod sweep;
pub mod verify;

pub use analytic::{analytic_table, AnalyticRow};
pub use audit::{run_purity_audit, PurityAuditOutput, PurityAuditSummary, PurityEpsilonSummary, PurityRecord};
pub use config::{OutputFormat, SweepConfig};
pub use ingest::{audit_channel, ingest_channel, IngestReport, MapAudit};
pub use sweep::{
    run_sweep, EpsilonSummary, Histogram, Stats, SweepOutput, SweepRecord, SweepSummary, BOUND_TOL,
};
