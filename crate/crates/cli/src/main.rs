use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qimpl::experiment::verify::{verify, Module, VerifyOptions};
use qimpl::experiment::{
    analytic_table, ingest_channel, output, run_purity_audit, run_sweep, OutputFormat, SweepConfig,
};
use qimpl::noise::default_epsilons;
use qimpl::Error;

/// Entanglement and purity audits for inverses of noise channels.
#[derive(Parser)]
#[command(name = "qimpl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep |ΔE_N| over an ensemble for each error rate.
    Sweep(RunArgs),
    /// Check the purity-ratio band over an ensemble.
    PurityAudit(RunArgs),
    /// Run the invariant suites and print a JSON report.
    Verify(VerifyArgs),
    /// Audit a Choi matrix stored as JSON.
    Ingest { path: PathBuf },
    /// Print closed-form ν, μ and maximally entangled ΔE_N tables.
    Analytic(AnalyticArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON file with any subset of the sweep fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    /// haar-pure, signed-mixture or physical-mixture.
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of leading qubits on side A.
    #[arg(long)]
    cut: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
}

impl RunArgs {
    fn config(self) -> Result<SweepConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => SweepConfig::from_json(&std::fs::read_to_string(p)?)?,
            None => SweepConfig::default(),
        };
        if let Some(v) = self.noise {
            cfg.noise = v;
        }
        if let Some(v) = self.qubits {
            cfg.qubits = v;
        }
        if let Some(v) = self.epsilons {
            cfg.epsilons = v;
        }
        if let Some(v) = self.ensemble {
            cfg.ensemble = v.parse()?;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.cut.is_some() {
            cfg.cut = self.cut;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if let Some(v) = self.format {
            cfg.format = v.parse()?;
        }
        if let Some(v) = self.bins {
            cfg.bins = v;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// One of linalg, channel, noise, measures, sampling, expcli, or all.
    #[arg(default_value = "all")]
    module: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Random cases per randomized check.
    #[arg(long)]
    trials: Option<usize>,
    /// Ensemble size for sweep-based checks.
    #[arg(long)]
    samples: Option<usize>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyticArgs {
    /// Comma-separated noise kinds.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "pauli:zz,depolarizing,dephasing,amplitude-damping"
    )]
    noise: Vec<String>,
    #[arg(long, default_value_t = 2)]
    qubits: usize,
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Outcome {
    Ok,
    Violations(usize),
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep(args: RunArgs) -> Result<Outcome, Error> {
    let cfg = args.config()?;
    let out = run_sweep(&cfg)?;
    match &cfg.out {
        Some(path) => {
            for p in output::write_sweep(&cfg, &out, path)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => match cfg.format {
            OutputFormat::Csv => print!("{}", output::sweep_csv(&cfg, &out)?),
            OutputFormat::Json => println!("{}", output::sweep_json(&cfg, &out)?),
        },
    }
    for s in &out.summary.per_epsilon {
        eprintln!(
            "eps={} samples={} max|dE_N|={} nu={} mu={} violations={}",
            s.epsilon,
            s.samples,
            s.abs_delta.as_ref().map_or(f64::NAN, |st| st.max),
            s.nu,
            s.mu,
            s.bound_violation_count + s.increase_count
        );
    }
    Ok(match out.summary.violations() {
        0 => Outcome::Ok,
        n => Outcome::Violations(n),
    })
}

fn purity_audit(args: RunArgs) -> Result<Outcome, Error> {
    let cfg = args.config()?;
    let out = run_purity_audit(&cfg)?;
    match &cfg.out {
        Some(path) => {
            for p in output::write_purity_audit(&cfg, &out, path)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => println!("{}", output::summary_json(&cfg, &out.summary)?),
    }
    Ok(match out.summary.violations() {
        0 => Outcome::Ok,
        n => Outcome::Violations(n),
    })
}

fn run_verify(args: VerifyArgs) -> Result<Outcome, Error> {
    let modules = match args.module.as_str() {
        "all" => Module::ALL.to_vec(),
        m => vec![m.parse()?],
    };
    let mut opts = VerifyOptions::default();
    if let Some(v) = args.seed {
        opts.seed = v;
    }
    if let Some(v) = args.trials {
        opts.trials = v;
    }
    if let Some(v) = args.samples {
        opts.ensemble_samples = v;
    }
    let report = verify(&modules, &opts);
    for suite in &report.suites {
        for c in &suite.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            eprintln!("{mark} {}::{} {}", suite.module, c.name, c.detail);
        }
    }
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(p) = &args.out {
        std::fs::write(p, &json)?;
    }
    println!("{json}");
    let failed = report
        .suites
        .iter()
        .flat_map(|s| &s.checks)
        .filter(|c| !c.passed)
        .count();
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::Violations(failed) })
}

fn analytic(args: AnalyticArgs) -> Result<Outcome, Error> {
    let epsilons = args.epsilons.unwrap_or_else(default_epsilons);
    let rows = analytic_table(&args.noise, args.qubits, &epsilons)?;
    let text = match args.format.parse::<OutputFormat>()? {
        OutputFormat::Csv => output::analytic_csv(&rows),
        OutputFormat::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    emit(&text, args.out.as_deref())?;
    Ok(Outcome::Ok)
}

fn ingest(path: &Path) -> Result<Outcome, Error> {
    let report = ingest_channel(path).map_err(|e| match e {
        Error::Io(e) => Error::Config(format!("{}: {e}", path.display())),
        e => e,
    })?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::PurityAudit(a) => purity_audit(a),
        Command::Verify(a) => run_verify(a),
        Command::Ingest { path } => ingest(&path),
        Command::Analytic(a) => analytic(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations(n)) => {
            eprintln!("error: {n} invariant violations");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
