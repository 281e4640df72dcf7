use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use lagmhd::config::RunConfig;
use lagmhd::railgun::{run_case, ExperimentCase, RailgunConfig};
use lagmhd::suites::{conservation_suite, convergence_suite, entropy_suite, symmetry_suite, SuiteReport};
use lagmhd::{runner, Error};

#[derive(Parser)]
#[command(name = "lagmhd", version, about = "Conservative Lagrangian MHD schemes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a simulation described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, replacing `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Solver tolerance; audits allow 100 times this.
        #[arg(long)]
        tol: Option<f64>,
        /// Dotted config key with a JSON value, e.g. `mesh.cells=64`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run a built-in verification suite.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Directory for the JSON reports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plasma-bunch deceleration experiment.
    Railgun {
        /// 1: low voltage, 2: high voltage, 3: longitudinal field.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        case: u32,
        /// Full configuration as JSON; the case preset otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "railgun-out")]
        out: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        /// Dotted config key, e.g. `circuit.v0=2.0`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Conservation,
    Symmetry,
    Convergence,
    Entropy,
    All,
}

/// Failure classes with their exit codes.
enum Failure {
    Usage(anyhow::Error),
    Solver(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let solver = e.chain().any(|c| {
            matches!(
                c.downcast_ref::<Error>(),
                Some(Error::StepFailed { .. } | Error::NoConvergence { .. } | Error::StepRejected(_) | Error::Singular(_))
            )
        });
        if solver {
            Failure::Solver(e)
        } else {
            Failure::Usage(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn split(kv: &str) -> anyhow::Result<(&str, &str)> {
    kv.split_once('=').with_context(|| format!("override {kv:?} is not KEY=VALUE"))
}

fn cmd_run(config: &Path, out: Option<PathBuf>, tol: Option<f64>, overrides: &[String]) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
    for kv in overrides {
        let (k, v) = split(kv)?;
        cfg.set(k, v)?;
    }
    if let Some(dir) = out {
        cfg.output.dir = dir;
    }
    if let Some(t) = tol {
        cfg.scheme.tol = t;
        cfg.output.audit_threshold = 100.0 * t;
    }
    cfg.validate().context("invalid configuration")?;
    let summary = runner::run(&cfg)?;
    println!("{}", summary.report.to_table());
    println!("wrote {} steps to {}", summary.steps, cfg.output.dir.display());
    let bad = summary.violations(cfg.output.audit_threshold);
    if !bad.is_empty() {
        return Err(Failure::Verification(bad.join("\n")));
    }
    Ok(())
}

fn cmd_verify(suite: Suite, tol: f64, out: Option<PathBuf>) -> Result<(), Failure> {
    let mut reports: Vec<SuiteReport> = Vec::new();
    let all = matches!(suite, Suite::All);
    if all || matches!(suite, Suite::Conservation) {
        reports.push(conservation_suite(tol, 50)?);
    }
    if all || matches!(suite, Suite::Symmetry) {
        reports.push(symmetry_suite(tol)?);
    }
    if all || matches!(suite, Suite::Convergence) {
        reports.push(convergence_suite()?);
    }
    if all || matches!(suite, Suite::Entropy) {
        reports.push(entropy_suite(tol, 200)?);
    }
    for r in &reports {
        print!("{}", r.to_table());
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir).context("creating output directory")?;
            std::fs::write(dir.join(format!("{}.json", r.suite)), r.to_json()?)
                .context("writing report")?;
        }
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.all_pass()).map(|r| r.suite.clone()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed suites: {}", failed.join(", "))))
    }
}

fn cmd_railgun(case: u32, config: Option<PathBuf>, out: &Path, tol: Option<f64>, overrides: &[String]) -> Result<(), Failure> {
    let mut cfg = match config {
        Some(p) => {
            let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => RailgunConfig::preset(ExperimentCase::from_number(case)?),
    };
    for kv in overrides {
        let (k, v) = split(kv)?;
        cfg.set(k, v)?;
    }
    if let Some(t) = tol {
        cfg.tol = t;
    }
    cfg.validate().context("invalid configuration")?;
    let art = run_case(&cfg)?;
    art.write(out).context("writing artifacts")?;
    match art.reversal_time() {
        Some(t) => println!("bunch front reverses at t = {t}"),
        None => println!("bunch front keeps moving forward (min velocity {})", art.min_front_velocity()),
    }
    if let Some(r) = &art.at_report {
        println!("{}", r.to_table());
    }
    println!("circuit energy drift per step {:e}", art.circuit_drift);
    println!("artifacts in {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match cli.cmd {
        Cmd::Run { config, out, tol, overrides } => cmd_run(&config, out, tol, &overrides),
        Cmd::Verify { suite, tol, out } => cmd_verify(suite, tol, out),
        Cmd::Railgun { case, config, out, tol, overrides } => cmd_railgun(case, config, &out, tol, &overrides),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("solver failure: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed:\n{msg}");
            ExitCode::from(3)
        }
    }
}
