use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qthalf_cli::{emit_report, run_experiment, CliError, Kind, RunConfig};

/// Run one experiment suite and write its report.
#[derive(Debug, Parser)]
#[command(name = "qthalf", version)]
struct Args {
    /// Experiment to run; overrides `run.kind` in the config.
    kind: Kind,
    /// Configuration file (TOML); defaults are used for anything missing.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides `run.out`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<bool, CliError> {
    if let Ok(w) = std::env::var("QTHALF_WORKERS") {
        let n: usize = w
            .parse()
            .map_err(|_| CliError::Config(vec![format!("QTHALF_WORKERS = {w:?} is not a worker count")]))?;
        // a second initialisation only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    config.run.kind = args.kind;
    if let Some(seed) = args.seed {
        config.run.seed = seed;
    }
    if let Some(out) = &args.out {
        config.run.out = out.display().to_string();
    }
    let report = run_experiment(&config)?;
    let dir = PathBuf::from(&config.run.out);
    emit_report(&report, &config, &dir)?;
    for m in &report.metrics {
        println!("{} {} = {:e} ({})", if m.passed { "PASS" } else { "FAIL" }, m.name, m.value, m.source);
    }
    println!("{}: {} -> {}", report.kind, if report.passed { "passed" } else { "FAILED" }, dir.display());
    Ok(report.passed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
