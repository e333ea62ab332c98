use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gaugecheck::{emit_report, run_scenario, Error, ScenarioConfig, Status};

/// Run verification scenarios and emit a JSON report.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// Scenario name, or `all`.
    #[arg(long)]
    scenario: Option<String>,
    /// Base quadrature order (default 32); scenario grids scale from it.
    #[arg(long)]
    quad_order: Option<usize>,
    /// Tolerance applied to every floating-point check.
    #[arg(long)]
    tol: Option<f64>,
    /// Master seed for the ChaCha8 streams (default 1).
    #[arg(long)]
    seed: Option<u64>,
    /// Rank p of su(p)/u(p), 1..=4 (default 2).
    #[arg(long)]
    gauge_p: Option<usize>,
    /// Report path; the summary always goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run scenarios concurrently (report order is unchanged).
    #[arg(long)]
    parallel: bool,
    /// TOML file with ScenarioConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record per-check wall-clock time in the report.
    #[arg(long)]
    timings: bool,
    /// Sample count for matrix-group crossed modules.
    #[arg(long)]
    samples: Option<usize>,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::UnknownScenario(_) | Error::InvalidConfig(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn config(args: Args) -> Result<ScenarioConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            ScenarioConfig::from_toml(&text)?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(s) = args.scenario {
        cfg.scenario = s;
    }
    if let Some(q) = args.quad_order {
        cfg.quad_order = q;
    }
    if args.tol.is_some() {
        cfg.tolerance = args.tol;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(p) = args.gauge_p {
        cfg.gauge_p = p;
    }
    if args.output.is_some() {
        cfg.output_path = args.output;
    }
    cfg.parallel |= args.parallel;
    cfg.timings |= args.timings;
    if let Some(n) = args.samples {
        cfg.samples = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let cfg = match config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let report = match run_scenario(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    print!("{}", report.summary());
    if let Some(path) = &cfg.output_path {
        if let Err(e) = emit_report(&report, path) {
            eprintln!("verify: {e}");
            return ExitCode::from(EXIT_IO);
        }
    }
    match report.status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail | Status::Error => ExitCode::from(EXIT_FAIL),
    }
}
