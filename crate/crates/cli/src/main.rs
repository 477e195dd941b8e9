//! `bcov`: runs the period, ring and anomaly computations and writes a JSON
//! report.
//!
//! Exit codes: 0 all checks passed, 1 some check failed, 2 usage error,
//! 3 model failed to load, 4 computation error.

mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bcov_core::solver::Variant;
use clap::{Parser, Subcommand};

use commands::{CliError, Suite};

#[derive(Parser)]
#[command(name = "bcov", version, about = "Exact BCOV ring computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write the report's series as a CSV table.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Periods, mirror map and the flat-coordinate Yukawa coupling.
    Pf {
        /// Built-in model name or path to a model file.
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 20)]
        order: i64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Defaults to the suite's natural model.
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 20)]
        order: i64,
    },
    /// Integrate the anomaly recursion up to `--genus`.
    Solve {
        #[arg(long)]
        model: String,
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value = "reduced", value_parser = parse_variant)]
        variant: Variant,
        /// Add holomorphic limits as q-series through `--order`.
        #[arg(long)]
        holomorphic: bool,
        #[arg(long, default_value_t = 10)]
        order: i64,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|_| format!("unknown variant '{s}' (expected reduced or lifted)"))
}

fn run(cli: &Cli) -> Result<report::RunReport, CliError> {
    let order_ok = |n: i64| {
        if n < 0 {
            Err(CliError::Usage(format!("--order {n} must be nonnegative")))
        } else {
            Ok(())
        }
    };
    match &cli.cmd {
        Cmd::Pf { model, order } => {
            order_ok(*order)?;
            commands::cmd_pf(model, *order)
        }
        Cmd::Verify { suite, model, order } => {
            order_ok(*order)?;
            commands::cmd_verify(model.as_deref(), *suite, *order)
        }
        Cmd::Solve {
            model,
            genus,
            variant,
            holomorphic,
            order,
        } => {
            order_ok(*order)?;
            commands::cmd_solve(model, *genus, *variant, *holomorphic, *order)
        }
    }
}

fn emit(cli: &Cli, r: &report::RunReport) -> io::Result<()> {
    match &cli.out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            r.write_json(&mut w)?;
            w.flush()?;
        }
        None => r.write_json(&mut io::stdout().lock())?,
    }
    if let Some(p) = &cli.csv {
        r.write_csv(p)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    let secs = start.elapsed().as_secs_f64();
    eprintln!("wall time: {secs:.3}s");
    let report = match result {
        Ok(r) => r,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(CliError::Load(e)) => {
            eprintln!("error: could not load model: {e}");
            return ExitCode::from(3);
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = emit(&cli, &report) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(4);
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
