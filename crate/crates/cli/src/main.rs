//! `weylks`: verify, numerically check, and search for contextuality
//! certificates over the Weyl algebra.
//!
//! Exit codes: 0 for a completed run (contradiction and consistent are both
//! results), 1 when an oracle claim fails or the run breaks down, 2 for
//! malformed input or flags.
//!
//! `WEYLKS_TOL_ALGEBRAIC` and `WEYLKS_TOL_EIGEN` override the default
//! tolerances (1e-10 and 1e-8).

mod args;
mod commands;
mod report;
mod trace;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use weylks_core::oracle::Tolerances;

use args::{Cli, Command};
use commands::{CliError, CliResult};
use report::{RunReport, Timings};

fn env_tolerance(name: &str, default: f64) -> CliResult<f64> {
    match std::env::var(name) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
            _ => Err(CliError::Input(format!(
                "{name}={v:?} is not a positive number"
            ))),
        },
        Err(_) => Ok(default),
    }
}

fn tolerances() -> CliResult<Tolerances> {
    let d = Tolerances::default();
    Ok(Tolerances {
        algebraic: env_tolerance("WEYLKS_TOL_ALGEBRAIC", d.algebraic)?,
        eigen: env_tolerance("WEYLKS_TOL_EIGEN", d.eigen)?,
    })
}

fn output(cmd: &Command) -> (Option<PathBuf>, bool) {
    match cmd {
        Command::Verify(a) => (a.output.json.clone(), a.output.timings),
        Command::Oracle(a) => (a.output.json.clone(), a.output.timings),
        Command::Search(a) => (a.output.json.clone(), a.output.timings),
        Command::Print(_) => (None, false),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut report = RunReport::new(std::env::args().skip(1).collect());
    let (json, timings) = output(&cli.command);
    let result = tolerances().and_then(|tol| match &cli.command {
        Command::Verify(a) => commands::verify(a, &mut report),
        Command::Print(a) => commands::print(a, &mut report),
        Command::Oracle(a) => commands::oracle(a, tol, &mut report),
        Command::Search(a) => commands::search(a, tol, &mut report, |s| {
            print!("{s}");
            let _ = std::io::stdout().flush();
        }),
    });
    let code = match result {
        Ok(out) => {
            print!("{}", out.human);
            out.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            report.status = "error".into();
            report.error = Some(e.to_string());
            e.exit_code()
        }
    };
    if timings {
        report.timings = Some(Timings {
            total_ms: started.elapsed().as_secs_f64() * 1e3,
        });
    }
    if let Some(path) = json {
        if let Err(e) = report.write(&path) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
