//! Command-line front end: single evaluations, parameter sweeps, figure
//! grids and the acceptance suite.
//!
//! Every number the library computes is for a real scalar; `--field complex`
//! doubles `Z'(0)`, log det and the thermodynamic functions here and nowhere
//! else.

pub mod args;
pub mod det;
pub mod error;
pub mod figure;
pub mod grid;
pub mod output;
pub mod thermo;
pub mod verify;

use rayon::ThreadPoolBuilder;
use serde::Serialize;

use args::{Cli, Command, Format, VerifyArgs};
pub use error::CliError;
use output::{emit, to_json, ConventionEcho, SCHEMA_VERSION};
use verify::{CriterionReport, VerifyOptions};

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
pub fn parallel<T, F>(jobs: Option<usize>, f: F) -> Result<T, CliError>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match jobs {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifyRecord<'a> {
    schema_version: u32,
    command: &'static str,
    convention: ConventionEcho,
    options: VerifyOptions,
    all_passed: bool,
    criteria: &'a [CriterionReport],
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Returns the reports; the caller decides the exit status.
pub fn cmd_verify(args: &VerifyArgs) -> Result<Vec<CriterionReport>, CliError> {
    if args.field.is_some() {
        return Err(CliError::Usage("verify fixes its own field conventions; drop --field".into()));
    }
    let options = VerifyOptions { normalization: args.normalization };
    let reports = parallel(args.output.jobs, || verify::run(&args.only, &options))??;
    for r in &reports {
        eprintln!("{}", r.summary_line());
    }
    let all_passed = reports.iter().all(|r| r.passed);
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&VerifyRecord {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            convention: ConventionEcho::new(false),
            options,
            all_passed,
            criteria: &reports,
        })?,
        Format::Csv => {
            let mut s = String::from("criterion,check,measured,expected,tolerance,relative,passed\n");
            for r in &reports {
                for c in &r.checks {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        r.id,
                        csv_field(&c.label),
                        output::c_exp(c.measured),
                        output::c_exp(c.expected),
                        output::c_exp(c.tolerance),
                        c.relative,
                        c.passed
                    ));
                }
            }
            s
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(reports)
}

/// Dispatches a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Det(a) => det::cmd_det(a).map(|_| 0),
        Command::Thermo(a) => thermo::cmd_thermo(a).map(|_| 0),
        Command::Figure(a) => figure::cmd_figure(a).map(|_| 0),
        Command::Verify(a) => cmd_verify(a).map(|reports| if reports.iter().all(|r| r.passed) { 0 } else { 1 }),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
