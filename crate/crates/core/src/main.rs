use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ringstrata::oracle::{OracleConfig, DEFAULT_MAX_ORDER};
use ringstrata::recipe::integer_depth;
use ringstrata::report::{run_quad, run_zn, selftest, Run, RunOptions, DEFAULT_MAX_ELEMS};
use ringstrata::Error;

/// Bound on the ring order accepted by the brute-force oracle.
const BRUTE_LIMIT_VAR: &str = "RINGSTRATA_BRUTE_LIMIT";

#[derive(Parser)]
#[command(
    name = "ringstrata",
    version,
    about = "Semilattice decomposition of finite quotient rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose Z_n.
    Zn {
        n: i64,
        #[command(flatten)]
        report: ReportFlags,
    },
    /// Decompose Z[√d]/A, with A given by generators such as "10, 5+5*w" (w = √d).
    #[command(allow_negative_numbers = true)]
    Quad {
        d: i64,
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        report: ReportFlags,
    },
    /// Number of prime factors of x, counted with multiplicity.
    #[command(allow_negative_numbers = true)]
    Depth { x: i64 },
    /// Compare the structural and brute-force decompositions of Z_n for n in 2..=max.
    Selftest {
        #[arg(long, default_value_t = 300)]
        max: u64,
    },
}

#[derive(Args)]
struct ReportFlags {
    /// Also run the brute-force oracle; exit 4 on disagreement.
    #[arg(long)]
    verify: bool,
    /// Highlight the component containing this element.
    #[arg(long, allow_hyphen_values = true)]
    focus: Option<String>,
    /// Write the Hasse diagram in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_ELEMS)]
    max_elems: usize,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

fn oracle_config() -> Result<OracleConfig, Error> {
    match std::env::var(BRUTE_LIMIT_VAR) {
        Err(_) => Ok(OracleConfig {
            max_order: DEFAULT_MAX_ORDER,
        }),
        Ok(v) => v
            .parse()
            .map(|max_order| OracleConfig { max_order })
            .map_err(|_| Error::InvalidParameter(format!("{BRUTE_LIMIT_VAR}={v:?} is not a size"))),
    }
}

fn options(flags: &ReportFlags) -> Result<RunOptions, Error> {
    Ok(RunOptions {
        verify: flags.verify,
        focus: flags.focus.clone(),
        max_elems: flags.max_elems,
        timings: flags.timings,
        oracle: oracle_config()?,
    })
}

fn write(path: &PathBuf, text: &str) -> Result<(), Error> {
    fs::write(path, text)
        .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))
}

fn emit(run: Run, flags: &ReportFlags) -> Result<ExitCode, Error> {
    print!("{}", run.text());
    if let Some(path) = &flags.dot {
        write(path, &run.dot())?;
    }
    if let Some(path) = &flags.json {
        write(path, &run.document.to_json())?;
    }
    Ok(if run.verified_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn main_inner(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Zn { n, report } => emit(run_zn(n, &options(&report)?)?, &report),
        Command::Quad { d, ideal, report } => {
            emit(run_quad(d, &ideal, &options(&report)?)?, &report)
        }
        Command::Depth { x } => {
            println!("{}", integer_depth(x)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { max } => {
            let summary = selftest(max, oracle_config()?);
            for (n, why) in &summary.failures {
                println!("Z_{n}: {why}");
            }
            println!(
                "{} rings checked, {} mismatches",
                summary.checked,
                summary.failures.len()
            );
            Ok(if summary.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            })
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
