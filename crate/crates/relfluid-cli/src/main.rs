//! `relfluid`: batch front end for the relfluid-core analyses.
//!
//! Every command writes one canonical JSON document (sorted keys, `%.17g`
//! floats) to `--out` or stdout. Validation failures exit with status 2 and
//! a JSON error object on stderr.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use failure::Failure;
use relfluid_core::io::{to_canonical_string, write_canonical};

#[derive(Parser, Debug)]
#[command(name = "relfluid", version, about = "Relativistic fluid analysis toolkit", arg_required_else_help = true)]
struct Cli {
    /// Seed recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic roots, causality verdict and determinant checks for one state.
    Chars(commands::CharsArgs),
    /// DNMR causality audit of a cell table.
    CheckDnmr(commands::AuditArgs),
    /// BDNK causality audit of a cell table.
    CheckBdnk(commands::AuditArgs),
    /// Vorticity and log-enthalpy residuals of a field snapshot.
    Residuals(commands::ResidualArgs),
    /// Runs the 1+1D solver from a JSON config.
    Evolve1d(commands::EvolveArgs),
    /// Weighted norms, energies, control norms and distances of a vacuum profile.
    Norms(commands::NormsArgs),
    /// Boost-invariant expansion with optional bulk relaxation.
    Bjorken(commands::BjorkenArgs),
}

/// Output destination shared by all commands.
#[derive(Args, Debug, Clone)]
pub struct OutArg {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Report body plus the settings that produced it.
pub struct Report {
    pub strict: bool,
    pub tolerances: Value,
    pub body: Map<String, Value>,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("RELFLUID_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::config(format!("RELFLUID_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::config(format!("thread pool: {e}")))
}

fn dispatch(cli: &Cli) -> Result<(Report, Option<PathBuf>, &'static str), Failure> {
    Ok(match &cli.command {
        Command::Chars(a) => (commands::chars(a)?, a.out.out.clone(), "chars"),
        Command::CheckDnmr(a) => (commands::audit("dnmr", a)?, a.out.out.clone(), "check-dnmr"),
        Command::CheckBdnk(a) => (commands::audit("bdnk", a)?, a.out.out.clone(), "check-bdnk"),
        Command::Residuals(a) => (commands::residuals(a)?, a.out.out.clone(), "residuals"),
        Command::Evolve1d(a) => (commands::evolve1d(a)?, a.out.out.clone(), "evolve1d"),
        Command::Norms(a) => (commands::norms(a)?, a.out.out.clone(), "norms"),
        Command::Bjorken(a) => (commands::bjorken(a)?, a.out.out.clone(), "bjorken"),
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    let (report, out, name) = dispatch(cli)?;
    let mut doc = report.body;
    doc.insert(
        "run".into(),
        json!({
            "tool": "relfluid",
            "version": env!("CARGO_PKG_VERSION"),
            "command": name,
            "seed": cli.seed,
            "strict": report.strict,
            "tolerances": report.tolerances,
        }),
    );
    let doc = Value::Object(doc);
    match out {
        Some(path) => write_canonical(&path, &doc)?,
        None => println!("{}", to_canonical_string(&doc)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = e.print();
                    ExitCode::from(2)
                }
                _ => {
                    Failure::usage(e.render().to_string()).emit();
                    ExitCode::from(2)
                }
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            f.emit();
            ExitCode::from(2)
        }
    }
}
