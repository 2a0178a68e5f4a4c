use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use optrr_cli::config::{Num, SplittingConfig};
use optrr_cli::{
    compare_tables, execute, load_table, write_outputs, CliError, CliResult, Command, CompareOptions, Format,
    RunConfig, Tolerance,
};

#[derive(Parser)]
#[command(name = "optrr", version, about = "Rayleigh-Ritz spectra of anharmonic oscillators with trace-optimised bases")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Run configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Working precision in significant decimal digits.
    #[arg(long, env = "OPTRR_PRECISION")]
    precision: Option<u32>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file stem, defaults to the command name.
    #[arg(long)]
    stem: Option<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Diagonalise at one basis size.
    Solve(Common),
    /// Converge a sequence of basis sizes, optionally against a reference.
    Sweep(Common),
    /// Exact levels of a quasi-exactly solvable family.
    Qes(Common),
    /// Ground-state splitting of the symmetric double well.
    Splitting {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Compare a result (JSON or CSV) with a golden CSV table.
    Compare {
        result: PathBuf,
        golden: PathBuf,
        /// Per-column override, `COLUMN=abs:X` or `COLUMN=rel:X`.
        #[arg(long = "tol")]
        tolerances: Vec<String>,
        /// Tolerance for columns without an override.
        #[arg(long, default_value = "rel:1e-10")]
        default_tol: String,
        #[arg(long, default_value_t = 120)]
        digits: u32,
    },
}

fn load(common: &Common) -> CliResult<RunConfig> {
    match &common.config {
        Some(p) => RunConfig::load(p),
        None => RunConfig::from_json("{}"),
    }
}

fn run(command: Command, common: &Common, mut config: RunConfig) -> CliResult<()> {
    let doc = execute(&config, command, common.precision)?;
    let dir = common
        .out
        .clone()
        .or_else(|| config.output.dir.take().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let stem = common
        .stem
        .clone()
        .or_else(|| config.output.stem.clone())
        .unwrap_or_else(|| command.name().to_string());
    let format = common.format.or(config.output.format).unwrap_or_default();
    for p in write_outputs(&doc, &dir, &stem, format)? {
        println!("{}", p.display());
    }
    Ok(())
}

fn compare(result: &Path, golden: &Path, tolerances: &[String], default_tol: &str, digits: u32) -> CliResult<()> {
    let mut opts = CompareOptions {
        default: Tolerance::parse(default_tol)?,
        digits,
        ..CompareOptions::default()
    };
    for t in tolerances {
        opts.push_override(t)?;
    }
    let cmp = compare_tables(&load_table(result)?, &load_table(golden)?, &opts)?;
    print!("{}", cmp.report());
    if cmp.passed() {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("{} cells out of tolerance", cmp.failures().count())))
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Sub::Solve(c) => run(Command::Solve, &c, load(&c)?),
        Sub::Sweep(c) => run(Command::Sweep, &c, load(&c)?),
        Sub::Qes(c) => run(Command::Qes, &c, load(&c)?),
        Sub::Splitting { common, g, size } => {
            let mut config = load(&common)?;
            if g.is_some() || size.is_some() {
                let (Some(g), Some(size)) = (g, size) else {
                    return Err(CliError::Config("--g and --size go together".into()));
                };
                config.splitting = Some(SplittingConfig { g: Num::new(g), size });
            }
            run(Command::Splitting, &common, config)
        }
        Sub::Compare {
            result,
            golden,
            tolerances,
            default_tol,
            digits,
        } => compare(&result, &golden, &tolerances, &default_tol, digits),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("optrr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
