use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use measdep_core::{Figure, Level, Number};

mod commands;
mod output;

/// Measurement-dependent hidden-variable models of the CHSH test.
#[derive(Debug, Parser)]
#[command(name = "measdep", version)]
struct Cli {
    /// Worker threads for sweeps and verification (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print S, every dependence measure, the mutual information and the
    /// bounds of a model file.
    Eval {
        model: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Build a saturating model and write it as JSON.
    Construct {
        #[arg(value_enum)]
        family: Family,
        #[command(flatten)]
        params: ParamFlags,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Regenerate the data behind a figure.
    Sweep {
        #[arg(long, value_parser = parse_figure)]
        figure: Figure,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Maximize S over all models with the given limits, exactly.
    Oracle {
        #[command(flatten)]
        params: ParamFlags,
        /// Also write the maximizing model to this file.
        #[arg(long, value_name = "FILE")]
        witness: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(long, value_parser = parse_level, default_value = "quick")]
        level: Level,
        /// Seed for the randomized soundness check.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug, Args)]
struct ParamFlags {
    /// Accepts decimals (0.2) or fractions (1/5).
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    m1: Option<Number>,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    m2: Option<Number>,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    mhat1: Option<Number>,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    mhat2: Option<Number>,
    /// Hall and Banik families only.
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    p: Option<Number>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    TwoParam,
    FourParam,
    Interp,
    Hall,
    Banik,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_number(s: &str) -> Result<Number, String> {
    s.parse().map_err(|e: measdep_core::Error| e.to_string())
}

fn parse_figure(s: &str) -> Result<Figure, String> {
    s.parse().map_err(|e: measdep_core::Error| e.to_string())
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse().map_err(|e: measdep_core::Error| e.to_string())
}

/// Failure of a command, mapped to an exit code and a one-line reason.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(measdep_core::Error),
    /// Verification ran and found failures; the report is already printed.
    Verify,
}

impl From<measdep_core::Error> for Failure {
    fn from(e: measdep_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

fn report(kind: &str, message: &str) {
    let line = message.lines().map(str::trim).collect::<Vec<_>>().join("; ");
    eprintln!("error[{kind}]: {line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            report("usage", first.trim_start_matches("error: "));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            report("usage", "--jobs must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            report("usage", &e.to_string());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Usage(msg)) => {
            report("usage", &msg);
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            report(e.kind(), &e.to_string());
            let code = match e.kind() {
                "infeasible" | "out-of-range" | "region" => EXIT_INFEASIBLE,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}
