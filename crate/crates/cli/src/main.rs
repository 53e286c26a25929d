mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use adjoint_core::verify::Check;
use adjoint_core::{GeometryError, WeightVector};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Adjoint polynomials of lattice cones, by triangulation and by multidegree.
#[derive(Parser)]
#[command(name = "adjoint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regular triangulation with volumes and lifting certificates.
    Triangulate(Common),
    /// Reduced Groebner basis of the toric ideal and its initial ideal.
    Toric(Common),
    /// The adjoint polynomial.
    Adjoint {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Pipeline::Both)]
        pipeline: Pipeline,
    },
    /// Cross-check both pipelines on an input or on random configurations.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Run SEED CASES random cases instead of reading an input.
        #[arg(long, num_args = 2, value_names = ["SEED", "CASES"], conflicts_with = "replay")]
        fuzz: Option<Vec<u64>>,
        /// Rerun a single random case from the seed printed in a report.
        #[arg(long, value_name = "CASE_SEED")]
        replay: Option<u64>,
        /// Run only these checks (comma separated).
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        checks: Option<Vec<Check>>,
        /// Skip these checks (comma separated).
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        skip: Vec<Check>,
        /// Include per-stage timings.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Input document, or `-` for standard input.
    input: Option<PathBuf>,
    /// Weight vector, comma separated; overrides the input's weight.
    #[arg(long, allow_hyphen_values = true, value_parser = input::parse_weight)]
    weight: Option<WeightVector>,
    /// Seed for the random weight used when none is given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random weights are drawn from [0, BOUND].
    #[arg(long, default_value_t = 1000)]
    bound: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Pipeline {
    Geometric,
    Algebraic,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_check(s: &str) -> Result<Check, String> {
    Check::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
        format!("unknown check {s:?}; expected one of {}", names.join(", "))
    })
}

const EXIT_VERIFICATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_GENERICITY: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<adjoint_core::Error>() {
            return if e.is_genericity() { EXIT_GENERICITY } else { EXIT_INPUT };
        }
        if let Some(e) = cause.downcast_ref::<GeometryError>() {
            return match e {
                GeometryError::NonGeneric { .. } | GeometryError::RetryCapExceeded { .. } => EXIT_GENERICITY,
                _ => EXIT_INPUT,
            };
        }
        if cause.is::<input::InputError>() || cause.is::<std::io::Error>() {
            return EXIT_INPUT;
        }
    }
    EXIT_VERIFICATION
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match &cli.command {
        Command::Triangulate(c) | Command::Toric(c) => c.format,
        Command::Adjoint { common, .. } | Command::Verify { common, .. } => common.format,
    };
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFICATION),
        Err(err) => {
            let code = exit_code(&err);
            if format == Format::Json {
                let kind = match code {
                    EXIT_INPUT => "input",
                    EXIT_GENERICITY => "genericity",
                    _ => "internal",
                };
                let doc = serde_json::json!({ "error": { "kind": kind, "message": format!("{err:#}") } });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
