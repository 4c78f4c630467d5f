use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use matro::report::{self, BergmanMode, Building, Input, NestedMode, Report};
use matro::{CliError, MatroidSpec};

#[derive(Parser)]
#[command(name = "matro", version, about = "Bergman complexes and nested set complexes of matroids")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the facet enumeration (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Print wall-clock time on stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, rank, connectivity and flats per rank.
    Info { spec: PathBuf },
    /// Bergman complex facets, faces or f-vector.
    Bergman {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "facets")]
        mode: BergmanMode,
    },
    /// Nested set complex over the minimal or maximal building set.
    Nested {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "min")]
        building: Building,
        #[arg(long, value_enum, default_value = "facets")]
        mode: NestedMode,
    },
    /// Whether the nested set complex equals the Bergman complex.
    Check { spec: PathBuf },
    /// Whether a weight vector lies in the Bergman fan.
    Member {
        spec: PathBuf,
        /// Comma-separated rationals, e.g. "1,0,-1/2,3".
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Facet description of the matroid polytope.
    Polytope { spec: PathBuf },
}

impl Command {
    fn spec(&self) -> &PathBuf {
        match self {
            Command::Info { spec }
            | Command::Bergman { spec, .. }
            | Command::Nested { spec, .. }
            | Command::Check { spec }
            | Command::Member { spec, .. }
            | Command::Polytope { spec } => spec,
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let input = Input::new(MatroidSpec::load(cli.command.spec())?, cli.threads)?;
    match &cli.command {
        Command::Info { .. } => report::info(&input),
        Command::Bergman { mode, .. } => report::bergman(&input, *mode),
        Command::Nested { building, mode, .. } => report::nested(&input, *building, *mode),
        Command::Check { .. } => report::check(&input),
        Command::Member { w, .. } => report::member(&input, w),
        Command::Polytope { .. } => report::polytope(&input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    if cli.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(report) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&report.json).expect("json") + "\n"
            } else {
                report.text
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("error [{}]: {}", e.code(), e.message());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
