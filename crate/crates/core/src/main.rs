use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use normnet::cli::{run, Command, OutputFormat, RunConfig};
use normnet::MergeMode;

#[derive(Parser)]
#[command(name = "normnet", version, about = "Reason about norm sets through the CP-nets they induce")]
struct Args {
    /// Largest number of variables for which outcomes are enumerated.
    #[arg(long, global = true, env = "NORMNET_CAP", default_value_t = normnet::preorder::DEFAULT_CAP)]
    cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// How outcomes are grouped into nodes of the induced graph.
    #[arg(long, global = true, value_enum, default_value_t = Merge::Variables)]
    merge: Merge,
    /// One node per outcome; overrides --merge.
    #[arg(long, global = true)]
    raw: bool,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Merge {
    /// Merge across variables that are indifferent in every context.
    Variables,
    /// Merge whole indifference classes.
    Classes,
}

#[derive(Subcommand)]
enum Sub {
    /// Validate a norm file and print it in canonical form.
    Parse { file: PathBuf },
    /// Compile the norms into a CP-net, reporting conflicts.
    Compile { file: PathBuf },
    /// Build the induced preorder over outcomes.
    Graph { file: PathBuf },
    /// Compare two outcomes, each a comma-separated list like "a, not b".
    Dominance { file: PathBuf, first: String, second: String },
    /// Check that no outcome is strictly preferred to itself.
    Consistent { file: PathBuf },
    /// Classify a literal, optionally under a context: "f IF d".
    Permission { file: PathBuf, query: String },
    /// List contrary-to-duty obligation pairs.
    Ctd { file: PathBuf },
    /// Check every norm against the induced preorder.
    Check { file: PathBuf },
    /// List the most preferred outcomes.
    Optima { file: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (input, command) = match args.command {
        Sub::Parse { file } => (file, Command::Parse),
        Sub::Compile { file } => (file, Command::Compile),
        Sub::Graph { file } => (file, Command::Graph),
        Sub::Dominance { file, first, second } => (file, Command::Dominance { first, second }),
        Sub::Consistent { file } => (file, Command::Consistent),
        Sub::Permission { file, query } => (file, Command::Permission { query }),
        Sub::Ctd { file } => (file, Command::Ctd),
        Sub::Check { file } => (file, Command::Check),
        Sub::Optima { file } => (file, Command::Optima),
    };
    let merge = match (args.raw, args.merge) {
        (true, _) => MergeMode::Raw,
        (false, Merge::Variables) => MergeMode::UniformlyIndifferentVariables,
        (false, Merge::Classes) => MergeMode::IndifferenceClasses,
    };
    let format = match args.format {
        Format::Text => OutputFormat::Text,
        Format::Structured => OutputFormat::Structured,
        Format::Dot => OutputFormat::Dot,
    };
    let out = run(&RunConfig { input, command, cap: args.cap, format, merge });
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.status as u8)
}
