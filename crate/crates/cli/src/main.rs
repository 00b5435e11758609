//! `algset`: batch checks over finite categories, classes of small maps,
//! W-types and hereditarily finite set models.

mod commands;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use report::Report;
use spec::WorkbenchSpec;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("malformed spec file: {0}")]
    Spec(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] algset::Error),
}

#[derive(Debug, Parser)]
#[command(name = "algset", version, about = "Finite models of algebraic set theory")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Workbench spec file whose keys fill in missing flags.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Soft per-check limit in seconds; late checks report inconclusive.
    #[arg(long, global = true)]
    pub timeout: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check class axioms for maps, or set axioms in V_n with --rank.
    CheckAxioms {
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        scope: Option<usize>,
        /// Comma-separated axiom ids (default A1-A9).
        #[arg(long, value_delimiter = ',')]
        axioms: Vec<String>,
        /// Check set axioms in V_rank instead of class axioms.
        #[arg(long)]
        rank: Option<usize>,
        /// Scheme formulas for the set axioms; repeatable.
        #[arg(long)]
        formula: Vec<String>,
    },
    /// Close a class under covered maps and compare with the original.
    Scov {
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        scope: Option<usize>,
    },
    /// Check that a map represents a class.
    Represent {
        /// Fiber sizes of the representing map.
        #[arg(long, value_delimiter = ',')]
        rep: Vec<usize>,
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        scope: Option<usize>,
        /// Require the pullback squares to be iso on the nose.
        #[arg(long)]
        strict: bool,
    },
    /// Verify the exact completion against a base class.
    Complete {
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        scope: Option<usize>,
    },
    /// Enumerate a W-type and compare tree identity with bisimilarity.
    Wtypes {
        /// Fiber sizes of the signature, e.g. 0,2.
        #[arg(long, value_delimiter = ',')]
        sig: Vec<usize>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Build V_n, or the sets denoted by trees of a representation.
    BuildV {
        #[arg(long)]
        rank: Option<usize>,
        /// Fiber sizes of a representation; builds trees of --depth.
        #[arg(long, value_delimiter = ',')]
        rep: Vec<usize>,
        #[arg(long)]
        depth: Option<usize>,
        /// Print the size only.
        #[arg(long)]
        stats: bool,
    },
    /// Evaluate a formula in V_rank.
    Eval {
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        formula: Option<String>,
        /// Variable assignments `name=literal`; repeatable.
        #[arg(long = "let", value_name = "NAME=SET")]
        bindings: Vec<String>,
    },
    /// Minimal multi-valued sections of a function, verified by brute force.
    Fullness {
        /// The function as a set of Kuratowski pairs.
        #[arg(long)]
        f: Option<String>,
        /// Its codomain as a set literal.
        #[arg(long)]
        a: Option<String>,
        /// Alternatively, a table on numerals: value of 0, 1, ...
        #[arg(long, value_delimiter = ',')]
        table: Vec<usize>,
        /// Codomain size for --table.
        #[arg(long)]
        codomain: Option<usize>,
    },
}

fn run(cli: Cli, argv: Vec<String>) -> Result<Report, CliError> {
    let spec = match &cli.global.spec {
        Some(p) => WorkbenchSpec::load(p)?,
        None => WorkbenchSpec::default(),
    };
    let (checks, output) = commands::dispatch(&cli, &spec)?;
    Ok(Report::new(argv, checks, output))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.global.json.clone();
    match run(cli, argv[1..].to_vec()) {
        Ok(report) => {
            print!("{}", report.render());
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                if let Err(e) = std::fs::write(&path, text + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
