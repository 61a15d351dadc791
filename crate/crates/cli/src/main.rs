mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser)]
#[command(
    name = "subind",
    version,
    about = "Submodular information measures and combinatorial independence checks"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Relative tolerance for comparisons involving floating-point values.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Where the set function comes from.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Function spec file (JSON).
    #[arg(long)]
    pub function: Option<PathBuf>,

    /// Entropy of a distribution: a built-in name (D1, D2, D3) or a distribution file.
    #[arg(long = "entropy-dist", value_name = "NAME|FILE")]
    pub entropy_dist: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct MeasureKind {
    /// Mutual information I_f(A; B | C), e.g. `--mi A=1,2 B=3 C=4`.
    #[arg(long, num_args = 2..=3, value_name = "X=LABELS")]
    pub mi: Option<Vec<String>>,

    /// Total correlation of `;`-separated sets, e.g. `sets=1,2;3`.
    #[arg(long = "total-correlation", value_name = "sets=...")]
    pub total_correlation: Option<String>,

    /// Multi-set mutual information of `;`-separated sets.
    #[arg(long = "multiset-mi", value_name = "sets=...")]
    pub multiset_mi: Option<String>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate an information measure.
    Measure {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        kind: MeasureKind,
    },
    /// Check all six independence types for a pair of disjoint sets.
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long = "A", value_name = "LABELS", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", value_name = "LABELS", allow_hyphen_values = true)]
        b: String,
        /// Condition on this set.
        #[arg(long, value_name = "LABELS")]
        given: Option<String>,
    },
    /// Check the implication lattice on every disjoint pair or on pairs from a file.
    VerifyLattice {
        #[command(flatten)]
        source: Source,
        /// `all`, or a JSON file with `[{"A": "1,2", "B": "3"}, ...]`.
        #[arg(long, default_value = "all")]
        pairs: String,
    },
    /// Shannon entropy (bits) of a set of variables.
    Entropy {
        /// Built-in name (D1, D2, D3) or distribution file.
        #[arg(long, value_name = "NAME|FILE")]
        dist: String,
        #[arg(long, value_name = "LABELS")]
        set: String,
        /// Condition on these variables.
        #[arg(long, value_name = "LABELS")]
        given: Option<String>,
    },
    /// Greedy selection subject to independence from a private set.
    Select {
        /// Utility function spec.
        #[arg(long)]
        utility: PathBuf,
        /// Function measuring shared information; defaults to the utility.
        #[arg(long)]
        privacy: Option<PathBuf>,
        /// Private set.
        #[arg(long = "P", value_name = "LABELS")]
        private: String,
        /// Constraint type: ji, mi or pi.
        #[arg(long = "type", value_name = "TYPE")]
        kind: String,
        /// Bound on I_f(A; P) for ji.
        #[arg(long, default_value = "0")]
        epsilon: String,
        /// Maximum number of selected elements; defaults to the ground set size.
        #[arg(long)]
        budget: Option<usize>,
        /// Write the per-step trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Built-in counterexamples.
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
    /// Check normalization, monotonicity and submodularity exhaustively.
    Validate {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Subcommand)]
pub enum RegistryAction {
    /// Run every counterexample and print a pass/fail table.
    Run,
    /// Write the instances as JSON files.
    Emit {
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let mut report = Report::new(argv);
    let status = match commands::run(&cli, &mut report) {
        Ok(()) => report.exit_status,
        Err(err) => {
            report.exit_status = 2;
            report.error = Some(format!("{err:#}"));
            if cli.format == Format::Text {
                eprintln!("error: {err:#}");
                return ExitCode::from(2);
            }
            2
        }
    };
    let rendered = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    // a closed pipe on stdout is not an error worth reporting
    let _ = std::io::stdout().write_all(rendered.as_bytes());
    ExitCode::from(status as u8)
}
