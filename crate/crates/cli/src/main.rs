//! `modinv`: modular data validation, invariant enumeration and α-induced sector systems.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modinv::{ErrorKind, ToleranceConfig};

#[derive(Parser, Debug)]
#[command(name = "modinv", version, about = "Modular invariants and alpha-induced sector systems")]
struct Cli {
    #[command(flatten)]
    input: InputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Modular data file (JSON); mutually exclusive with --builtin.
    #[arg(long, global = true, conflicts_with = "builtin")]
    pub file: Option<PathBuf>,
    /// Built-in data set.
    #[arg(long, global = true, value_enum)]
    pub builtin: Option<Builtin>,
    /// Level for `--builtin su2`.
    #[arg(long, global = true, default_value_t = 16)]
    pub level: u32,
    /// Working precision in bits.
    #[arg(long, global = true, env = "MODINV_PRECISION")]
    pub precision: Option<usize>,
    /// Snapping tolerance for integrality decisions.
    #[arg(long, global = true)]
    pub snap_eps: Option<f64>,
    /// Tolerance for axiom checks.
    #[arg(long, global = true)]
    pub val_eps: Option<f64>,
    /// Require (ST)³ = S² exactly rather than up to a phase.
    #[arg(long, global = true)]
    pub strict_phase: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    #[value(name = "e6-double")]
    E6Double,
    Su2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct EnumArgs {
    /// Allow Z₀₀ ≠ 1.
    #[arg(long, conflicts_with = "normalized")]
    pub unnormalized: bool,
    /// Only normalized invariants (the default).
    #[arg(long)]
    pub normalized: bool,
    /// Largest Z₀₀ considered when unnormalized.
    #[arg(long, default_value_t = 3)]
    pub max_vacuum: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the modular data axioms.
    Validate {
        /// Data file; same as --file.
        path: Option<PathBuf>,
    },
    /// Quantum dimensions, global index, conjugation and Frobenius-Schur indicators.
    Dims,
    /// Fusion coefficients from the Verlinde formula.
    Fusion {
        /// Only this label's matrix N_λ.
        #[arg(long)]
        label: Option<usize>,
    },
    /// Enumerate modular invariants.
    Enumerate {
        #[command(flatten)]
        opts: EnumArgs,
    },
    /// Decompose every product Z_a Z_bᵗ over the enumerated invariants.
    FuseTable {
        #[command(flatten)]
        opts: EnumArgs,
    },
    /// ι-Gram matrix of θ, its factorizations, and the matching invariant.
    Sectors {
        /// Labels of θ with multiplicity, e.g. 0,2,4.
        #[arg(long, value_delimiter = ',', required = true)]
        theta: Vec<usize>,
    },
    /// Irreducible sectors, blocks and sheets of the full induced system.
    FullSystem {
        /// Invariant name from `enumerate`, e.g. Z3.
        #[arg(long)]
        invariant: String,
        /// Labels of θ; defaults to the vacuum column of the invariant (type I only).
        #[arg(long, value_delimiter = ',')]
        theta: Option<Vec<usize>>,
    },
    /// Fusion graph of a generator on the full system.
    Graph {
        #[arg(long)]
        invariant: String,
        #[arg(long, value_delimiter = ',')]
        theta: Option<Vec<usize>>,
        /// `+λ` for α_λ⁺, `-λ` for α_λ⁻, or a word such as `a1+a5-`.
        #[arg(long, allow_hyphen_values = true)]
        generator: String,
    },
}

impl InputArgs {
    pub fn tolerances(&self) -> modinv::Result<ToleranceConfig> {
        let mut tol = ToleranceConfig::default();
        if let Some(p) = self.precision {
            tol = tol.with_precision(p);
        }
        if let Some(e) = self.snap_eps {
            tol.snap_eps = e;
        }
        if let Some(e) = self.val_eps {
            tol.validation_eps = e;
        }
        tol.check()?;
        Ok(tol)
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Validation => 1,
        ErrorKind::Parse => 2,
        ErrorKind::Computation => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut input = cli.input;
    let result = match cli.command {
        Command::Validate { path } => {
            if path.is_some() {
                input.file = path;
            }
            commands::validate_cmd(&input)
        }
        Command::Dims => commands::dims(&input),
        Command::Fusion { label } => commands::fusion(&input, label),
        Command::Enumerate { opts } => commands::enumerate(&input, &opts),
        Command::FuseTable { opts } => commands::fuse_table(&input, &opts),
        Command::Sectors { theta } => commands::sectors(&input, &theta),
        Command::FullSystem { invariant, theta } => commands::full_system_cmd(&input, &invariant, theta.as_deref()),
        Command::Graph {
            invariant,
            theta,
            generator,
        } => commands::graph(&input, &invariant, theta.as_deref(), &generator),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
