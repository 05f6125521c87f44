use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod suites;

#[derive(Parser, Debug)]
#[command(name = "orbhurwitz", version, about = "Orbifold Hurwitz numbers, free energies, topological recursion and quantum curve checks")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Hurwitz-number cache file; read if present, rewritten after the run.
    #[arg(long, env = "ORBHURWITZ_CACHE", global = true)]
    pub cache: Option<PathBuf>,
    /// Allow parameters beyond the default desk-scale bounds
    /// (r ≤ 3, 2g − 2 + n ≤ 4, degree ≤ 12).
    #[arg(long, global = true)]
    pub unbounded: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print H_{g,n}^{(r)}(μ), or a table of them.
    Hurwitz(HurwitzArgs),
    /// Fit F_{g,n} in the ξ-basis and print it.
    FreeEnergy(FreeEnergyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Linear Hodge integrals read off a fitted free energy.
    Hodge(HodgeArgs),
    /// Fill or inspect the Hurwitz-number cache.
    Cache(CacheArgs),
}

#[derive(Args, Debug)]
pub struct HurwitzArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: u32,
    #[arg(long)]
    pub g: u32,
    /// Comma-separated profile over infinity.
    #[arg(long, value_delimiter = ',', required_unless_present = "table")]
    pub mu: Vec<u32>,
    /// Print every μ with `n` parts and |μ| ≤ dmax.
    #[arg(long, requires_all = ["n", "dmax"])]
    pub table: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dmax: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coords {
    Xi,
    T,
}

#[derive(Args, Debug)]
pub struct FreeEnergyArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: u32,
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub n: usize,
    /// `xi`: basis coefficients as JSON; `t`: principal specialization.
    #[arg(long, value_enum, default_value_t = Coords::Xi)]
    pub coords: Coords,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    CajOracle,
    DiffRecursion,
    Eo,
    Quantum,
    Xi,
    ResidueLemma,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Restrict to one r (default: 1, 2, 3).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: Option<u32>,
    /// Degree cap (caj-oracle: |μ|; quantum: x-degree, default 4r).
    #[arg(long)]
    pub dmax: Option<u32>,
    /// Simple-branch-point cap for caj-oracle.
    #[arg(long, default_value_t = 4)]
    pub smax: i64,
    /// A `g,n` case for diff-recursion and eo; repeatable.
    #[arg(long, value_parser = parse_gn)]
    pub gn: Vec<(u32, usize)>,
    /// Highest ħ-order for the quantum checks.
    #[arg(long, default_value_t = 5)]
    pub hbar: i64,
    /// Highest m for the S_m equation.
    #[arg(long, default_value_t = 4)]
    pub m_max: u32,
    /// Random inputs per r for the residue lemma.
    #[arg(long, default_value_t = 10)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the local chart series before running eo.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Args, Debug)]
pub struct HodgeArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: u32,
    #[arg(long)]
    pub g: u32,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Compare with the one-point generating function.
    #[arg(long)]
    pub check_one_point: bool,
}

#[derive(Args, Debug)]
pub struct CacheArgs {
    #[command(subcommand)]
    pub action: CacheAction,
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    /// Compute all H_g^{(r)}(μ) with |μ| ≤ dmax and g ≤ gmax into the cache.
    Fill {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        r: u32,
        #[arg(long)]
        dmax: u32,
        #[arg(long, default_value_t = 2)]
        gmax: u32,
    },
    /// Print the number of cached entries.
    Stats,
}

fn parse_gn(s: &str) -> Result<(u32, usize), String> {
    let (g, n) = s.split_once(',').ok_or_else(|| format!("expected g,n, got {:?}", s))?;
    let g = g.trim().parse().map_err(|e| format!("bad g: {}", e))?;
    let n = n.trim().parse().map_err(|e| format!("bad n: {}", e))?;
    Ok((g, n))
}

/// How a command ended; each maps to one exit code.
#[derive(Debug)]
pub enum Outcome {
    Pass,
    Failure,
    Usage(String),
    Invariant(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Outcome::Pass => ExitCode::SUCCESS,
        Outcome::Failure => ExitCode::from(1),
        Outcome::Usage(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Outcome::Invariant(msg) => {
            eprintln!("invariant breach: {}", msg);
            ExitCode::from(3)
        }
    }
}
