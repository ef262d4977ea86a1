//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const THREADS_ENV: &str = "VARBOUND_THREADS";

#[derive(Debug, Parser)]
#[command(name = "varbound", version, about = "State-independent lower bounds on sums of variances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound the variance sum of an operator set loaded from JSON.
    Bound(BoundArgs),
    /// Run one of the built-in worked cases and check its reference values.
    ///
    /// With `--output PATH` it writes `PATH.json`, `PATH.csv` and, when the
    /// case has curves, `PATH_curves.csv`.
    Case(CaseArgs),
    /// Symmetric Schmidt decomposition of a doubled-space vector.
    Schmidt(SchmidtArgs),
    /// Direct minimization of the variance sum (an upper estimate).
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Prop1,
    Prop2,
    Prop3,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseId {
    Su2,
    Xz,
    Su3,
    Boson,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Eigensolver residual tolerance, in (0, 1e-2].
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Seed for every random start.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// α grid points per operator, at least 3.
    #[arg(long, default_value_t = 101)]
    pub grid_points: usize,
    /// Golden-section refinement around the best grid point.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub refine: bool,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Operator-set JSON file.
    #[arg(long)]
    pub ops: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Full)]
    pub method: MethodArg,
    /// Symmetry-hint JSON file.
    #[arg(long)]
    pub hint: Option<PathBuf>,
    #[command(flatten)]
    pub scan: ScanArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    #[arg(value_enum)]
    pub case: CaseId,
    /// Spin values (su2, xz), e.g. `3`, `1.5` or `9/2`; repeatable.
    #[arg(long, value_parser = parse_spin)]
    pub j: Vec<f64>,
    /// Largest spin (su2: all half-integers up to it; xz: default grid up to it).
    #[arg(long, value_parser = parse_spin)]
    pub j_max: Option<f64>,
    /// Fock truncations (boson); repeatable.
    #[arg(long)]
    pub nmax: Vec<usize>,
    #[command(flatten)]
    pub scan: ScanArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SchmidtArgs {
    /// Text file with one `re im` amplitude per line.
    #[arg(long)]
    pub vector: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub ops: PathBuf,
    /// Random starts in addition to the operator eigenvectors.
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[command(flatten)]
    pub common: Common,
}

/// Accepts decimals and fractions such as `9/2`.
pub fn parse_spin(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
            let den: f64 = den.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
            num / den
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    let twice = 2.0 * value;
    if !twice.is_finite() || twice < 1.0 || (twice - twice.round()).abs() > 1e-12 {
        return Err(format!("`{s}` is not a positive half-integer"));
    }
    Ok(value)
}
