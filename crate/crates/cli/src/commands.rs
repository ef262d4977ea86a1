//! Command dispatch and exit-code mapping.

use std::path::Path;

use thiserror::Error;
use varbound::bounds::{full_bound, prop1_bound, prop2_bound, prop3_bound, symmetric_schmidt, BoundOptions};
use varbound::cases::{
    case_boson_xn, case_planar_xz, case_su2_full, case_su3, CaseOptions, CaseReport, BOSON_DEFAULT_NMAX,
    XZ_DEFAULT_J,
};
use varbound::io::{load_doubled_vector, load_observables, load_symmetry_hints};
use varbound::SolverConfig;

use crate::config::{
    BoundArgs, CaseArgs, CaseId, Cli, Command, Common, Format, MethodArg, OracleArgs, ScanArgs, SchmidtArgs,
    THREADS_ENV,
};
use crate::output::{bound_csv, emit, schmidt_csv, schmidt_json, with_suffix};

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_CHECKS_FAILED: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] varbound::Error),
    #[error("{0}")]
    Config(String),
    #[error("{count} check(s) failed:\n{list}")]
    ChecksFailed { count: usize, list: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_non_convergence() => EXIT_NOT_CONVERGED,
            CliError::Core(_) | CliError::Config(_) => EXIT_VALIDATION,
            CliError::ChecksFailed { .. } => EXIT_CHECKS_FAILED,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Bound(args) => cmd_bound(&args),
        Command::Case(args) => cmd_case(&args),
        Command::Schmidt(args) => cmd_schmidt(&args),
        Command::Oracle(args) => cmd_oracle(&args),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV}={raw} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot configure {n} threads: {e}")))
}

fn solver(common: &Common) -> Result<SolverConfig, CliError> {
    if !(common.tol > 0.0 && common.tol <= 1e-2) {
        return Err(CliError::Config(format!("--tol {} must lie in (0, 1e-2]", common.tol)));
    }
    Ok(SolverConfig::default().with_tol(common.tol).with_seed(common.seed))
}

fn check_scan(scan: &ScanArgs) -> Result<(), CliError> {
    if scan.grid_points < 3 {
        return Err(CliError::Config(format!("--grid-points {} must be at least 3", scan.grid_points)));
    }
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> Result<(), CliError> {
    check_scan(&args.scan)?;
    let opts = BoundOptions {
        solver: solver(&args.common)?,
        grid_points: args.scan.grid_points,
        refine: args.scan.refine,
        ..Default::default()
    };
    let set = load_observables(&args.ops)?;
    let hints = match &args.hint {
        Some(path) => load_symmetry_hints(path, &set)?,
        None => Vec::new(),
    };
    let report = match args.method {
        MethodArg::Prop1 => prop1_bound(&set, &opts)?,
        MethodArg::Prop2 => prop2_bound(&set, &opts)?,
        MethodArg::Prop3 => prop3_bound(&set, &opts, &hints)?,
        MethodArg::Full => full_bound(&set, &opts, &hints)?,
    };
    let text = match args.common.format {
        Format::Json => report.to_json()?,
        Format::Csv => bound_csv(&report)?,
    };
    emit(args.common.output.as_deref(), &text)
}

fn su2_spins(args: &CaseArgs) -> Vec<f64> {
    if !args.j.is_empty() {
        return args.j.clone();
    }
    let top = args.j_max.unwrap_or(10.0);
    (1..=(2.0 * top).round() as usize).map(|k| k as f64 / 2.0).collect()
}

fn xz_spins(args: &CaseArgs) -> Result<Vec<f64>, CliError> {
    if !args.j.is_empty() {
        return Ok(args.j.clone());
    }
    let top = args.j_max.unwrap_or(f64::INFINITY);
    let spins: Vec<f64> = XZ_DEFAULT_J.iter().copied().filter(|&j| j <= top).collect();
    if spins.is_empty() {
        return Err(CliError::Config(format!("no default spin value is at most {top}")));
    }
    Ok(spins)
}

fn cmd_case(args: &CaseArgs) -> Result<(), CliError> {
    check_scan(&args.scan)?;
    let opts = CaseOptions {
        solver: solver(&args.common)?,
        seed: args.common.seed,
        grid_points: args.scan.grid_points,
        ..Default::default()
    };
    let spin_flags = !args.j.is_empty() || args.j_max.is_some();
    let report = match args.case {
        CaseId::Su2 => case_su2_full(&su2_spins(args), &opts)?,
        CaseId::Xz => case_planar_xz(&xz_spins(args)?, &opts)?,
        CaseId::Su3 => {
            if spin_flags || !args.nmax.is_empty() {
                return Err(CliError::Config("the su3 case takes no --j, --j-max or --nmax".into()));
            }
            case_su3(&opts)?
        }
        CaseId::Boson => {
            if spin_flags {
                return Err(CliError::Config("the boson case takes --nmax, not --j".into()));
            }
            let n: &[usize] = if args.nmax.is_empty() { BOSON_DEFAULT_NMAX } else { &args.nmax };
            case_boson_xn(n, &opts)?
        }
    };
    write_case(&report, &args.common)?;
    let failed = report.failed_checks();
    if failed.is_empty() {
        return Ok(());
    }
    Err(CliError::ChecksFailed {
        count: failed.len(),
        list: failed
            .iter()
            .map(|c| format!("  {}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn write_case(report: &CaseReport, common: &Common) -> Result<(), CliError> {
    match &common.output {
        Some(base) => {
            write_case_files(report, base)?;
        }
        None => {
            let text = match common.format {
                Format::Json => report.to_json()?,
                Format::Csv => report.to_csv()?,
            };
            emit(None, &text)?;
        }
    }
    Ok(())
}

/// Renders everything first so a serialization error leaves no files behind.
fn write_case_files(report: &CaseReport, base: &Path) -> Result<(), CliError> {
    let json = report.to_json()?;
    let csv = report.to_csv()?;
    let curves = if report.curves.is_empty() { None } else { Some(report.curves_csv()?) };
    emit(Some(&with_suffix(base, ".json")), &json)?;
    emit(Some(&with_suffix(base, ".csv")), &csv)?;
    if let Some(c) = curves {
        emit(Some(&with_suffix(base, "_curves.csv")), &c)?;
    }
    Ok(())
}

fn cmd_schmidt(args: &SchmidtArgs) -> Result<(), CliError> {
    solver(&args.common)?;
    let (v, m) = load_doubled_vector(&args.vector)?;
    let s = symmetric_schmidt(&v, m)?;
    let text = match args.common.format {
        Format::Json => schmidt_json(&s)?,
        Format::Csv => schmidt_csv(&s)?,
    };
    emit(args.common.output.as_deref(), &text)
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    solver(&args.common)?;
    let set = load_observables(&args.ops)?;
    let report = varbound::bounds::direct_minimize(&set, args.restarts, args.common.seed)?;
    let text = match args.common.format {
        Format::Json => report.to_json()?,
        Format::Csv => bound_csv(&report)?,
    };
    emit(args.common.output.as_deref(), &text)
}
