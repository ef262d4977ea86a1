//! Report serialization and file emission.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use varbound::bounds::{encode_amplitudes, BoundReport, SchmidtDecomposition};
use varbound::io::write_atomic;

use crate::commands::CliError;

/// Writes to `path` atomically, or to standard output.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => Ok(write_atomic(p, contents.as_bytes())?),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes()).map_err(varbound::Error::from)?;
            if !contents.ends_with('\n') {
                out.write_all(b"\n").map_err(varbound::Error::from)?;
            }
            Ok(())
        }
    }
}

pub fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn fmt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.12e}")).unwrap_or_default()
}

/// One header row and one value row.
pub fn bound_csv(report: &BoundReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "lower",
        "upper",
        "width",
        "method",
        "n_star",
        "alpha_star",
        "lambda_max",
        "quality_ratio",
        "set_restricted",
        "ground_energy",
    ])
    .map_err(varbound::Error::from)?;
    w.write_record([
        fmt(Some(report.lower)),
        fmt(report.upper),
        fmt(report.width),
        report.method.as_str().to_string(),
        report.n_star.map(|n| n.to_string()).unwrap_or_default(),
        fmt(report.alpha_star),
        fmt(report.lambda_max),
        fmt(report.quality_ratio),
        report.set_restricted.to_string(),
        fmt(report.ground_energy),
    ])
    .map_err(varbound::Error::from)?;
    finish(w)
}

#[derive(Serialize)]
struct SchmidtJson<'a> {
    dim: usize,
    lambda_max: f64,
    coefficients: &'a [f64],
    symmetric_ok: bool,
    reconstruction_error: f64,
    leading_state: Vec<[f64; 2]>,
}

pub fn schmidt_json(s: &SchmidtDecomposition) -> Result<String, CliError> {
    let doc = SchmidtJson {
        dim: s.dim(),
        lambda_max: s.lambda_max(),
        coefficients: &s.coefficients,
        symmetric_ok: s.symmetric_ok,
        reconstruction_error: s.reconstruction_error,
        leading_state: encode_amplitudes(s.leading_state().amplitudes()),
    };
    Ok(serde_json::to_string_pretty(&doc).map_err(varbound::Error::from)?)
}

/// `k,coefficient` rows.
pub fn schmidt_csv(s: &SchmidtDecomposition) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "coefficient"]).map_err(varbound::Error::from)?;
    for (k, c) in s.coefficients.iter().enumerate() {
        w.write_record([k.to_string(), fmt(Some(*c))]).map_err(varbound::Error::from)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| varbound::Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
