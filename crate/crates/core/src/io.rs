//! File formats: operator sets, doubled-space vectors and symmetry hints.
//!
//! Operator set (JSON):
//! `{"dim": M, "operators": [{"label": "A", "entries": [[[re, im], ...], ...]}]}`
//! with `entries` row-major.
//!
//! Doubled-space vector (text): one amplitude per line as `re im`,
//! whitespace-separated; blank lines and `#` comments are ignored. The
//! number of amplitudes must be a perfect square `M²`.
//!
//! Symmetry hints (JSON): one object or an array of objects,
//! `{"kind": "parity", "operator": 0 | "label", "matrix": [[[re, im], ...]]}`,
//! `{"kind": "rotation", "generator": [[[re, im], ...]]}` or `{"kind": "none"}`.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bounds::SymmetryHint;
use crate::error::{Error, Result};
use crate::operator::{HermitianOperator, ObservableSet};
use crate::C64;

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    label: String,
    entries: RawMatrix,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    dim: usize,
    operators: Vec<RawOperator>,
}

fn matrix_from_raw(raw: &RawMatrix, dim: usize) -> Result<DMatrix<C64>> {
    if raw.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: raw.len(),
        });
    }
    for row in raw {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.len(),
            });
        }
    }
    Ok(DMatrix::from_fn(dim, dim, |r, c| C64::new(raw[r][c][0], raw[r][c][1])))
}

fn matrix_to_raw(m: &DMatrix<C64>) -> RawMatrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

/// Parses and validates an operator-set document.
pub fn parse_observables(text: &str) -> Result<ObservableSet> {
    let raw: RawSet = serde_json::from_str(text)?;
    if raw.dim == 0 {
        return Err(Error::Parse("`dim` must be positive".into()));
    }
    if raw.operators.is_empty() {
        return Err(Error::Parse("`operators` must not be empty".into()));
    }
    let ops = raw
        .operators
        .iter()
        .map(|op| {
            // The first operator of a different size is reported against `dim`.
            let m = matrix_from_raw(&op.entries, raw.dim)?;
            HermitianOperator::new(op.label.clone(), m)
        })
        .collect::<Result<Vec<_>>>()?;
    ObservableSet::new(ops)
}

pub fn load_observables(path: impl AsRef<Path>) -> Result<ObservableSet> {
    parse_observables(&fs::read_to_string(path)?)
}

/// Operator-set document for `set`, readable by [`parse_observables`].
pub fn observables_to_json(set: &ObservableSet) -> Result<String> {
    let raw = RawSet {
        dim: set.dim(),
        operators: set
            .iter()
            .map(|op| RawOperator {
                label: op.label().to_string(),
                entries: matrix_to_raw(op.entries()),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&raw)?)
}

/// Parses a doubled-space vector; returns the amplitudes and `M`.
pub fn parse_doubled_vector(text: &str) -> Result<(DVector<C64>, usize)> {
    let mut amps = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected `re im`, found {} fields",
                lineno + 1,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            let x: f64 = s
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: `{s}` is not a number", lineno + 1)))?;
            if !x.is_finite() {
                return Err(Error::Parse(format!("line {}: non-finite value", lineno + 1)));
            }
            Ok(x)
        };
        amps.push(C64::new(parse(fields[0])?, parse(fields[1])?));
    }
    if amps.is_empty() {
        return Err(Error::Parse("no amplitudes found".into()));
    }
    let m = (amps.len() as f64).sqrt().round() as usize;
    if m * m != amps.len() {
        return Err(Error::Parse(format!(
            "{} amplitudes is not the square of a base dimension",
            amps.len()
        )));
    }
    Ok((DVector::from_vec(amps), m))
}

pub fn load_doubled_vector(path: impl AsRef<Path>) -> Result<(DVector<C64>, usize)> {
    parse_doubled_vector(&fs::read_to_string(path)?)
}

pub fn doubled_vector_to_text(v: &DVector<C64>) -> String {
    v.iter().map(|z| format!("{:e} {:e}\n", z.re, z.im)).collect()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OperatorRef {
    Index(usize),
    Label(String),
}

/// A symmetry hint as written in a file, before it is tied to a set.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawHint {
    Parity { operator: OperatorRef, matrix: RawMatrix },
    Rotation { generator: RawMatrix },
    None,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawHints {
    Many(Vec<RawHint>),
    One(RawHint),
}

pub fn parse_symmetry_hints(text: &str) -> Result<Vec<RawHint>> {
    Ok(match serde_json::from_str::<RawHints>(text)? {
        RawHints::Many(v) => v,
        RawHints::One(h) => vec![h],
    })
}

impl RawHint {
    /// Builds the hint for `set` and verifies it.
    pub fn resolve(&self, set: &ObservableSet) -> Result<SymmetryHint> {
        let m = set.dim();
        let hint = match self {
            RawHint::None => SymmetryHint::none(),
            RawHint::Rotation { generator } => SymmetryHint::rotation(matrix_from_raw(generator, m)?),
            RawHint::Parity { operator, matrix } => {
                let n = match operator {
                    OperatorRef::Index(i) => *i,
                    OperatorRef::Label(l) => set
                        .index_of(l)
                        .ok_or_else(|| Error::InvalidArgument(format!("no operator labelled `{l}`")))?,
                };
                SymmetryHint::parity(n, matrix_from_raw(matrix, m)?)
            }
        };
        hint.verify(set)
    }
}

pub fn load_symmetry_hints(path: impl AsRef<Path>, set: &ObservableSet) -> Result<Vec<SymmetryHint>> {
    parse_symmetry_hints(&fs::read_to_string(path)?)?
        .iter()
        .map(|h| h.resolve(set))
        .collect()
}

/// Writes `contents` to a temporary sibling and renames it into place, so a
/// failed run never leaves a partial file at `path`.
pub fn write_atomic(path: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("`{}` is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}
