//! End-to-end reproductions of four worked examples, each producing a
//! [`CaseReport`] with computed values, reference values and checks.

mod boson;
mod su2;
mod su3;
mod xz;

pub use boson::{case_boson_xn, squeezed_vacuum, squeezed_vacuum_variance_sum, BOSON_DEFAULT_NMAX};
pub use su2::case_su2_full;
pub use su3::case_su3;
pub use xz::{case_planar_xz, theta_m, two_axis_state, v_min1_fit, v_min2_fit, v_xz_boson, XZ_DEFAULT_J};

use serde::Serialize;

use crate::bounds::BoundReport;
use crate::eigen::SolverConfig;
use crate::error::Result;

/// Where a reference value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Quoted from the published worked example.
    Published,
    /// Evaluated from a closed-form expression.
    ClosedForm,
    /// Produced by an independent numerical method in this crate.
    IndependentOracle,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reference {
    pub name: String,
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct CasePoint {
    pub label: String,
    pub parameter: Option<f64>,
    pub report: BoundReport,
    pub values: Vec<NamedValue>,
    pub references: Vec<Reference>,
    pub relative_errors: Vec<NamedValue>,
}

/// `|x − ref| / |ref|`.
pub fn relative_error(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

impl CasePoint {
    pub fn new(label: impl Into<String>, parameter: Option<f64>, report: BoundReport) -> Self {
        Self {
            label: label.into(),
            parameter,
            report,
            values: Vec::new(),
            references: Vec::new(),
            relative_errors: Vec::new(),
        }
    }

    pub fn value(&mut self, name: &str, value: f64) {
        self.values.push(NamedValue {
            name: name.into(),
            value,
        });
    }

    pub fn reference(&mut self, name: &str, value: f64, provenance: Provenance) {
        self.references.push(Reference {
            name: name.into(),
            value,
            provenance,
        });
    }

    /// Records `|computed − reference| / |reference|` under `name`.
    pub fn relative(&mut self, name: &str, computed: f64, reference: f64) -> f64 {
        let e = relative_error(computed, reference);
        self.relative_errors.push(NamedValue {
            name: name.into(),
            value: e,
        });
        e
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|v| v.name == name).map(|v| v.value)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Non-fatal checks are flags: they are reported but do not fail the case.
    pub fatal: bool,
    pub detail: String,
}

/// Named data series, e.g. `ε(α)` curves.
#[derive(Clone, Debug, Serialize)]
pub struct Curve {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case_id: String,
    pub parameter_name: String,
    pub points: Vec<CasePoint>,
    pub checks: Vec<Check>,
    pub curves: Vec<Curve>,
    pub notes: Vec<String>,
}

impl CaseReport {
    pub fn new(case_id: &str, parameter_name: &str) -> Self {
        Self {
            case_id: case_id.into(),
            parameter_name: parameter_name.into(),
            points: Vec::new(),
            checks: Vec::new(),
            curves: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.into(),
            passed,
            fatal: true,
            detail: detail.into(),
        });
        passed
    }

    pub fn flag(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.into(),
            passed,
            fatal: false,
            detail: detail.into(),
        });
        passed
    }

    /// `|computed − expected| ≤ tol`.
    pub fn check_close(&mut self, name: impl Into<String>, computed: f64, expected: f64, tol: f64) -> bool {
        let dev = (computed - expected).abs();
        self.check(
            name,
            dev <= tol,
            format!("computed {computed:.9}, expected {expected:.9} ± {tol:e} (deviation {dev:.3e})"),
        )
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.fatal)
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.fatal && !c.passed).collect()
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn point(&self, label: &str) -> Option<&CasePoint> {
        self.points.iter().find(|p| p.label == label)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per point: label, parameter, bounds, computed values,
    /// `ref_*` reference columns and `relerr_*` relative errors.
    pub fn to_csv(&self) -> Result<String> {
        let mut value_cols: Vec<String> = Vec::new();
        let mut ref_cols: Vec<String> = Vec::new();
        let mut err_cols: Vec<String> = Vec::new();
        let push = |cols: &mut Vec<String>, name: &str| {
            if !cols.iter().any(|c| c == name) {
                cols.push(name.to_string());
            }
        };
        for p in &self.points {
            p.values.iter().for_each(|v| push(&mut value_cols, &v.name));
            p.references.iter().for_each(|r| push(&mut ref_cols, &r.name));
            p.relative_errors.iter().for_each(|e| push(&mut err_cols, &e.name));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "label".to_string(),
            self.parameter_name.clone(),
            "lower".into(),
            "upper".into(),
            "method".into(),
        ];
        header.extend(value_cols.iter().cloned());
        header.extend(ref_cols.iter().map(|c| format!("ref_{c}")));
        header.extend(err_cols.iter().map(|c| format!("relerr_{c}")));
        w.write_record(&header)?;
        let fmt = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_default();
        for p in &self.points {
            let mut row = vec![
                p.label.clone(),
                fmt(p.parameter),
                fmt(Some(p.report.lower)),
                fmt(p.report.upper),
                p.report.method.as_str().to_string(),
            ];
            row.extend(value_cols.iter().map(|c| fmt(p.get(c))));
            row.extend(
                ref_cols
                    .iter()
                    .map(|c| fmt(p.references.iter().find(|r| &r.name == c).map(|r| r.value))),
            );
            row.extend(
                err_cols
                    .iter()
                    .map(|c| fmt(p.relative_errors.iter().find(|e| &e.name == c).map(|e| e.value))),
            );
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::error::Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Curves in long form: `curve,x,y`.
    pub fn curves_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["curve", "x", "y"])?;
        for c in &self.curves {
            for (x, y) in &c.points {
                w.write_record([c.name.clone(), format!("{x:.12e}"), format!("{y:.12e}")])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| crate::error::Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[derive(Clone, Debug)]
pub struct CaseOptions {
    pub solver: SolverConfig,
    pub seed: u64,
    pub direct_restarts: usize,
    pub grid_points: usize,
}

impl Default for CaseOptions {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            seed: 7,
            direct_restarts: 200,
            grid_points: 101,
        }
    }
}

impl CaseOptions {
    pub fn bound_options(&self) -> crate::bounds::BoundOptions {
        crate::bounds::BoundOptions {
            solver: self.solver.clone().with_seed(self.seed),
            grid_points: self.grid_points,
            ..Default::default()
        }
    }
}
