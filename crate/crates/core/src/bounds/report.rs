use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::operator::PureState;
use crate::C64;

/// How the lower end of a [`BoundReport`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Ground energy of `H_Tot`.
    Prop1Gs,
    /// `ε₁ (1 − 1/M)` when the ground energy of `H_Tot` vanishes.
    Prop1Excited,
    /// `min_n ε_gs(H_{Tot,n})`, valid only on states with some `<A_n> = 0`.
    Prop2,
    /// `max_n min_α ε_gs(H_{Tot,n}^α)`.
    Prop3,
    /// Best variance sum found by direct minimization (an upper estimate).
    DirectOracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Prop1Gs => "prop1_gs",
            Method::Prop1Excited => "prop1_excited",
            Method::Prop2 => "prop2",
            Method::Prop3 => "prop3",
            Method::DirectOracle => "direct_oracle",
        }
    }
}

/// Interval `[lower, upper]` for the minimum of the variance sum, with the
/// witness state that realizes `upper`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lower: f64,
    pub upper: Option<f64>,
    pub width: Option<f64>,
    pub method: Method,
    pub n_star: Option<usize>,
    pub alpha_star: Option<f64>,
    pub lambda_max: Option<f64>,
    pub quality_ratio: Option<f64>,
    /// Amplitudes as `[re, im]` pairs.
    pub witness_state: Option<Vec<[f64; 2]>>,
    /// True when `lower` only holds on a subset of states.
    pub set_restricted: bool,
    /// Ground energy of the Hamiltonian the witness was extracted from.
    pub ground_energy: Option<f64>,
    /// Largest eigenvalue of that Hamiltonian.
    pub largest_energy: Option<f64>,
    /// Grid resolution in `α` of the scan behind `alpha_star`.
    pub alpha_resolution: Option<f64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(lower: f64, method: Method) -> Self {
        Self {
            lower: lower.max(0.0),
            upper: None,
            width: None,
            method,
            n_star: None,
            alpha_star: None,
            lambda_max: None,
            quality_ratio: None,
            witness_state: None,
            set_restricted: false,
            ground_energy: None,
            largest_energy: None,
            alpha_resolution: None,
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn set_upper(&mut self, upper: f64, witness: &PureState) {
        self.upper = Some(upper);
        self.width = Some(upper - self.lower);
        self.witness_state = Some(encode_amplitudes(witness.amplitudes()));
    }

    pub fn clear_upper(&mut self) {
        self.upper = None;
        self.width = None;
        self.witness_state = None;
    }

    pub fn witness(&self) -> Option<Result<PureState>> {
        self.witness_state
            .as_ref()
            .map(|amps| PureState::normalized(decode_amplitudes(amps)))
    }

    /// `lower ≥ 0` and `upper ≥ lower − tol` when both are present.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.lower >= 0.0 && self.upper.is_none_or(|u| u >= self.lower - tol)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn encode_amplitudes(v: &DVector<C64>) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn decode_amplitudes(pairs: &[[f64; 2]]) -> DVector<C64> {
    DVector::from_iterator(pairs.len(), pairs.iter().map(|p| C64::new(p[0], p[1])))
}

/// Minimum of `ε_{gs,n}^α` over `α` for one operator.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaScanResult {
    pub n: usize,
    /// `(α, ε_gs)` at the grid points, ascending in `α`.
    pub grid: Vec<(f64, f64)>,
    /// `(α*, ε*)`.
    pub minimum: (f64, f64),
    pub refined: bool,
    /// True when a verified parity symmetry restricted the grid to `α ≥ 0`.
    pub halved: bool,
    /// Spacing of the final search in `α`.
    pub resolution: f64,
    /// Largest `|ε(α) − ε(−α)|` seen on mirrored checks, when performed.
    pub parity_deviation: Option<f64>,
}
