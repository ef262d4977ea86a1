//! Lower bounds from ground energies on the doubled space, and upper bounds
//! from product witnesses extracted from the corresponding ground vectors.

mod direct;
mod report;
mod saturate;
mod scan;
mod schmidt;
mod symmetry;

pub use direct::{direct_minimize, MAX_DIRECT_DIM};
pub use report::{decode_amplitudes, encode_amplitudes, AlphaScanResult, BoundReport, Method};
pub use saturate::{quality_ratio, saturating_state, Saturation, MANIFOLD_GRID};
pub use scan::{alpha_scan, golden_section, modified_ground_energy, ScanOptions, PARITY_TOL, REFINE_RESOLUTION};
pub use schmidt::{reshape, swap_asymmetry, symmetric_schmidt, takagi, top_takagi_value, SchmidtDecomposition};
pub use symmetry::{SymmetryHint, SymmetryKind, SYMMETRY_TOL};

use crate::eigen::{degenerate_ground_manifold, is_zero_energy, largest, lowest_k, SolverConfig, SpectralResult};
use crate::error::Result;
use crate::hamiltonian::{build_h_tot, build_h_tot_modified, ExtendedHamiltonian};
use crate::operator::{ObservableSet, PureState};

/// Schmidt coefficients within this of `1/√M` count as maximally entangled.
pub const MAX_ENTANGLED_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct BoundOptions {
    pub solver: SolverConfig,
    pub grid_points: usize,
    pub refine: bool,
    /// Eigenvalues within `gap_tol · max(1, |ε_gs|)` of the ground energy
    /// belong to the ground manifold.
    pub gap_tol: f64,
    /// Extract a product witness and an upper bound.
    pub witness: bool,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            grid_points: 101,
            refine: true,
            gap_tol: 1e-7,
            witness: true,
        }
    }
}

impl BoundOptions {
    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            grid_points: self.grid_points,
            refine: self.refine,
            solver: self.solver.clone(),
        }
    }

    fn gap(&self, ground: f64) -> f64 {
        self.gap_tol * ground.abs().max(1.0)
    }
}

/// Report for sets whose operators share an eigenvector: the minimum is zero.
fn common_eigenstate_report(set: &ObservableSet, method: Method) -> Result<BoundReport> {
    let mut report = BoundReport::new(0.0, method);
    report.note("the operators share an eigenvector, so the variance sum reaches zero");
    if let Some(v) = set.common_eigenvector() {
        let state = PureState::normalized(v)?;
        let value = set.v_tot(&state)?;
        report.set_upper(value, &state);
    }
    Ok(report)
}

/// Fills the upper-side fields from the ground manifold of `h`.
pub fn attach_witness(
    report: &mut BoundReport,
    set: &ObservableSet,
    h: &ExtendedHamiltonian,
    spec: &SpectralResult,
    opts: &BoundOptions,
) -> Result<Option<Saturation>> {
    let ground = spec.eigenvalues[0];
    let top = largest(h, &opts.solver)?;
    report.ground_energy = Some(ground);
    report.largest_energy = Some(top);
    let manifold = degenerate_ground_manifold(h, spec, opts.gap(ground), &opts.solver)?;
    match saturating_state(set, &manifold, ground, top, opts.solver.seed) {
        Ok(sat) => {
            report.lambda_max = Some(sat.lambda_max);
            report.quality_ratio = sat.quality_ratio;
            report.set_upper(sat.upper, &sat.state);
            if manifold.len() > 1 {
                report.note(format!("ground manifold of dimension {} searched for a product witness", manifold.len()));
            }
            if report.upper.is_some_and(|u| u < report.lower - 1e-9) {
                if report.set_restricted {
                    report.note(format!(
                        "witness value {:.9} lies outside the restricted state set; upper dropped",
                        sat.upper
                    ));
                    report.clear_upper();
                } else {
                    log::error!("witness value {} below the lower bound {}", sat.upper, report.lower);
                    report.note("witness value below the lower bound: numerical inconsistency");
                }
            }
            Ok(Some(sat))
        }
        Err(err) => {
            log::warn!("no symmetric product witness: {err}");
            report.note(format!("no symmetric product witness: {err}"));
            Ok(None)
        }
    }
}

/// Ground energy of `H_Tot`, or `ε₁ (1 − 1/M)` when it vanishes.
pub fn prop1_bound(set: &ObservableSet, opts: &BoundOptions) -> Result<BoundReport> {
    if set.has_common_eigenstate() {
        return common_eigenstate_report(set, Method::Prop1Gs);
    }
    let m = set.dim();
    let h = build_h_tot(set);
    let k = 2.min(h_dim(&h));
    let spec = lowest_k(&h, k, &opts.solver)?;
    let ground = spec.eigenvalues[0];
    let top = largest(&h, &opts.solver)?;

    let mut report = if !is_zero_energy(ground, top) {
        BoundReport::new(ground, Method::Prop1Gs)
    } else {
        let manifold = degenerate_ground_manifold(&h, &spec, opts.gap(ground), &opts.solver)?;
        if manifold.len() > 1 {
            let mut r = BoundReport::new(0.0, Method::Prop1Excited);
            r.note(format!(
                "zero-energy ground space has dimension {}; the excited-level bound does not apply",
                manifold.len()
            ));
            r
        } else {
            let excited = spec.eigenvalues[1];
            let dec = symmetric_schmidt(&manifold[0], m)?;
            let flat = 1.0 / (m as f64).sqrt();
            let maximal = dec.coefficients.iter().all(|c| (c - flat).abs() <= MAX_ENTANGLED_TOL);
            if maximal {
                let mut r = BoundReport::new(excited * (1.0 - 1.0 / m as f64), Method::Prop1Excited);
                r.note("zero-energy ground vector verified maximally entangled");
                r
            } else {
                let l = dec.lambda_max();
                let mut r = BoundReport::new(excited * (1.0 - l * l), Method::Prop1Excited);
                r.note(format!(
                    "zero-energy ground vector is not maximally entangled (largest Schmidt coefficient {l:.9}); bound uses it in place of 1/√M"
                ));
                r
            }
        }
    };
    report.ground_energy = Some(ground);
    report.largest_energy = Some(top);
    if opts.witness {
        attach_witness(&mut report, set, &h, &spec, opts)?;
    }
    Ok(report)
}

fn h_dim(h: &ExtendedHamiltonian) -> usize {
    h.base_dim() * h.base_dim()
}

/// `min_n ε_gs(H_{Tot,n})`: holds only for states with `<A_n> = 0` for some `n`.
pub fn prop2_bound(set: &ObservableSet, opts: &BoundOptions) -> Result<BoundReport> {
    if set.has_common_eigenstate() {
        let mut r = common_eigenstate_report(set, Method::Prop2)?;
        r.set_restricted = true;
        return Ok(r);
    }
    let mut best: Option<(usize, ExtendedHamiltonian, SpectralResult)> = None;
    for n in 0..set.len() {
        let h = build_h_tot_modified(set, n, 0.0)?;
        let spec = lowest_k(&h, 1, &opts.solver)?;
        if best.as_ref().is_none_or(|b| spec.eigenvalues[0] < b.2.eigenvalues[0]) {
            best = Some((n, h, spec));
        }
    }
    let (n, h, spec) = best.expect("sets are non-empty");
    let mut report = BoundReport::new(spec.eigenvalues[0], Method::Prop2);
    report.set_restricted = true;
    report.n_star = Some(n);
    report.alpha_star = Some(0.0);
    report.note("holds only on states with zero mean for at least one operator");
    if opts.witness {
        let spec = lowest_k(&h, 2.min(h_dim(&h)), &opts.solver)?;
        attach_witness(&mut report, set, &h, &spec, opts)?;
    }
    Ok(report)
}

/// Per-operator minima of `ε_gs(H_{Tot,n}^α)` over `α`. Operators pinned by
/// a verified continuous symmetry are evaluated at `α = 0` only.
pub fn prop3_scans(set: &ObservableSet, opts: &BoundOptions, hints: &[SymmetryHint]) -> Result<Vec<AlphaScanResult>> {
    let scan_opts = opts.scan_options();
    (0..set.len())
        .map(|n| {
            if hints.iter().any(|h| h.pins_alpha_of(n)) {
                let e = modified_ground_energy(set, n, 0.0, &opts.solver)?;
                return Ok(AlphaScanResult {
                    n,
                    grid: vec![(0.0, e)],
                    minimum: (0.0, e),
                    refined: false,
                    halved: false,
                    resolution: 0.0,
                    parity_deviation: None,
                });
            }
            let hint = hints
                .iter()
                .find(|h| h.halves_scan_of(n))
                .cloned()
                .unwrap_or_else(SymmetryHint::none);
            alpha_scan(set, n, &hint, &scan_opts)
        })
        .collect()
}

/// `max_n min_α ε_gs(H_{Tot,n}^α)`.
pub fn prop3_bound(set: &ObservableSet, opts: &BoundOptions, hints: &[SymmetryHint]) -> Result<BoundReport> {
    Ok(prop3_bound_with_scans(set, opts, hints)?.0)
}

pub fn prop3_bound_with_scans(
    set: &ObservableSet,
    opts: &BoundOptions,
    hints: &[SymmetryHint],
) -> Result<(BoundReport, Vec<AlphaScanResult>)> {
    if set.has_common_eigenstate() {
        return Ok((common_eigenstate_report(set, Method::Prop3)?, Vec::new()));
    }
    let scans = prop3_scans(set, opts, hints)?;
    let winner = scans
        .iter()
        .max_by(|a, b| a.minimum.1.total_cmp(&b.minimum.1))
        .expect("sets are non-empty");
    let (alpha, eps) = winner.minimum;
    let mut report = BoundReport::new(eps, Method::Prop3);
    report.n_star = Some(winner.n);
    report.alpha_star = Some(alpha);
    report.alpha_resolution = Some(winner.resolution);
    if winner.grid.len() == 1 {
        report.note("alpha fixed at 0 by a verified continuous symmetry");
    } else {
        report.note(format!(
            "minimum over alpha located to resolution {:.3e}; the bound assumes no narrower dip between grid points",
            winner.resolution
        ));
    }
    if report.lower <= 0.0 {
        log::warn!("prop3 lower bound is not positive");
    }
    if opts.witness {
        let h = build_h_tot_modified(set, winner.n, alpha)?;
        let spec = lowest_k(&h, 2.min(h_dim(&h)), &opts.solver)?;
        attach_witness(&mut report, set, &h, &spec, opts)?;
    }
    Ok((report, scans))
}

/// The larger of the two state-independent lower bounds, with its witness.
pub fn full_bound(set: &ObservableSet, opts: &BoundOptions, hints: &[SymmetryHint]) -> Result<BoundReport> {
    let p1 = prop1_bound(set, opts)?;
    let p3 = prop3_bound(set, opts, hints)?;
    let (l1, l3) = (p1.lower, p3.lower);
    let mut report = if l3 >= l1 { p3 } else { p1 };
    report.note(format!("ground-energy bound {l1:.9}; alpha-scan bound {l3:.9}"));
    Ok(report)
}
