//! Scan of `ε_gs(H_{Tot,n}^α)` over `α ∈ [a_{n,1}, a_{n,M}]`.

use rayon::prelude::*;

use super::report::AlphaScanResult;
use super::symmetry::SymmetryHint;
use crate::eigen::{lowest_k, SolverConfig};
use crate::error::{Error, Result};
use crate::hamiltonian::build_h_tot_modified;
use crate::operator::ObservableSet;

/// Golden-section refinement stops once the bracket is below this fraction
/// of the spectral range.
pub const REFINE_RESOLUTION: f64 = 1e-4;
/// Allowed `|ε(α) − ε(−α)|` under a verified parity.
pub const PARITY_TOL: f64 = 1e-8;
const PARITY_PAIRS: usize = 5;

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub grid_points: usize,
    pub refine: bool,
    pub solver: SolverConfig,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            grid_points: 101,
            refine: true,
            solver: SolverConfig::default(),
        }
    }
}

/// Ground energy of `H_{Tot,n}^α`, with failures tagged by `α`.
pub fn modified_ground_energy(set: &ObservableSet, n: usize, alpha: f64, cfg: &SolverConfig) -> Result<f64> {
    let h = build_h_tot_modified(set, n, alpha)?;
    lowest_k(&h, 1, cfg)
        .map(|spec| spec.eigenvalues[0])
        .map_err(|e| Error::AlphaScan {
            alpha,
            source: Box::new(e),
        })
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

pub fn alpha_scan(set: &ObservableSet, n: usize, hint: &SymmetryHint, opts: &ScanOptions) -> Result<AlphaScanResult> {
    let op = set.get(n)?;
    if opts.grid_points < 3 {
        return Err(Error::InvalidArgument(format!(
            "alpha grid needs at least 3 points, got {}",
            opts.grid_points
        )));
    }
    let (lo_full, hi) = (op.min_eigenvalue(), op.max_eigenvalue());
    let range = hi - lo_full;
    let halved = hint.halves_scan_of(n);
    let lo = if halved { 0.0_f64.max(lo_full).min(hi) } else { lo_full };

    let alphas = linspace(lo, hi, opts.grid_points);
    let energies = alphas
        .par_iter()
        .map(|&a| modified_ground_energy(set, n, a, &opts.solver))
        .collect::<Result<Vec<f64>>>()?;
    let grid: Vec<(f64, f64)> = alphas.iter().copied().zip(energies).collect();

    let mut parity_deviation = None;
    if halved {
        let candidates: Vec<(f64, f64)> = grid.iter().copied().filter(|&(a, _)| a > 0.0).collect();
        let step = (candidates.len() / PARITY_PAIRS).max(1);
        let picks: Vec<(f64, f64)> = candidates.into_iter().step_by(step).take(PARITY_PAIRS).collect();
        let mirrored = picks
            .par_iter()
            .map(|&(a, _)| modified_ground_energy(set, n, -a, &opts.solver))
            .collect::<Result<Vec<f64>>>()?;
        let mut worst: f64 = 0.0;
        for (&(a, e), m) in picks.iter().zip(mirrored) {
            let dev = (e - m).abs();
            if dev > PARITY_TOL {
                return Err(Error::ParityViolation { alpha: a, deviation: dev });
            }
            worst = worst.max(dev);
        }
        parity_deviation = Some(worst);
    }

    let best = grid
        .iter()
        .enumerate()
        .min_by(|x, y| x.1 .1.total_cmp(&y.1 .1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    let spacing = (hi - lo) / (opts.grid_points - 1) as f64;
    let mut minimum = grid[best];
    let mut resolution = spacing;
    let mut refined = false;

    if opts.refine && range > 0.0 {
        let a = grid[best.saturating_sub(1)].0;
        let b = grid[(best + 1).min(grid.len() - 1)].0;
        let (alpha, eps, res) = golden_section(a, b, REFINE_RESOLUTION * range, |x| {
            modified_ground_energy(set, n, x, &opts.solver)
        })?;
        if eps < minimum.1 {
            minimum = (alpha, eps);
        }
        resolution = res;
        refined = true;
    }

    Ok(AlphaScanResult {
        n,
        grid,
        minimum,
        refined,
        halved,
        resolution,
        parity_deviation,
    })
}

/// Golden-section search for a minimum of `f` on `[a, b]`. Returns the best
/// point seen, its value and the final bracket width.
pub fn golden_section<F>(mut a: f64, mut b: f64, resolution: f64, f: F) -> Result<(f64, f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while (b - a).abs() > resolution {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        for cand in [(c, fc), (d, fd)] {
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    Ok((best.0, best.1, (b - a).abs()))
}
