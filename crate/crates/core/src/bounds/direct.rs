//! Direct minimization of the variance sum over unit vectors.
//!
//! Multi-start Riemannian gradient descent on the unit sphere with
//! Barzilai–Borwein steps and Armijo backtracking. The result is the smallest
//! variance sum found, an upper estimate of the true minimum.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{BoundReport, Method};
use crate::error::{Error, Result};
use crate::linalg::random_unit_vector;
use crate::operator::{ObservableSet, PureState};
use crate::C64;

pub const MAX_DIRECT_DIM: usize = 64;
const MAX_ITERS: usize = 3000;
const GRAD_TOL: f64 = 1e-10;
const MAX_BACKTRACK: usize = 48;
const STALL_LIMIT: usize = 10;

struct Objective {
    ops: Vec<DMatrix<C64>>,
    squares: DMatrix<C64>,
}

impl Objective {
    fn new(set: &ObservableSet) -> Self {
        let ops: Vec<_> = set.iter().map(|a| a.entries().clone()).collect();
        let m = set.dim();
        let squares = ops.iter().fold(DMatrix::zeros(m, m), |acc, a| acc + a * a);
        Self { ops, squares }
    }

    /// Value and tangent gradient at a unit vector.
    fn eval(&self, psi: &DVector<C64>) -> (f64, DVector<C64>) {
        let mut grad = &self.squares * psi;
        let mut value = psi.dotc(&grad).re;
        for a in &self.ops {
            let ap = a * psi;
            let mean = psi.dotc(&ap).re;
            value -= mean * mean;
            grad.axpy(C64::new(-2.0 * mean, 0.0), &ap, C64::new(1.0, 0.0));
        }
        let radial = psi.dotc(&grad);
        grad.axpy(-radial, psi, C64::new(1.0, 0.0));
        (value.max(0.0), grad)
    }
}

fn descend(obj: &Objective, start: DVector<C64>) -> (f64, DVector<C64>) {
    let mut psi = start.normalize();
    let (mut f, mut g) = obj.eval(&psi);
    let mut step = 0.5;
    let mut stalled = 0;
    for _ in 0..MAX_ITERS {
        let gnorm2 = g.norm_squared();
        if gnorm2.sqrt() < GRAD_TOL {
            break;
        }
        let mut tau = step;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            let trial = (&psi - &g * C64::new(tau, 0.0)).normalize();
            let (ft, gt) = obj.eval(&trial);
            if ft <= f - 1e-4 * tau * gnorm2 {
                accepted = Some((trial, ft, gt));
                break;
            }
            tau *= 0.5;
        }
        // No sufficient decrease at any step length: rounding floor reached.
        let Some((next, fnext, gnext)) = accepted else {
            break;
        };
        // Barzilai–Borwein step from the change in position and gradient.
        let s = &next - &psi;
        let y = &gnext - &g;
        let sy = s.dotc(&y).re;
        step = if sy > 0.0 { (s.norm_squared() / sy).clamp(1e-6, 1e3) } else { tau * 2.0 };
        if f - fnext <= 1e-15 * f.abs().max(1.0) {
            stalled += 1;
        } else {
            stalled = 0;
        }
        psi = next;
        f = fnext;
        g = gnext;
        if stalled >= STALL_LIMIT {
            break;
        }
    }
    (f, psi)
}

/// Smallest variance sum over `restarts` random starts plus the eigenvectors
/// of every operator.
pub fn direct_minimize(set: &ObservableSet, restarts: usize, seed: u64) -> Result<BoundReport> {
    let m = set.dim();
    if m > MAX_DIRECT_DIM {
        return Err(Error::InvalidArgument(format!(
            "direct minimization is limited to dimension {MAX_DIRECT_DIM}, got {m}"
        )));
    }
    let obj = Objective::new(set);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<DVector<C64>> = (0..restarts).map(|_| random_unit_vector(m, &mut rng)).collect();
    for op in set.iter() {
        starts.extend(op.eigenbasis().column_iter().map(|c| c.into_owned()));
    }
    let results: Vec<(f64, DVector<C64>)> = starts.into_par_iter().map(|s| descend(&obj, s)).collect();
    let (value, psi) = results
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one start");
    let state = PureState::normalized(psi)?;
    let exact = set.v_tot(&state)?;
    let mut report = BoundReport::new(0.0, Method::DirectOracle);
    report.set_upper(exact, &state);
    report.note(format!(
        "direct minimization over {} starts; the value {value:.12} is an upper estimate of the minimum, not a lower bound",
        restarts + m * set.len()
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{make_spin_operators, su3_example_set, SpinMatrices};

    #[test]
    fn xz_spin_half_is_quarter() {
        let set = SpinMatrices::new(0.5).unwrap().xz_set().unwrap();
        let r = direct_minimize(&set, 16, 1).unwrap();
        assert!((r.upper.unwrap() - 0.25).abs() < 1e-9);
        assert_eq!(r.lower, 0.0);
    }

    #[test]
    fn su2_full_spin_two() {
        let r = direct_minimize(&make_spin_operators(2.0).unwrap(), 16, 3).unwrap();
        assert!((r.upper.unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn su3_pairs_match_reference_minima() {
        let set = su3_example_set();
        let r12 = direct_minimize(&set.subset(&[0, 1]).unwrap(), 64, 5).unwrap();
        assert!((r12.upper.unwrap() - 15.0 / 32.0).abs() < 1e-6);
        let r34 = direct_minimize(&set.subset(&[2, 3]).unwrap(), 64, 5).unwrap();
        assert!((r34.upper.unwrap() - 0.765727).abs() < 1e-5);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let set = su3_example_set();
        let obj = Objective::new(&set);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = random_unit_vector(3, &mut rng);
        let (f0, g) = obj.eval(&psi);
        let mut dir = random_unit_vector(3, &mut rng);
        let radial = psi.dotc(&dir);
        dir.axpy(-radial, &psi, C64::new(1.0, 0.0));
        let h = 1e-6;
        let (f1, _) = obj.eval(&(&psi + &dir * C64::new(h, 0.0)).normalize());
        let (f2, _) = obj.eval(&(&psi - &dir * C64::new(h, 0.0)).normalize());
        let numeric = (f1 - f2) / (2.0 * h);
        // df = 2 Re<g|dir> for the gradient with respect to the conjugate.
        let analytic = 2.0 * g.dotc(&dir).re;
        assert!((numeric - analytic).abs() < 1e-6, "{numeric} vs {analytic} (f = {f0})");
    }

    #[test]
    fn too_large_dimension() {
        let set = make_spin_operators(32.0).unwrap();
        assert!(direct_minimize(&set, 1, 0).is_err());
    }
}
