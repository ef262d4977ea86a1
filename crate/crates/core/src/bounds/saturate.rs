//! Product witnesses `|ψ>|ψ>` near a ground manifold on the doubled space.
//!
//! For a unit vector `v` in the manifold, the best product overlap
//! `max_ψ |<ψψ|v>|` is its largest Takagi value `λ_Max(v)`. The search
//! maximizes it over the manifold: a grid over two-vector combinations,
//! then alternating ascent `v ← P(ψ⊗ψ)/‖·‖`, `ψ ← top factor of v`, which
//! never decreases `λ_Max`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::schmidt::{reshape, symmetric_schmidt, top_takagi_value, SchmidtDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{kron_vec, orthonormalize_against, random_unit_vector};
use crate::operator::{ObservableSet, PureState};
use crate::C64;

/// Points per axis of the `(t, φ)` grid for two-dimensional manifolds.
const PRODUCT_TOL: f64 = 1e-12;
pub const MANIFOLD_GRID: usize = 64;
const ASCENT_STEPS: usize = 500;
const ASCENT_TOL: f64 = 1e-13;
const RANDOM_STARTS: usize = 8;

#[derive(Clone, Debug)]
pub struct Saturation {
    pub lambda_max: f64,
    pub state: PureState,
    /// `V_Tot(ψ_sat)`.
    pub upper: f64,
    /// `(λ²/(1−λ²)) / (ε_K/ε)`; `None` when `λ = 1` or `ε = 0`.
    pub quality_ratio: Option<f64>,
    /// Decomposition of the manifold vector that realizes `lambda_max`.
    pub schmidt: SchmidtDecomposition,
    pub manifold_dim: usize,
}

/// `(λ²/(1−λ²)) / (ε_K/ε)`.
pub fn quality_ratio(lambda_max: f64, ground: f64, largest: f64) -> Option<f64> {
    let l2 = lambda_max * lambda_max;
    if l2 >= 1.0 - 1e-15 || ground <= 0.0 || largest <= 0.0 {
        return None;
    }
    Some((l2 / (1.0 - l2)) / (largest / ground))
}

fn symmetrized(v: &DVector<C64>, m: usize) -> DVector<C64> {
    let c = DMatrix::from_row_slice(m, m, v.as_slice());
    let s = (&c + c.transpose()) * C64::new(0.5, 0.0);
    let flat = DVector::from_column_slice(s.transpose().as_slice());
    let norm = flat.norm();
    if norm > 0.0 {
        flat / C64::new(norm, 0.0)
    } else {
        flat
    }
}

fn project(manifold: &[DVector<C64>], x: &DVector<C64>) -> DVector<C64> {
    let mut out = DVector::zeros(x.len());
    for b in manifold {
        out.axpy(b.dotc(x), b, C64::new(1.0, 0.0));
    }
    out
}

/// Alternating ascent from `v`; returns the final manifold vector and its
/// decomposition.
fn ascend(manifold: &[DVector<C64>], v: DVector<C64>, m: usize) -> Result<(DVector<C64>, SchmidtDecomposition)> {
    let mut v = v;
    let mut dec = symmetric_schmidt(&v, m)?;
    for _ in 0..ASCENT_STEPS {
        let w = &dec.factors[0];
        let p = project(manifold, &kron_vec(w, w));
        let norm = p.norm();
        if norm == 0.0 {
            break;
        }
        let next = symmetrized(&(p / C64::new(norm, 0.0)), m);
        let next_dec = symmetric_schmidt(&next, m)?;
        let gain = next_dec.lambda_max() - dec.lambda_max();
        if gain < -1e-12 {
            break;
        }
        v = next;
        dec = next_dec;
        if gain < ASCENT_TOL {
            break;
        }
    }
    Ok((v, dec))
}

/// Best symmetric product witness in the span of `manifold` (orthonormal,
/// swap-symmetric vectors on `H_M ⊗ H_M`).
pub fn saturating_state(
    set: &ObservableSet,
    manifold: &[DVector<C64>],
    ground: f64,
    largest: f64,
    seed: u64,
) -> Result<Saturation> {
    let m = set.dim();
    if manifold.is_empty() {
        return Err(Error::InvalidArgument("empty ground manifold".into()));
    }
    // Only the swap-symmetric part of the manifold can overlap with |ψ>|ψ>.
    let mut sym: Vec<DVector<C64>> = Vec::with_capacity(manifold.len());
    for v in manifold {
        let c = DMatrix::from_row_slice(m, m, v.as_slice());
        let s = (&c + c.transpose()) * C64::new(0.5, 0.0);
        let mut flat = DVector::from_column_slice(s.transpose().as_slice());
        if orthonormalize_against(&mut flat, &sym) > 1e-6 {
            sym.push(flat);
        }
    }
    if sym.is_empty() {
        return Err(Error::NotSwapSymmetric { asymmetry: 1.0 });
    }
    let manifold = sym;

    let mut starts: Vec<DVector<C64>> = manifold.clone();
    if manifold.len() == 2 {
        starts.push(grid_search(&manifold, m)?);
    } else if manifold.len() > 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_STARTS {
            let coeffs = random_unit_vector(manifold.len(), &mut rng);
            let mut v = DVector::zeros(m * m);
            for (c, b) in coeffs.iter().zip(&manifold) {
                v.axpy(*c, b, C64::new(1.0, 0.0));
            }
            starts.push(symmetrized(&v, m));
        }
    }

    let mut best: Option<(DVector<C64>, SchmidtDecomposition)> = None;
    for s in starts {
        let candidate = ascend(&manifold, s, m)?;
        let better = best
            .as_ref()
            .is_none_or(|(_, d)| candidate.1.lambda_max() > d.lambda_max() + 1e-14);
        if better {
            best = Some(candidate);
        }
        // λ_Max cannot exceed one: an exact product state ends the search.
        if best.as_ref().is_some_and(|(_, d)| d.lambda_max() >= 1.0 - PRODUCT_TOL) {
            break;
        }
    }
    let (_, schmidt) = best.expect("at least one start");
    if !schmidt.symmetric_ok {
        return Err(Error::NotSwapSymmetric {
            asymmetry: schmidt.reconstruction_error,
        });
    }
    let state = schmidt.leading_state();
    let upper = set.v_tot(&state)?;
    let lambda_max = schmidt.lambda_max();
    Ok(Saturation {
        lambda_max,
        state,
        upper,
        quality_ratio: quality_ratio(lambda_max, ground, largest),
        schmidt,
        manifold_dim: manifold.len(),
    })
}

/// Best `cos t · v₁ + e^{iφ} sin t · v₂` on the `(t, φ)` grid.
fn grid_search(manifold: &[DVector<C64>], m: usize) -> Result<DVector<C64>> {
    let (c1, c2) = (reshape(&manifold[0], m)?, reshape(&manifold[1], m)?);
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut warm: Option<DVector<C64>> = None;
    for ti in 0..MANIFOLD_GRID {
        let t = std::f64::consts::FRAC_PI_2 * ti as f64 / (MANIFOLD_GRID - 1) as f64;
        for pi in 0..MANIFOLD_GRID {
            let phi = std::f64::consts::TAU * pi as f64 / MANIFOLD_GRID as f64;
            let c = &c1 * C64::new(t.cos(), 0.0) + &c2 * C64::from_polar(t.sin(), phi);
            let (sigma, u) = top_takagi_value(&c, warm.as_ref());
            warm = Some(u);
            if sigma > best.0 {
                best = (sigma, t, phi);
            }
        }
    }
    let (_, t, phi) = best;
    let v = &manifold[0] * C64::new(t.cos(), 0.0) + &manifold[1] * C64::from_polar(t.sin(), phi);
    Ok(symmetrized(&v, m))
}
