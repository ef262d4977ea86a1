//! Symmetric Schmidt decomposition of swap-symmetric vectors.
//!
//! A vector `v` on `H_M ⊗ H_M` with `v[i*M + j] = C[i, j]` is swap-symmetric
//! exactly when `C` is complex symmetric. Such a matrix has a Takagi
//! factorization `C = W Σ Wᵀ` with `W` unitary, which is the Schmidt form
//! `v = Σ σ_k |w_k>|w_k>` with identical factors.
//!
//! The factorization is obtained from the real symmetric matrix
//! `[[Re C, Im C], [Im C, −Re C]]`: its eigenvalues come in pairs `±σ_k`, and
//! an eigenvector `[x; y]` for `σ_k ≥ 0` gives `w_k = x + i y` with
//! `C w̄_k = σ_k w_k`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{orthonormalize_against, symmetric_eigh};
use crate::operator::PureState;
use crate::C64;

/// Maximum `‖C − Cᵀ‖_F` accepted as swap-symmetric.
pub const SWAP_SYMMETRY_TOL: f64 = 1e-8;
/// Maximum reconstruction error for `symmetric_ok`.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
const NORM_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct SchmidtDecomposition {
    /// Descending, non-negative, unit ℓ² norm.
    pub coefficients: Vec<f64>,
    /// `factors[k]` is the state `|λ_k>` appearing as `|λ_k>|λ_k>`.
    #[serde(skip)]
    pub factors: Vec<DVector<C64>>,
    pub symmetric_ok: bool,
    pub reconstruction_error: f64,
}

impl SchmidtDecomposition {
    pub fn lambda_max(&self) -> f64 {
        self.coefficients[0]
    }

    /// The dominant factor as a normalized state.
    pub fn leading_state(&self) -> PureState {
        PureState::normalized(self.factors[0].clone()).expect("Takagi factors have unit norm")
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// `Σ λ_k |λ_k>|λ_k>` as a doubled-space vector.
    pub fn reconstruct(&self) -> DVector<C64> {
        let m = self.dim();
        let mut out = DVector::zeros(m * m);
        for (lam, w) in self.coefficients.iter().zip(&self.factors) {
            for i in 0..m {
                let a = w[i] * *lam;
                for j in 0..m {
                    out[i * m + j] += a * w[j];
                }
            }
        }
        out
    }
}

/// Reshape a doubled-space vector into its `M × M` coefficient matrix.
pub fn reshape(v: &DVector<C64>, m: usize) -> Result<DMatrix<C64>> {
    if v.len() != m * m {
        return Err(Error::DimensionMismatch {
            expected: m * m,
            found: v.len(),
        });
    }
    Ok(DMatrix::from_row_slice(m, m, v.as_slice()))
}

/// `‖C − Cᵀ‖_F` for the reshaped vector.
pub fn swap_asymmetry(v: &DVector<C64>, m: usize) -> Result<f64> {
    let c = reshape(v, m)?;
    Ok((&c - c.transpose()).norm())
}

/// Symmetric Schmidt decomposition of a unit, swap-symmetric vector.
pub fn symmetric_schmidt(v: &DVector<C64>, m: usize) -> Result<SchmidtDecomposition> {
    if m == 0 {
        return Err(Error::InvalidArgument("base dimension must be positive".into()));
    }
    let c = reshape(v, m)?;
    let norm = v.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let asymmetry = (&c - c.transpose()).norm();
    if asymmetry > SWAP_SYMMETRY_TOL {
        return Err(Error::NotSwapSymmetric { asymmetry });
    }
    let c = (&c + c.transpose()) * C64::new(0.5, 0.0);
    let (coefficients, factors) = takagi(&c);
    let mut out = SchmidtDecomposition {
        coefficients,
        factors,
        symmetric_ok: false,
        reconstruction_error: 0.0,
    };
    out.reconstruction_error = (out.reconstruct() - v).norm();
    out.symmetric_ok = out.reconstruction_error <= RECONSTRUCTION_TOL;
    Ok(out)
}

/// Takagi values (descending) and unitary factor columns of a complex
/// symmetric matrix.
pub fn takagi(c: &DMatrix<C64>) -> (Vec<f64>, Vec<DVector<C64>>) {
    let m = c.nrows();
    let real = DMatrix::from_fn(2 * m, 2 * m, |r, col| {
        let z = c[(r % m, col % m)];
        match (r < m, col < m) {
            (true, true) => z.re,
            (true, false) | (false, true) => z.im,
            (false, false) => -z.re,
        }
    });
    let (vals, vecs) = symmetric_eigh(&real);
    let scale = vals.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);

    let mut sigmas = Vec::with_capacity(m);
    let mut factors: Vec<DVector<C64>> = Vec::with_capacity(m);
    let mut null_candidates = Vec::new();
    for idx in (0..2 * m).rev() {
        let w = DVector::from_fn(m, |i, _| C64::new(vecs[(i, idx)], vecs[(i + m, idx)]));
        if factors.len() < m && vals[idx] > 1e-12 * scale {
            sigmas.push(vals[idx]);
            factors.push(w);
        } else {
            null_candidates.push(w);
        }
    }
    // Zero Takagi values: any completion to a unitary works.
    let standard = (0..m).map(|i| {
        let mut e = DVector::zeros(m);
        e[i] = C64::new(1.0, 0.0);
        e
    });
    for mut cand in null_candidates.into_iter().chain(standard) {
        if factors.len() == m {
            break;
        }
        if orthonormalize_against(&mut cand, &factors) > 1e-6 {
            sigmas.push(0.0);
            factors.push(cand);
        }
    }
    (sigmas, factors)
}

/// Largest Takagi value (equal to the largest singular value) by power
/// iteration on `C C†`, warm-started from `start` when given.
pub fn top_takagi_value(c: &DMatrix<C64>, start: Option<&DVector<C64>>) -> (f64, DVector<C64>) {
    let m = c.nrows();
    let mut u = match start {
        Some(s) if s.norm() > 0.0 => s.normalize(),
        _ => DVector::from_fn(m, |i, _| C64::new(1.0 + i as f64 * 1e-3, 0.5)).normalize(),
    };
    let ch = c.adjoint();
    let mut sigma = 0.0;
    for _ in 0..2000 {
        let w = &ch * &u;
        let s_new = w.norm();
        if s_new == 0.0 {
            return (0.0, u);
        }
        let next = (c * &w).normalize();
        let done = (s_new - sigma).abs() <= 1e-14 * s_new;
        sigma = s_new;
        u = next;
        if done {
            break;
        }
    }
    (sigma, u)
}
