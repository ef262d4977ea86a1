//! Lowest eigenpairs of Hermitian operators on the doubled space.
//!
//! Small problems go through a dense decomposition. Larger ones use a block
//! subspace iteration with thick restart: the search space is expanded by the
//! residuals of the wanted Ritz pairs, kept fully reorthogonalized, and
//! compressed back to the best Ritz vectors when it reaches its size limit.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigh, orthonormalize_against, random_unit_vector};
use crate::C64;

/// Relative threshold below which a ground energy counts as zero.
pub const ZERO_ENERGY_REL: f64 = 1e-9;

/// Anything that can act on vectors of the doubled space.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = H x`; both slices have length `dim()`.
    fn apply_into(&self, x: &[C64], y: &mut [C64]);

    fn to_dense(&self) -> DMatrix<C64>;

    /// An upper bound on the largest eigenvalue.
    fn upper_bound(&self) -> f64;

    fn is_real(&self) -> bool {
        false
    }

    /// Diagonal in the working basis, used as a preconditioner when present.
    fn diagonal(&self) -> Option<Vec<f64>> {
        None
    }

    fn apply_vec(&self, x: &DVector<C64>) -> DVector<C64> {
        let mut y = DVector::zeros(x.len());
        self.apply_into(x.as_slice(), y.as_mut_slice());
        y
    }
}

impl LinearOperator for DMatrix<C64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        let xv = nalgebra::DVectorView::from_slice(x, x.len());
        let mut yv = nalgebra::DVectorViewMut::from_slice(y, x.len());
        yv.gemv(C64::new(1.0, 0.0), self, &xv, C64::new(0.0, 0.0));
    }

    fn to_dense(&self) -> DMatrix<C64> {
        self.clone()
    }

    fn upper_bound(&self) -> f64 {
        gershgorin_upper(self)
    }

    fn is_real(&self) -> bool {
        linalg::is_real(self)
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        Some(self.diagonal().iter().map(|z| z.re).collect())
    }
}

/// `-H`, used to reach the top of the spectrum with the same solver.
struct Negated<'a, H: ?Sized>(&'a H);

impl<H: LinearOperator + ?Sized> LinearOperator for Negated<'_, H> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        self.0.apply_into(x, y);
        y.iter_mut().for_each(|z| *z = -*z);
    }

    fn to_dense(&self) -> DMatrix<C64> {
        -self.0.to_dense()
    }

    fn upper_bound(&self) -> f64 {
        // Only used for the achievable-residual estimate, so a norm bound is enough.
        self.0.upper_bound().abs()
    }

    fn is_real(&self) -> bool {
        self.0.is_real()
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        self.0.diagonal().map(|d| d.into_iter().map(|x| -x).collect())
    }
}

/// Gershgorin bound on the largest eigenvalue of a Hermitian matrix.
pub fn gershgorin_upper(m: &DMatrix<C64>) -> f64 {
    (0..m.nrows())
        .map(|r| {
            m.row(r)
                .iter()
                .enumerate()
                .map(|(c, z)| if c == r { z.re } else { z.norm() })
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Residual norm `‖H x − θ x‖` required of every reported pair.
    pub tol: f64,
    /// Problems of at most this dimension are solved densely.
    pub dense_threshold: usize,
    pub block_size: usize,
    pub max_restarts: usize,
    /// Largest search space before a restart; `None` picks a size from `k`.
    pub max_basis: Option<usize>,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            dense_threshold: 1024,
            block_size: 2,
            max_restarts: 50,
            max_basis: None,
            seed: 0x5eed,
        }
    }
}

impl SolverConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverPath {
    Dense,
    Iterative,
}

#[derive(Clone, Debug)]
pub struct SpectralResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<DVector<C64>>,
    /// Explicitly recomputed `‖H x − θ x‖`.
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// Operator applications for the iterative path, zero for dense.
    pub iterations: usize,
    pub path: SolverPath,
}

impl SpectralResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

fn explicit_residual<H: LinearOperator + ?Sized>(h: &H, x: &DVector<C64>, theta: f64) -> f64 {
    let hx = h.apply_vec(x);
    (hx - x * C64::new(theta, 0.0)).norm()
}

/// Residual floor reachable in double precision for an operator of this size.
fn achievable_residual<H: LinearOperator + ?Sized>(h: &H) -> f64 {
    let scale = h.upper_bound().abs().max(1.0);
    scale * f64::EPSILON * (h.dim() as f64).sqrt() * 16.0
}

/// The `k` lowest eigenpairs of `h`, ascending.
pub fn lowest_k<H: LinearOperator + ?Sized>(h: &H, k: usize, cfg: &SolverConfig) -> Result<SpectralResult> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("operator has dimension zero".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenpairs of an operator of dimension {n}"
        )));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    if n <= cfg.dense_threshold {
        dense_lowest(h, k, cfg)
    } else {
        iterative_lowest(h, k, cfg)
    }
}

fn dense_lowest<H: LinearOperator + ?Sized>(h: &H, k: usize, cfg: &SolverConfig) -> Result<SpectralResult> {
    let dense = h.to_dense();
    let (vals, vecs) = hermitian_eigh(&dense);
    let eigenvectors: Vec<_> = (0..k).map(|i| vecs.column(i).into_owned()).collect();
    let residuals: Vec<_> = eigenvectors
        .iter()
        .zip(&vals)
        .map(|(x, &t)| explicit_residual(h, x, t))
        .collect();
    let limit = cfg.tol.max(achievable_residual(h));
    let converged = residuals.iter().all(|&r| r <= limit);
    Ok(SpectralResult {
        eigenvalues: vals[..k].to_vec(),
        eigenvectors,
        residuals,
        converged,
        iterations: 0,
        path: SolverPath::Dense,
    })
}

struct Subspace {
    basis: Vec<DVector<C64>>,
    images: Vec<DVector<C64>>,
    projected: DMatrix<C64>,
}

impl Subspace {
    fn new() -> Self {
        Self {
            basis: Vec::new(),
            images: Vec::new(),
            projected: DMatrix::zeros(0, 0),
        }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    /// Append an orthonormal vector together with its image.
    fn push(&mut self, v: DVector<C64>, hv: DVector<C64>) {
        let m = self.basis.len();
        let mut p = self.projected.clone().resize(m + 1, m + 1, C64::new(0.0, 0.0));
        for (i, b) in self.basis.iter().enumerate() {
            let z = b.dotc(&hv);
            p[(i, m)] = z;
            p[(m, i)] = z.conj();
        }
        p[(m, m)] = C64::new(v.dotc(&hv).re, 0.0);
        self.projected = p;
        self.basis.push(v);
        self.images.push(hv);
    }

    fn rebuild(&mut self, basis: Vec<DVector<C64>>, images: Vec<DVector<C64>>) {
        self.basis.clear();
        self.images.clear();
        self.projected = DMatrix::zeros(0, 0);
        for (v, hv) in basis.into_iter().zip(images) {
            self.push(v, hv);
        }
    }

    fn combine(vectors: &[DVector<C64>], coeffs: nalgebra::DVectorView<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(vectors[0].len());
        for (v, &c) in vectors.iter().zip(coeffs.iter()) {
            out.axpy(c, v, C64::new(1.0, 0.0));
        }
        out
    }
}

fn iterative_lowest<H: LinearOperator + ?Sized>(h: &H, k: usize, cfg: &SolverConfig) -> Result<SpectralResult> {
    let n = h.dim();
    let block = cfg.block_size.clamp(1, n);
    let keep = (k + block).min(n);
    let max_basis = cfg
        .max_basis
        .unwrap_or_else(|| (2 * keep + 40).max(60))
        .clamp(keep + block, n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut space = Subspace::new();
    let mut applies = 0usize;
    let mut restarts = 0usize;
    let mut best_residual = f64::INFINITY;
    let floor = achievable_residual(h);
    let target = cfg.tol.max(floor);
    let diag = h.diagonal();
    let scale = h.upper_bound().abs().max(1.0);

    let add_direction = |space: &mut Subspace, mut d: DVector<C64>, rng: &mut ChaCha8Rng, applies: &mut usize| {
        let before = d.norm();
        let after = orthonormalize_against(&mut d, &space.basis);
        if !after.is_finite() || after <= 1e-8 * before {
            // The direction is (numerically) inside the space; use a random one.
            loop {
                let mut r = random_unit_vector(n, rng);
                if orthonormalize_against(&mut r, &space.basis) > 1e-3 {
                    d = r;
                    break;
                }
            }
        }
        let hd = h.apply_vec(&d);
        *applies += 1;
        space.push(d, hd);
    };

    for _ in 0..keep {
        let v = random_unit_vector(n, &mut rng);
        add_direction(&mut space, v, &mut rng, &mut applies);
    }

    loop {
        let (theta, y) = hermitian_eigh(&space.projected);
        let nritz = keep.min(space.len());
        let mut ritz = Vec::with_capacity(nritz);
        let mut ritz_images = Vec::with_capacity(nritz);
        let mut residuals = Vec::with_capacity(nritz);
        for (i, &t) in theta.iter().enumerate().take(nritz) {
            let x = Subspace::combine(&space.basis, y.column(i));
            let hx = Subspace::combine(&space.images, y.column(i));
            let r = &hx - &x * C64::new(t, 0.0);
            residuals.push(r);
            ritz.push(x);
            ritz_images.push(hx);
        }
        let norms: Vec<f64> = residuals.iter().map(|r| r.norm()).collect();
        let worst = norms[..k].iter().cloned().fold(0.0, f64::max);
        best_residual = best_residual.min(worst);

        if worst <= target {
            // Confirm against fresh applications before reporting.
            let fresh: Vec<f64> = (0..k).map(|i| explicit_residual(h, &ritz[i], theta[i])).collect();
            applies += k;
            if fresh.iter().all(|&r| r <= target) {
                log::debug!("iterative solver converged after {applies} applies, {restarts} restarts");
                return Ok(SpectralResult {
                    eigenvalues: theta[..k].to_vec(),
                    eigenvectors: ritz.into_iter().take(k).collect(),
                    residuals: fresh,
                    converged: true,
                    iterations: applies,
                    path: SolverPath::Iterative,
                });
            }
            // Accumulated drift in the stored images: restart from clean ones.
            restarts += 1;
            if restarts > cfg.max_restarts {
                return Err(Error::NotConverged {
                    iterations: applies,
                    best_residual,
                });
            }
            let mut basis = Vec::new();
            for x in ritz {
                let mut x = x;
                if orthonormalize_against(&mut x, &basis) > 1e-8 {
                    basis.push(x);
                }
            }
            let images: Vec<_> = basis.iter().map(|b| h.apply_vec(b)).collect();
            applies += images.len();
            space.rebuild(basis, images);
            continue;
        }

        if space.len() + block > max_basis {
            restarts += 1;
            if restarts > cfg.max_restarts {
                return Err(Error::NotConverged {
                    iterations: applies,
                    best_residual,
                });
            }
            // Ritz vectors are orthonormal combinations of an orthonormal
            // basis, so the compressed space needs no further cleanup.
            space.rebuild(ritz, ritz_images);
            continue;
        }

        let mut chosen: Vec<usize> = (0..nritz).filter(|&i| i < k && norms[i] > target).collect();
        chosen.extend((k..nritz).filter(|&i| norms[i] > target));
        chosen.truncate(block);
        for i in chosen {
            let d = match &diag {
                Some(dg) => precondition(&residuals[i], dg, theta[i], scale),
                None => residuals[i].clone(),
            };
            add_direction(&mut space, d, &mut rng, &mut applies);
        }
    }
}

/// Diagonal (Davidson) correction `(D − θ)⁻¹ r`, with small denominators
/// clamped so that near-converged components are not blown up.
fn precondition(r: &DVector<C64>, diag: &[f64], theta: f64, scale: f64) -> DVector<C64> {
    let floor = 1e-3 * scale;
    DVector::from_iterator(
        r.len(),
        r.iter().zip(diag).map(|(&z, &d)| {
            let mut den = d - theta;
            if den.abs() < floor {
                den = floor.copysign(den);
            }
            z / den
        }),
    )
}

/// Largest eigenvalue, via the lowest eigenvalue of `-H`.
pub fn largest<H: LinearOperator + ?Sized>(h: &H, cfg: &SolverConfig) -> Result<f64> {
    let spec = lowest_k(&Negated(h), 1, cfg)?;
    Ok(-spec.eigenvalues[0])
}

/// Orthonormal basis of the eigenspace at the ground energy: all eigenvectors
/// within `gap_tol` of the lowest eigenvalue. Extends the computation with a
/// doubled `k` while every computed eigenvalue still lies inside the window.
pub fn degenerate_ground_manifold<H: LinearOperator + ?Sized>(
    h: &H,
    spec: &SpectralResult,
    gap_tol: f64,
    cfg: &SolverConfig,
) -> Result<Vec<DVector<C64>>> {
    if spec.is_empty() {
        return Err(Error::InvalidArgument("empty spectral result".into()));
    }
    let n = h.dim();
    let mut current = spec.clone();
    loop {
        let e0 = current.eigenvalues[0];
        let inside = current
            .eigenvalues
            .iter()
            .take_while(|&&e| e - e0 <= gap_tol)
            .count();
        if inside < current.len() || current.len() == n {
            return Ok(current.eigenvectors.into_iter().take(inside).collect());
        }
        // A dense decomposition yields every pair at once, so ask for all of them.
        let next = if n <= cfg.dense_threshold {
            n
        } else {
            (current.len() * 2).max(2).min(n)
        };
        current = lowest_k(h, next, cfg)?;
    }
}

/// `ε_gs ≤ 1e-9 · max(1, ε_max)`.
pub fn is_zero_energy(ground: f64, largest: f64) -> bool {
    ground <= ZERO_ENERGY_REL * largest.max(1.0)
}
