//! Hermitian observables, observable sets and pure states.
//!
//! Every [`HermitianOperator`] is validated and diagonalized once at
//! construction; afterwards it is immutable and can be shared freely between
//! threads.

mod families;

pub use families::{
    make_boson_operators, make_spin_operators, su3_example_set, BosonOperators, SpinMatrices,
};

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::C64;

/// Relative tolerance on `|A_ij - conj(A_ji)|` used when validating input.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Adjacent eigenvalues closer than this fraction of the spectral range are
/// treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Intersection threshold for the common-eigenvector test.
const COMMON_EIGENSTATE_TOL: f64 = 1e-8;

/// A validated Hermitian matrix together with its sorted spectrum and
/// eigenbasis.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    label: String,
    entries: DMatrix<C64>,
    spectrum: Vec<f64>,
    eigenbasis: DMatrix<C64>,
    degenerate: bool,
}

impl HermitianOperator {
    pub fn new(label: impl Into<String>, entries: DMatrix<C64>) -> Result<Self> {
        let label = label.into();
        let (rows, cols) = entries.shape();
        if rows == 0 {
            return Err(Error::InvalidArgument(format!("operator `{label}` is empty")));
        }
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: cols,
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "operator `{label}` has non-finite entries"
            )));
        }

        let scale = linalg::max_abs(&entries);
        let (mut worst, mut at) = (0.0_f64, (0, 0));
        for r in 0..rows {
            for c in r..cols {
                let dev = (entries[(r, c)] - entries[(c, r)].conj()).norm();
                if dev > worst {
                    worst = dev;
                    at = (r, c);
                }
            }
        }
        if worst > HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian {
                label,
                row: at.0,
                col: at.1,
                deviation: worst,
            });
        }

        let entries = (&entries + entries.adjoint()) * C64::new(0.5, 0.0);
        let (spectrum, eigenbasis) = linalg::hermitian_eigh(&entries);
        let degenerate = has_degeneracy(&spectrum);
        if degenerate {
            log::warn!("operator `{label}` has a degenerate spectrum; bounds remain valid but ground-state structure guarantees weaken");
        }
        Ok(Self {
            label,
            entries,
            spectrum,
            eigenbasis,
            degenerate,
        })
    }

    pub fn from_real(label: impl Into<String>, entries: DMatrix<f64>) -> Result<Self> {
        Self::new(label, entries.map(|x| C64::new(x, 0.0)))
    }

    pub fn diagonal(label: impl Into<String>, diag: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(label, DMatrix::from_diagonal(&d))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Orthonormal eigenvectors as columns, ordered like [`Self::spectrum`].
    pub fn eigenbasis(&self) -> &DMatrix<C64> {
        &self.eigenbasis
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.spectrum[self.spectrum.len() - 1]
    }

    pub fn spectral_range(&self) -> f64 {
        self.max_eigenvalue() - self.min_eigenvalue()
    }

    pub fn squared(&self) -> DMatrix<C64> {
        &self.entries * &self.entries
    }

    /// `A - alpha * I`. The eigenbasis is reused rather than recomputed.
    pub fn shift(&self, alpha: f64) -> Self {
        if alpha == 0.0 {
            return self.clone();
        }
        let mut entries = self.entries.clone();
        for i in 0..entries.nrows() {
            entries[(i, i)] -= C64::new(alpha, 0.0);
        }
        Self {
            label: self.label.clone(),
            entries,
            spectrum: self.spectrum.iter().map(|a| a - alpha).collect(),
            eigenbasis: self.eigenbasis.clone(),
            degenerate: self.degenerate,
        }
    }

    /// `U A U†` for a unitary `U`.
    pub fn conjugated(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        check_dim(self.dim(), unitary.nrows())?;
        Self::new(self.label.clone(), unitary * &self.entries * unitary.adjoint())
    }

    /// `V diag(a) V†` from the cached spectral data.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let d = DVector::from_iterator(
            self.dim(),
            self.spectrum.iter().map(|&a| C64::new(a, 0.0)),
        );
        &self.eigenbasis * DMatrix::from_diagonal(&d) * self.eigenbasis.adjoint()
    }

    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        check_dim(self.dim(), psi.dim())?;
        let a_psi = &self.entries * psi.amplitudes();
        Ok(psi.amplitudes().dotc(&a_psi).re)
    }

    /// `<A²> - <A>²`, clamped at zero.
    pub fn variance(&self, psi: &PureState) -> Result<f64> {
        check_dim(self.dim(), psi.dim())?;
        let a_psi = &self.entries * psi.amplitudes();
        let mean = psi.amplitudes().dotc(&a_psi).re;
        let second = a_psi.norm_squared();
        Ok((second - mean * mean).max(0.0))
    }
}

fn has_degeneracy(spectrum: &[f64]) -> bool {
    if spectrum.len() < 2 {
        return false;
    }
    let range = spectrum[spectrum.len() - 1] - spectrum[0];
    spectrum
        .windows(2)
        .any(|w| w[1] - w[0] <= DEGENERACY_TOL * range)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Variance of `a` on `psi`.
pub fn variance(a: &HermitianOperator, psi: &PureState) -> Result<f64> {
    a.variance(psi)
}

/// Sum of variances of every operator in `set` on `psi`.
pub fn v_tot(set: &ObservableSet, psi: &PureState) -> Result<f64> {
    set.v_tot(psi)
}

/// An ordered, non-empty list of Hermitian operators on a common space.
#[derive(Clone, Debug)]
pub struct ObservableSet {
    ops: Vec<HermitianOperator>,
    common_eigenstate: bool,
}

impl ObservableSet {
    pub fn new(ops: Vec<HermitianOperator>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("observable set is empty".into()))?;
        let dim = first.dim();
        for op in &ops {
            check_dim(dim, op.dim())?;
        }
        let common_eigenstate = find_common_eigenvector(&ops).is_some();
        if common_eigenstate {
            log::warn!("observables share an eigenstate; the minimal variance sum is zero");
        }
        Ok(Self {
            ops,
            common_eigenstate,
        })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn ops(&self) -> &[HermitianOperator] {
        &self.ops
    }

    pub fn iter(&self) -> impl Iterator<Item = &HermitianOperator> {
        self.ops.iter()
    }

    pub fn get(&self, index: usize) -> Result<&HermitianOperator> {
        self.ops.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.ops.len(),
        })
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.ops.iter().position(|op| op.label() == label)
    }

    pub fn has_common_eigenstate(&self) -> bool {
        self.common_eigenstate
    }

    /// A unit vector that is an eigenvector of every operator, if one exists.
    pub fn common_eigenvector(&self) -> Option<DVector<C64>> {
        find_common_eigenvector(&self.ops)
    }

    pub fn any_degenerate(&self) -> bool {
        self.ops.iter().any(HermitianOperator::is_degenerate)
    }

    pub fn v_tot(&self, psi: &PureState) -> Result<f64> {
        self.ops.iter().map(|op| op.variance(psi)).sum()
    }

    /// Copy of the set with operator `index` replaced by `A_index - alpha I`.
    pub fn with_shift(&self, index: usize, alpha: f64) -> Result<Self> {
        self.get(index)?;
        let mut ops = self.ops.clone();
        ops[index] = ops[index].shift(alpha);
        Ok(Self {
            ops,
            common_eigenstate: self.common_eigenstate,
        })
    }

    /// Sub-set selected by index, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let ops = indices
            .iter()
            .map(|&i| self.get(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }

    /// Every operator conjugated by the same unitary.
    pub fn conjugated(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        let ops = self
            .ops
            .iter()
            .map(|op| op.conjugated(unitary))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}

/// Orthonormal bases of the eigenspaces of `op`, clustering eigenvalues that
/// are degenerate to [`DEGENERACY_TOL`].
fn eigenspaces(op: &HermitianOperator) -> Vec<DMatrix<C64>> {
    let spec = op.spectrum();
    let range = op.spectral_range();
    let mut spaces = Vec::new();
    let mut start = 0;
    for i in 1..=spec.len() {
        if i == spec.len() || spec[i] - spec[i - 1] > DEGENERACY_TOL * range {
            spaces.push(op.eigenbasis().columns(start, i - start).into_owned());
            start = i;
        }
    }
    spaces
}

/// Intersection of the column spans of two orthonormal bases.
fn intersect(q: &DMatrix<C64>, e: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    let overlap = e.adjoint() * q;
    let svd = overlap.svd(false, true);
    let v_t = svd.v_t?;
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] >= 1.0 - COMMON_EIGENSTATE_TOL)
        .collect();
    if keep.is_empty() {
        return None;
    }
    let coeffs = DMatrix::from_fn(q.ncols(), keep.len(), |r, c| v_t[(keep[c], r)].conj());
    Some(q * coeffs)
}

fn find_common_eigenvector(ops: &[HermitianOperator]) -> Option<DVector<C64>> {
    let mut spaces = eigenspaces(&ops[0]);
    for op in &ops[1..] {
        let targets = eigenspaces(op);
        let mut next = Vec::new();
        for q in &spaces {
            for e in &targets {
                if let Some(common) = intersect(q, e) {
                    next.push(common);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        spaces = next;
    }
    spaces.first().map(|q| q.column(0).into_owned())
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Wraps `amplitudes`, which must already have unit norm to 1e-12.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes / C64::new(norm, 0.0),
        })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        Self {
            amplitudes: linalg::random_unit_vector(dim, rng),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|self> ⊗ |self>` on the doubled space.
    pub fn doubled(&self) -> DVector<C64> {
        linalg::kron_vec(&self.amplitudes, &self.amplitudes)
    }

    pub fn evolve(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        check_dim(unitary.ncols(), self.dim())?;
        Self::normalized(unitary * &self.amplitudes)
    }
}
