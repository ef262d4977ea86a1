//! Hamiltonians on the doubled space `H_M ⊗ H_M`, stored as sums of
//! Kronecker products.
//!
//! A vector on the doubled space is indexed `i * M + j`, with `i` the index on
//! the left factor. Application of `c (L ⊗ R)` never forms the `M² × M²`
//! matrix: the vector is viewed as an `M × M` matrix `X` and mapped to
//! `c L X Rᵀ`, using the sparsity of the factors when they have any.

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut, DVector};

use crate::eigen::LinearOperator;
use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{HermitianOperator, ObservableSet};
use crate::C64;

/// Assemble an explicit sparse matrix when the doubled dimension is at most
/// this and the estimated number of stored entries stays small.
pub const ASSEMBLY_DIM_LIMIT: usize = 4096;
const ASSEMBLY_NNZ_LIMIT: usize = 4_000_000;

/// One factor of a Kronecker summand.
#[derive(Clone, Debug)]
pub struct KronFactor {
    dim: usize,
    identity: bool,
    dense: DMatrix<C64>,
    nonzeros: Vec<(usize, usize, C64)>,
    use_sparse: bool,
}

impl KronFactor {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            identity: true,
            dense: DMatrix::identity(dim, dim),
            nonzeros: (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect(),
            use_sparse: true,
        }
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: cols,
            });
        }
        let identity = m == DMatrix::identity(rows, cols);
        let nonzeros: Vec<_> = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                let z = m[(r, c)];
                (z != C64::new(0.0, 0.0)).then_some((r, c, z))
            })
            .collect();
        let use_sparse = nonzeros.len() * 4 <= rows * cols;
        Ok(Self {
            dim: rows,
            identity,
            dense: m,
            nonzeros,
            use_sparse,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.dense
    }

    pub fn nnz(&self) -> usize {
        self.nonzeros.len()
    }

    fn row_sum_norm(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.dense.row(r).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `coeff · (left ⊗ right)`.
#[derive(Clone, Debug)]
pub struct KronTerm {
    pub coeff: f64,
    pub left: KronFactor,
    pub right: KronFactor,
}

impl KronTerm {
    pub fn new(coeff: f64, left: KronFactor, right: KronFactor) -> Self {
        Self { coeff, left, right }
    }

    /// `out += coeff · (left ⊗ right) x` with `x`, `out` of length `M²`.
    ///
    /// In column-major storage the slice `x` is the matrix `Xᵀ`, so the update
    /// is `Yᵀ += coeff · R Xᵀ Lᵀ`.
    fn apply_add(&self, x: &[C64], out: &mut [C64], scratch: &mut Vec<C64>) {
        let m = self.left.dim;
        let c = C64::new(self.coeff, 0.0);

        // t = R · Xᵀ (column-major, M × M)
        let t: &[C64] = if self.right.identity {
            x
        } else {
            scratch.clear();
            scratch.resize(m * m, C64::new(0.0, 0.0));
            if self.right.use_sparse {
                for col in 0..m {
                    let src = &x[col * m..(col + 1) * m];
                    let dst = &mut scratch[col * m..(col + 1) * m];
                    for &(r, k, v) in &self.right.nonzeros {
                        dst[r] += v * src[k];
                    }
                }
            } else {
                let xv = DMatrixView::from_slice(x, m, m);
                let mut tv = DMatrixViewMut::from_slice(scratch.as_mut_slice(), m, m);
                tv.gemm(C64::new(1.0, 0.0), &self.right.dense, &xv, C64::new(0.0, 0.0));
            }
            scratch.as_slice()
        };

        // out += c · t · Lᵀ : column i of the result gathers L[i, k] · column k of t.
        if self.left.identity {
            for (o, v) in out.iter_mut().zip(t) {
                *o += c * v;
            }
        } else if self.left.use_sparse {
            for &(i, k, v) in &self.left.nonzeros {
                let w = c * v;
                let src = &t[k * m..(k + 1) * m];
                let dst = &mut out[i * m..(i + 1) * m];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        } else {
            let tv = DMatrixView::from_slice(t, m, m);
            let mut ov = DMatrixViewMut::from_slice(out, m, m);
            ov.gemm(c, &tv, &self.left.dense.transpose(), C64::new(1.0, 0.0));
        }
    }
}

/// Which construction produced a Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HamiltonianKind {
    /// `(A²⊗I + I⊗A²)/2 − A⊗A` for a single observable.
    LocalTerm,
    /// Sum of local terms over the whole set.
    Total,
    /// Total with the cross term of operator `n` removed.
    TotalModified(usize),
    /// As `TotalModified` with operator `n` shifted by `alpha`.
    TotalModifiedShifted(usize, f64),
    /// Any other user-assembled swap-symmetric combination.
    Custom,
}

/// Compressed sparse row matrix on the doubled space.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    dim: usize,
    row_offsets: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_offsets = vec![0; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().expect("merged entry exists") += v;
            } else {
                cols.push(c);
                values.push(v);
                row_offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_offsets[r + 1] += row_offsets[r];
        }
        Self {
            dim,
            row_offsets,
            cols,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let span = self.row_offsets[r]..self.row_offsets[r + 1];
            *out = self.cols[span.clone()]
                .iter()
                .zip(&self.values[span])
                .map(|(&c, &v)| v * x[c])
                .sum();
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for idx in self.row_offsets[r]..self.row_offsets[r + 1] {
                m[(r, self.cols[idx])] += self.values[idx];
            }
        }
        m
    }

    /// Gershgorin upper bound on the largest eigenvalue.
    pub fn gershgorin_upper(&self) -> f64 {
        (0..self.dim)
            .map(|r| {
                (self.row_offsets[r]..self.row_offsets[r + 1])
                    .map(|idx| {
                        if self.cols[idx] == r {
                            self.values[idx].re
                        } else {
                            self.values[idx].norm()
                        }
                    })
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Hermitian, swap-symmetric operator on `H_M ⊗ H_M` kept as Kronecker
/// summands, with an explicit sparse copy for small sizes.
#[derive(Clone, Debug)]
pub struct ExtendedHamiltonian {
    base_dim: usize,
    terms: Vec<KronTerm>,
    kind: HamiltonianKind,
    realized: Option<SparseMatrix>,
}

impl ExtendedHamiltonian {
    pub fn from_terms(base_dim: usize, terms: Vec<KronTerm>, kind: HamiltonianKind) -> Result<Self> {
        if base_dim == 0 {
            return Err(Error::InvalidArgument("base dimension must be positive".into()));
        }
        for term in &terms {
            for f in [&term.left, &term.right] {
                if f.dim != base_dim {
                    return Err(Error::DimensionMismatch {
                        expected: base_dim,
                        found: f.dim,
                    });
                }
            }
        }
        let mut h = Self {
            base_dim,
            terms,
            kind,
            realized: None,
        };
        let estimated: usize = h.terms.iter().map(|t| t.left.nnz() * t.right.nnz()).sum();
        if h.dim() <= ASSEMBLY_DIM_LIMIT && estimated <= ASSEMBLY_NNZ_LIMIT {
            h.realized = Some(h.assemble_sparse());
        }
        Ok(h)
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    pub fn kind(&self) -> HamiltonianKind {
        self.kind
    }

    /// The explicit sparse copy, present for small problems.
    pub fn realized(&self) -> Option<&SparseMatrix> {
        self.realized.as_ref()
    }

    /// Builds the explicit sparse matrix from the Kronecker summands.
    pub fn assemble_sparse(&self) -> SparseMatrix {
        let m = self.base_dim;
        let mut triplets = Vec::new();
        for term in &self.terms {
            for &(i, k, a) in &term.left.nonzeros {
                for &(j, l, b) in &term.right.nonzeros {
                    triplets.push((i * m + j, k * m + l, a * b * term.coeff));
                }
            }
        }
        SparseMatrix::from_triplets(m * m, triplets)
    }

    /// `H v`, through the sparse copy when present.
    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_len(v.len())?;
        let mut out = DVector::zeros(v.len());
        self.apply_into(v.as_slice(), out.as_mut_slice());
        Ok(out)
    }

    /// `H v` through the Kronecker summands only.
    pub fn apply_kronecker(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_len(v.len())?;
        let mut out = DVector::zeros(v.len());
        self.kronecker_apply(v.as_slice(), out.as_mut_slice());
        Ok(out)
    }

    fn kronecker_apply(&self, x: &[C64], y: &mut [C64]) {
        y.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        let mut scratch = Vec::new();
        for term in &self.terms {
            term.apply_add(x, y, &mut scratch);
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }

    /// `<v|H|v>` for a vector on the doubled space.
    pub fn expectation(&self, v: &DVector<C64>) -> Result<f64> {
        let hv = self.apply(v)?;
        Ok(v.dotc(&hv).re)
    }

    /// Frobenius norm of `S H S − H` with `S` the swap of the two factors.
    pub fn swap_asymmetry(&self) -> f64 {
        let h = self.to_dense();
        let m = self.base_dim;
        let swap = |r: usize| (r % m) * m + r / m;
        let mut acc = 0.0;
        for r in 0..h.nrows() {
            for c in 0..h.ncols() {
                acc += (h[(swap(r), swap(c))] - h[(r, c)]).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Conjugation by `U ⊗ U`, as a new Hamiltonian of kind `Custom`.
    pub fn conjugated(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let conj = |f: &KronFactor| -> Result<KronFactor> {
                    if f.identity {
                        Ok(f.clone())
                    } else {
                        KronFactor::from_matrix(unitary * &f.dense * unitary.adjoint())
                    }
                };
                Ok(KronTerm::new(t.coeff, conj(&t.left)?, conj(&t.right)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(self.base_dim, terms, HamiltonianKind::Custom)
    }
}

impl LinearOperator for ExtendedHamiltonian {
    fn dim(&self) -> usize {
        self.base_dim * self.base_dim
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        match &self.realized {
            Some(sparse) => sparse.matvec(x, y),
            None => self.kronecker_apply(x, y),
        }
    }

    fn to_dense(&self) -> DMatrix<C64> {
        if let Some(sparse) = &self.realized {
            return sparse.to_dense();
        }
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for t in &self.terms {
            out += linalg::kron(&t.left.dense, &t.right.dense) * C64::new(t.coeff, 0.0);
        }
        out
    }

    fn upper_bound(&self) -> f64 {
        match &self.realized {
            Some(sparse) => sparse.gershgorin_upper(),
            None => self
                .terms
                .iter()
                .map(|t| t.coeff.abs() * t.left.row_sum_norm() * t.right.row_sum_norm())
                .sum(),
        }
    }

    fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|t| [&t.left, &t.right].iter().all(|f| f.nonzeros.iter().all(|e| e.2.im == 0.0)))
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        let m = self.base_dim;
        let mut d = vec![0.0; m * m];
        for t in &self.terms {
            for i in 0..m {
                let a = t.left.dense[(i, i)].re * t.coeff;
                if a == 0.0 {
                    continue;
                }
                for j in 0..m {
                    d[i * m + j] += a * t.right.dense[(j, j)].re;
                }
            }
        }
        Some(d)
    }
}

fn factor(m: DMatrix<C64>) -> KronFactor {
    KronFactor::from_matrix(m).expect("operators are square")
}

/// `(A²⊗I + I⊗A²)/2 − A⊗A`, positive semidefinite with spectrum
/// `{(a_i − a_j)²/2}`.
pub fn build_local_term(a: &HermitianOperator) -> ExtendedHamiltonian {
    let m = a.dim();
    let sq = a.squared();
    let terms = vec![
        KronTerm::new(0.5, factor(sq.clone()), KronFactor::identity(m)),
        KronTerm::new(0.5, KronFactor::identity(m), factor(sq)),
        KronTerm::new(-1.0, factor(a.entries().clone()), factor(a.entries().clone())),
    ];
    ExtendedHamiltonian::from_terms(m, terms, HamiltonianKind::LocalTerm)
        .expect("factors share the operator dimension")
}

/// Square terms `Σ A_m²` merged into one factor, plus `−A_m⊗A_m` for every
/// `m` in `cross`.
fn assemble_total(
    ops: &[HermitianOperator],
    cross: impl Iterator<Item = usize>,
    kind: HamiltonianKind,
) -> ExtendedHamiltonian {
    let m = ops[0].dim();
    let squares = ops
        .iter()
        .fold(DMatrix::<C64>::zeros(m, m), |acc, op| acc + op.squared());
    let mut terms = vec![
        KronTerm::new(0.5, factor(squares.clone()), KronFactor::identity(m)),
        KronTerm::new(0.5, KronFactor::identity(m), factor(squares)),
    ];
    for idx in cross {
        let a = ops[idx].entries();
        terms.push(KronTerm::new(-1.0, factor(a.clone()), factor(a.clone())));
    }
    ExtendedHamiltonian::from_terms(m, terms, kind).expect("set members share a dimension")
}

/// `H_Tot = Σ_n H_n`, whose expectation on `|ψ>|ψ>` is the variance sum.
pub fn build_h_tot(set: &ObservableSet) -> ExtendedHamiltonian {
    assemble_total(set.ops(), 0..set.len(), HamiltonianKind::Total)
}

/// `Σ_{m≠n} H_m + ((A_n − α)²⊗I + I⊗(A_n − α)²)/2`.
///
/// `alpha` outside `[a_{n,1}, a_{n,M}]` is accepted with a warning: the
/// ground energy is then no longer tied to any set of states.
pub fn build_h_tot_modified(set: &ObservableSet, n: usize, alpha: f64) -> Result<ExtendedHamiltonian> {
    let target = set.get(n)?;
    let (lo, hi) = (target.min_eigenvalue(), target.max_eigenvalue());
    let slack = 1e-12 * (1.0 + target.spectral_range());
    if alpha < lo - slack || alpha > hi + slack {
        log::warn!("alpha = {alpha} lies outside the spectrum [{lo}, {hi}] of operator {n}");
    }
    let mut ops = set.ops().to_vec();
    ops[n] = target.shift(alpha);
    let kind = if alpha == 0.0 {
        HamiltonianKind::TotalModified(n)
    } else {
        HamiltonianKind::TotalModifiedShifted(n, alpha)
    };
    Ok(assemble_total(&ops, (0..set.len()).filter(|&m| m != n), kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{lowest_k, SolverConfig};
    use crate::linalg::{kron, random_hermitian, random_unit_vector};
    use crate::operator::{make_spin_operators, su3_example_set, PureState};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dense_eigs(h: &ExtendedHamiltonian) -> Vec<f64> {
        linalg::hermitian_eigh(&h.to_dense()).0
    }

    fn assert_multiset(found: &[f64], expected: &[f64]) {
        let mut e = expected.to_vec();
        e.sort_by(f64::total_cmp);
        assert_eq!(found.len(), e.len());
        for (a, b) in found.iter().zip(&e) {
            assert!((a - b).abs() < 1e-12, "{found:?} vs {e:?}");
        }
    }

    #[test]
    fn local_term_spectrum_qubit() {
        let a = HermitianOperator::diagonal("z", &[0.5, -0.5]).unwrap();
        assert_multiset(&dense_eigs(&build_local_term(&a)), &[0.0, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn local_term_spectrum_spin_one() {
        let a = HermitianOperator::diagonal("z", &[1.0, 0.0, -1.0]).unwrap();
        let expected = [0.0, 0.0, 0.0, 0.5, 0.5, 0.5, 0.5, 2.0, 2.0];
        assert_multiset(&dense_eigs(&build_local_term(&a)), &expected);
    }

    #[test]
    fn local_term_matches_pairwise_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = HermitianOperator::new("r", random_hermitian(4, &mut rng)).unwrap();
        let s = a.spectrum();
        let expected: Vec<f64> = s
            .iter()
            .flat_map(|x| s.iter().map(move |y| (x - y).powi(2) / 2.0))
            .collect();
        let found = dense_eigs(&build_local_term(&a));
        assert!(found[0] >= -1e-10);
        let mut e = expected;
        e.sort_by(f64::total_cmp);
        for (x, y) in found.iter().zip(&e) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_apply_is_identity() {
        let terms = vec![KronTerm::new(1.0, KronFactor::identity(3), KronFactor::identity(3))];
        let h = ExtendedHamiltonian::from_terms(3, terms, HamiltonianKind::Custom).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_unit_vector(9, &mut rng);
        assert!((h.apply_kronecker(&v).unwrap() - &v).norm() < 1e-15);
        assert!((h.apply(&v).unwrap() - &v).norm() < 1e-15);
    }

    #[test]
    fn kronecker_apply_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(4, &mut rng);
        let b = random_hermitian(4, &mut rng);
        let oracle = kron(&a, &b);
        let terms = vec![KronTerm::new(1.0, factor(a), factor(b))];
        let h = ExtendedHamiltonian::from_terms(4, terms, HamiltonianKind::Custom).unwrap();
        for _ in 0..20 {
            let v = random_unit_vector(16, &mut rng);
            let expected = &oracle * &v;
            assert!((h.apply_kronecker(&v).unwrap() - &expected).norm() < 1e-12);
            assert!((h.apply(&v).unwrap() - &expected).norm() < 1e-12);
        }
    }

    #[test]
    fn sparse_and_dense_factor_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for m in [2usize, 5, 8] {
            let set = make_spin_operators((m as f64 - 1.0) / 2.0).unwrap();
            let mut ops: Vec<_> = set.ops().to_vec();
            ops.push(HermitianOperator::new("r", random_hermitian(m, &mut rng)).unwrap());
            let set = ObservableSet::new(ops).unwrap();
            let h = build_h_tot(&set);
            let dense = h.to_dense();
            for _ in 0..5 {
                let v = random_unit_vector(m * m, &mut rng);
                let expected = &dense * &v;
                assert!((h.apply_kronecker(&v).unwrap() - &expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn apply_dimension_mismatch() {
        let h = build_h_tot(&su3_example_set());
        assert!(matches!(
            h.apply(&DVector::zeros(4)),
            Err(Error::DimensionMismatch { expected: 9, found: 4 })
        ));
    }

    #[test]
    fn large_spin_pair_uses_matrix_free_path() {
        let spin = crate::operator::SpinMatrices::new(50.0).unwrap();
        let h = build_h_tot_modified(&spin.xz_set().unwrap(), 0, 0.0).unwrap();
        assert_eq!(h.dim(), 101 * 101);
        assert!(h.realized().is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_unit_vector(h.dim(), &mut rng);
        let hv = h.apply(&v).unwrap();
        assert!(v.dotc(&hv).im.abs() < 1e-9);
    }

    #[test]
    fn modified_minus_shifted_total_is_cross_term() {
        let set = su3_example_set();
        for (n, alpha) in [(0usize, 0.963), (2, -0.4), (3, 0.0)] {
            let modified = build_h_tot_modified(&set, n, alpha).unwrap().to_dense();
            let shifted = build_h_tot(&set.with_shift(n, alpha).unwrap()).to_dense();
            let a = set.get(n).unwrap().shift(alpha);
            let cross = kron(a.entries(), a.entries());
            assert!((modified - shifted - cross).norm() < 1e-12);
        }
    }

    #[test]
    fn total_is_shift_invariant() {
        let set = su3_example_set();
        let base = build_h_tot(&set).to_dense();
        let mut shifted = set.clone();
        for (n, alpha) in [0.3, -1.1, 0.7, 2.0].into_iter().enumerate() {
            shifted = shifted.with_shift(n, alpha).unwrap();
        }
        assert!((build_h_tot(&shifted).to_dense() - base).norm() < 1e-12);
    }

    #[test]
    fn built_hamiltonians_are_swap_symmetric() {
        let set = su3_example_set();
        assert!(build_h_tot(&set).swap_asymmetry() < 1e-12);
        assert!(build_h_tot_modified(&set, 1, 0.4).unwrap().swap_asymmetry() < 1e-12);
        assert!(build_local_term(set.get(0).unwrap()).swap_asymmetry() < 1e-12);
    }

    #[test]
    fn bad_index_is_rejected() {
        let set = su3_example_set();
        assert!(matches!(
            build_h_tot_modified(&set, 4, 0.0),
            Err(Error::IndexOutOfRange { index: 4, len: 4 })
        ));
    }

    #[test]
    fn kernel_has_product_eigenstates() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = HermitianOperator::new("r", random_hermitian(4, &mut rng)).unwrap();
        let h = build_local_term(&a);
        for i in 0..4 {
            let v = a.eigenbasis().column(i).into_owned();
            let doubled = linalg::kron_vec(&v, &v);
            assert!(h.apply(&doubled).unwrap().norm() < 1e-10);
        }
        let eigs = dense_eigs(&h);
        let range = eigs[eigs.len() - 1] - eigs[0];
        assert_eq!(eigs.iter().filter(|&&e| e < 1e-10 * range).count(), 4);
    }

    #[test]
    fn spin_one_total_ground_energy() {
        let h = build_h_tot(&make_spin_operators(1.0).unwrap());
        let spec = lowest_k(&h, 1, &SolverConfig::default()).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn xz_pair_total_ground_is_zero() {
        for two_j in 1..=10 {
            let spin = crate::operator::SpinMatrices::new(two_j as f64 / 2.0).unwrap();
            let h = build_h_tot(&spin.xz_set().unwrap());
            let spec = lowest_k(&h, 1, &SolverConfig::default()).unwrap();
            assert!(spec.eigenvalues[0].abs() < 1e-9);
        }
    }

    #[test]
    fn single_operator_kernel_contains_products() {
        let set = ObservableSet::new(vec![HermitianOperator::diagonal("z", &[0.5, -0.5]).unwrap()]).unwrap();
        let h = build_h_tot(&set);
        let spec = lowest_k(&h, 1, &SolverConfig::default()).unwrap();
        assert!(spec.eigenvalues[0].abs() < 1e-12);
        let up = PureState::basis(2, 0).unwrap().doubled();
        assert!(h.apply(&up).unwrap().norm() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(25))]

        #[test]
        fn expectation_on_product_is_variance_sum(seed in any::<u64>(), dim in 2usize..6, n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ops = (0..n)
                .map(|i| HermitianOperator::new(format!("a{i}"), random_hermitian(dim, &mut rng)).unwrap())
                .collect();
            let set = ObservableSet::new(ops).unwrap();
            let h = build_h_tot(&set);
            for _ in 0..4 {
                let psi = PureState::random(dim, &mut rng);
                let lhs = h.expectation(&psi.doubled()).unwrap();
                let rhs = set.v_tot(&psi).unwrap();
                prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs));
            }
        }
    }
}
