//! Small dense helpers shared by the operator, eigensolver and Schmidt code.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::C64;

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
///
/// Purely real input takes the real symmetric path, which is roughly twice as
/// fast and keeps eigenvectors real.
pub fn hermitian_eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    if is_real(m) {
        let re = m.map(|z| z.re);
        let (vals, vecs) = symmetric_eigh(&re);
        return (vals, vecs.map(|x| C64::new(x, 0.0)));
    }
    // Symmetrize so tiny non-Hermitian noise cannot leak into the solver.
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    sort_pairs(eig.eigenvalues.as_slice(), &eig.eigenvectors)
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigh(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let h = (m + m.transpose()) * 0.5;
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

fn sort_pairs(vals: &[f64], vecs: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let sorted = order.iter().map(|&i| vals[i]).collect();
    let v = DMatrix::from_fn(vecs.nrows(), order.len(), |r, c| vecs[(r, order[c])]);
    (sorted, v)
}

/// True when every imaginary part is negligible against the largest entry.
pub fn is_real(m: &DMatrix<C64>) -> bool {
    let scale = max_abs(m);
    m.iter().all(|z| z.im.abs() <= 1e-15 * scale)
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Dense Kronecker product `a ⊗ b`, row index `i * b.nrows() + k`.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

pub fn kron_vec(a: &DVector<C64>, b: &DVector<C64>) -> DVector<C64> {
    let n = b.len();
    DVector::from_fn(a.len() * n, |r, _| a[r / n] * b[r % n])
}

pub fn identity(n: usize) -> DMatrix<C64> {
    DMatrix::identity(n, n)
}

/// Matrix exponential of `scale * m`.
pub fn expm(m: &DMatrix<C64>, scale: C64) -> DMatrix<C64> {
    (m * scale).exp()
}

/// `exp(scale * m) v` by a Taylor series on sub-steps of norm at most one.
pub fn expm_apply(m: &DMatrix<C64>, scale: C64, v: &DVector<C64>) -> DVector<C64> {
    let row_sum = (0..m.nrows())
        .map(|r| m.row(r).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let norm = row_sum * scale.norm();
    let steps = norm.ceil().max(1.0) as usize;
    let g = m * (scale / steps as f64);
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..=30 {
            term = &g * term / C64::new(k as f64, 0.0);
            acc += &term;
            if term.norm() <= 1e-17 * acc.norm() {
                break;
            }
        }
        out = acc;
    }
    out
}

/// Standard complex Gaussian vector normalized to unit length.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // Fix the phase freedom of the QR factors.
    let mut out = q;
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            out[(row, c)] *= phase;
        }
    }
    out
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// Orthonormalize `v` against the columns in `basis` (two passes) and
/// normalize it. Returns the norm left after projection.
pub fn orthonormalize_against(v: &mut DVector<C64>, basis: &[DVector<C64>]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let overlap = b.dotc(v);
            v.axpy(-overlap, b, C64::new(1.0, 0.0));
        }
    }
    let norm = v.norm();
    if norm > 0.0 {
        *v /= C64::new(norm, 0.0);
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigh_reconstructs_complex_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(5, &mut rng);
        let (vals, vecs) = hermitian_eigh(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            5,
            vals.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let rebuilt = &vecs * d * vecs.adjoint();
        assert!((rebuilt - h).norm() < 1e-10);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_unitary(4, &mut rng);
        assert!((u.adjoint() * &u - identity(4)).norm() < 1e-12);
    }

    #[test]
    fn expm_apply_matches_dense_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(6, &mut rng);
        let v = random_unit_vector(6, &mut rng);
        let scale = C64::new(0.0, -1.3);
        let dense = expm(&h, scale) * &v;
        assert!((expm_apply(&h, scale, &v) - dense).norm() < 1e-10);
    }

    #[test]
    fn kron_matches_definition() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]).map(|x| C64::new(x, 0.0));
        let b = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]).map(|x| C64::new(x, 0.0));
        let k = kron(&a, &b);
        assert_eq!(k[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(k[(3, 2)], C64::new(4.0, 0.0));
        assert_eq!(k[(2, 1)], C64::new(3.0, 0.0));
    }
}
