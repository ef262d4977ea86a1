//! User-supplied symmetries that shorten the `α` scan.
//!
//! A parity `U` with `U A_n U† = −A_n` that also leaves `Σ_{m≠n} H_m`
//! invariant makes `ε_{gs,n}^α` even in `α`, so only `α ≥ 0` is scanned. A
//! continuous symmetry `exp(iθG)` of `H_Tot` that flips the sign of `A_n`
//! somewhere on its orbit moves every state into `<A_n> = 0` without changing
//! its variances, so `α = 0` alone gives a bound for all states.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eigen::LinearOperator;
use crate::error::{Error, Result};
use crate::hamiltonian::{build_h_tot, ExtendedHamiltonian, HamiltonianKind, KronFactor, KronTerm};
use crate::linalg::{self, random_unit_vector};
use crate::operator::ObservableSet;
use crate::C64;

pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum SymmetryKind {
    ParityOnOperator { n: usize, unitary: DMatrix<C64> },
    ContinuousRotation { generator: DMatrix<C64> },
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryHint {
    pub kind: SymmetryKind,
    verified: bool,
    /// Operators whose `α` scan the hint shortens, filled in by `verify`.
    targets: Vec<usize>,
}

impl SymmetryHint {
    pub fn none() -> Self {
        Self {
            kind: SymmetryKind::None,
            verified: false,
            targets: Vec::new(),
        }
    }

    pub fn parity(n: usize, unitary: DMatrix<C64>) -> Self {
        Self {
            kind: SymmetryKind::ParityOnOperator { n, unitary },
            verified: false,
            targets: Vec::new(),
        }
    }

    pub fn rotation(generator: DMatrix<C64>) -> Self {
        Self {
            kind: SymmetryKind::ContinuousRotation { generator },
            verified: false,
            targets: Vec::new(),
        }
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Verified parity acting on operator `n`.
    pub fn halves_scan_of(&self, n: usize) -> bool {
        self.verified && matches!(self.kind, SymmetryKind::ParityOnOperator { .. }) && self.targets.contains(&n)
    }

    /// Verified continuous symmetry reversing operator `n`.
    pub fn pins_alpha_of(&self, n: usize) -> bool {
        self.verified && matches!(self.kind, SymmetryKind::ContinuousRotation { .. }) && self.targets.contains(&n)
    }

    /// Checks the hint against `set`. Structural problems (wrong dimension,
    /// bad index, non-unitary `U`, non-Hermitian generator) are errors; a
    /// well-formed hint that simply does not hold comes back unverified.
    pub fn verify(mut self, set: &ObservableSet) -> Result<Self> {
        let m = set.dim();
        self.verified = false;
        self.targets.clear();
        match &self.kind {
            SymmetryKind::None => {}
            SymmetryKind::ParityOnOperator { n, unitary } => {
                let n = *n;
                let a = set.get(n)?.entries();
                check_square(unitary, m)?;
                let unitarity = (unitary.adjoint() * unitary - linalg::identity(m)).norm();
                if unitarity > 1e-8 {
                    return Err(Error::InvalidArgument(format!(
                        "parity matrix is not unitary (‖U†U − I‖ = {unitarity:.3e})"
                    )));
                }
                let scale = linalg::max_abs(a).max(1.0);
                let flips = (unitary * a * unitary.adjoint() + a).norm() <= SYMMETRY_TOL * scale * m as f64;
                let rest: Vec<usize> = (0..set.len()).filter(|&i| i != n).collect();
                let preserved = rest.is_empty() || {
                    let others = build_h_tot(&set.subset(&rest)?);
                    commutes_with_pair(&others, unitary)
                };
                if flips && preserved {
                    self.verified = true;
                    self.targets.push(n);
                }
            }
            SymmetryKind::ContinuousRotation { generator } => {
                check_square(generator, m)?;
                let herm = (generator - generator.adjoint()).norm();
                if herm > 1e-10 * linalg::max_abs(generator).max(1.0) {
                    return Err(Error::InvalidArgument("rotation generator is not Hermitian".into()));
                }
                let h = build_h_tot(set);
                let i = C64::new(0.0, 1.0);
                let invariant = [0.37, 1.1, 2.9]
                    .iter()
                    .all(|&theta| commutes_with_pair(&h, &linalg::expm(generator, i * theta)));
                if invariant {
                    let flip = linalg::expm(generator, i * std::f64::consts::PI);
                    for (idx, op) in set.iter().enumerate() {
                        let a = op.entries();
                        let scale = linalg::max_abs(a).max(1.0);
                        if (&flip * a * flip.adjoint() + a).norm() <= 1e-8 * scale * m as f64 {
                            self.targets.push(idx);
                        }
                    }
                    self.verified = !self.targets.is_empty();
                }
            }
        }
        if !self.verified && self.kind != SymmetryKind::None {
            log::warn!("symmetry hint could not be verified; scanning without it");
        }
        Ok(self)
    }
}

fn check_square(u: &DMatrix<C64>, m: usize) -> Result<()> {
    if u.nrows() != m || u.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: u.nrows().max(u.ncols()),
        });
    }
    Ok(())
}

/// `(U⊗U) H (U⊗U)† = H`, tested on a few random vectors through the
/// matrix-free apply.
fn commutes_with_pair(h: &ExtendedHamiltonian, u: &DMatrix<C64>) -> bool {
    let m = h.base_dim();
    let uu = ExtendedHamiltonian::from_terms(
        m,
        vec![KronTerm::new(
            1.0,
            KronFactor::from_matrix(u.clone()).expect("square"),
            KronFactor::from_matrix(u.clone()).expect("square"),
        )],
        HamiltonianKind::Custom,
    )
    .expect("dimensions agree");
    let scale = h.upper_bound().abs().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x51de);
    (0..3).all(|_| {
        let v = random_unit_vector(m * m, &mut rng);
        let lhs = h.apply_vec(&uu.apply_vec(&v));
        let rhs = uu.apply_vec(&h.apply_vec(&v));
        (lhs - rhs).norm() <= SYMMETRY_TOL * scale
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{su3_example_set, SpinMatrices};

    fn parity_z(spin: &SpinMatrices) -> DMatrix<C64> {
        linalg::expm(&spin.jz, C64::new(0.0, -std::f64::consts::PI))
    }

    #[test]
    fn xz_parity_is_verified() {
        for two_j in [2usize, 5, 10] {
            let spin = SpinMatrices::new(two_j as f64 / 2.0).unwrap();
            let set = spin.xz_set().unwrap();
            let hint = SymmetryHint::parity(0, parity_z(&spin)).verify(&set).unwrap();
            assert!(hint.is_verified());
            assert!(hint.halves_scan_of(0));
            assert!(!hint.halves_scan_of(1));
        }
    }

    #[test]
    fn parity_on_wrong_operator_is_not_verified() {
        let spin = SpinMatrices::new(2.0).unwrap();
        let hint = SymmetryHint::parity(1, parity_z(&spin))
            .verify(&spin.xz_set().unwrap())
            .unwrap();
        assert!(!hint.is_verified());
    }

    #[test]
    fn non_unitary_parity_is_an_error() {
        let set = su3_example_set();
        let u = DMatrix::identity(3, 3) * C64::new(2.0, 0.0);
        assert!(SymmetryHint::parity(0, u).verify(&set).is_err());
    }

    #[test]
    fn y_rotation_pins_both_xz_operators() {
        let spin = SpinMatrices::new(3.0).unwrap();
        let hint = SymmetryHint::rotation(spin.jy.clone())
            .verify(&spin.xz_set().unwrap())
            .unwrap();
        assert!(hint.pins_alpha_of(0) && hint.pins_alpha_of(1));
    }

    #[test]
    fn z_rotation_is_not_a_symmetry_of_xz() {
        let spin = SpinMatrices::new(1.0).unwrap();
        let hint = SymmetryHint::rotation(spin.jz.clone())
            .verify(&spin.xz_set().unwrap())
            .unwrap();
        assert!(!hint.is_verified());
    }

    #[test]
    fn wrong_dimension_is_an_error() {
        let set = su3_example_set();
        let hint = SymmetryHint::rotation(DMatrix::identity(2, 2));
        assert!(matches!(hint.verify(&set), Err(Error::DimensionMismatch { .. })));
    }
}
