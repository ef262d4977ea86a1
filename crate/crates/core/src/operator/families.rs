//! Built-in operator families: spin-j generators, truncated single-mode
//! bosonic operators and a fixed set of four 3×3 su(3) observables.

use nalgebra::DMatrix;

use super::{HermitianOperator, ObservableSet, PureState};
use crate::error::{Error, Result};
use crate::C64;

/// Spin-j generators in the `J_Z` eigenbasis ordered `m = j, j-1, ..., -j`.
#[derive(Clone, Debug)]
pub struct SpinMatrices {
    two_j: u32,
    pub jx: DMatrix<C64>,
    pub jy: DMatrix<C64>,
    pub jz: DMatrix<C64>,
    pub j_plus: DMatrix<C64>,
}

impl SpinMatrices {
    pub fn new(j: f64) -> Result<Self> {
        let two_j = spin_twice(j)?;
        let dim = two_j as usize + 1;
        let j = two_j as f64 / 2.0;
        let m = |k: usize| j - k as f64;

        // <j, m+1 | J+ | j, m> = sqrt(j(j+1) - m(m+1)); index k holds m = j - k.
        let mut j_plus = DMatrix::zeros(dim, dim);
        for k in 1..dim {
            let mk = m(k);
            j_plus[(k - 1, k)] = C64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
        }
        let j_minus = j_plus.adjoint();
        let half = C64::new(0.5, 0.0);
        let jx = (&j_plus + &j_minus) * half;
        let jy = (&j_plus - &j_minus) * C64::new(0.0, -0.5);
        let jz = DMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                C64::new(m(r), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Ok(Self {
            two_j,
            jx,
            jy,
            jz,
            j_plus,
        })
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn j_minus(&self) -> DMatrix<C64> {
        self.j_plus.adjoint()
    }

    /// `|j, m>` for `m ∈ {j, j-1, ..., -j}`.
    pub fn state(&self, m: f64) -> Result<PureState> {
        let k = self.j() - m;
        if k < -1e-12 || (k - k.round()).abs() > 1e-12 || k.round() as usize >= self.dim() {
            return Err(Error::InvalidArgument(format!(
                "m = {m} is not a valid projection for j = {}",
                self.j()
            )));
        }
        PureState::basis(self.dim(), k.round() as usize)
    }

    /// `{J_X, J_Y, J_Z}`.
    pub fn full_set(&self) -> Result<ObservableSet> {
        ObservableSet::new(vec![
            HermitianOperator::new("Jx", self.jx.clone())?,
            HermitianOperator::new("Jy", self.jy.clone())?,
            HermitianOperator::new("Jz", self.jz.clone())?,
        ])
    }

    /// `{J_X, J_Z}`, the planar-squeezing pair.
    pub fn xz_set(&self) -> Result<ObservableSet> {
        ObservableSet::new(vec![
            HermitianOperator::new("Jx", self.jx.clone())?,
            HermitianOperator::new("Jz", self.jz.clone())?,
        ])
    }

    /// Two-axis countertwisting generator `-i (J+² - J-²)`.
    pub fn two_axis_generator(&self) -> DMatrix<C64> {
        let jp2 = &self.j_plus * &self.j_plus;
        let jm2 = jp2.adjoint();
        (jp2 - jm2) * C64::new(0.0, -1.0)
    }

    pub fn casimir(&self) -> DMatrix<C64> {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }
}

fn spin_twice(j: f64) -> Result<u32> {
    let two_j = 2.0 * j;
    if !two_j.is_finite() || (two_j - two_j.round()).abs() > 1e-12 || two_j.round() < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "spin j = {j} is not a positive half-integer"
        )));
    }
    Ok(two_j.round() as u32)
}

/// `{J_X, J_Y, J_Z}` of the spin-j irreducible representation.
pub fn make_spin_operators(j: f64) -> Result<ObservableSet> {
    SpinMatrices::new(j)?.full_set()
}

/// Number, position and momentum operators on `span{|0>, ..., |n_max>}`.
///
/// `x = (a + a†)/√2` and `p = (a - a†)/(i√2)`. The canonical commutator
/// `[x, p] = i` fails only on the top Fock level because of the truncation.
#[derive(Clone, Debug)]
pub struct BosonOperators {
    pub number: HermitianOperator,
    pub position: HermitianOperator,
    pub momentum: HermitianOperator,
    pub annihilation: DMatrix<C64>,
}

impl BosonOperators {
    pub fn n_max(&self) -> usize {
        self.number.dim() - 1
    }

    /// `{n, x}`.
    pub fn xn_set(&self) -> Result<ObservableSet> {
        ObservableSet::new(vec![self.number.clone(), self.position.clone()])
    }

    /// `{n, x, p}`.
    pub fn xpn_set(&self) -> Result<ObservableSet> {
        ObservableSet::new(vec![
            self.number.clone(),
            self.position.clone(),
            self.momentum.clone(),
        ])
    }
}

pub fn make_boson_operators(n_max: usize) -> Result<BosonOperators> {
    if n_max == 0 {
        return Err(Error::InvalidArgument(
            "n_max must be at least 1 for a non-trivial variance problem".into(),
        ));
    }
    let dim = n_max + 1;
    let mut a = DMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&a + &a_dag) * C64::new(inv_sqrt2, 0.0);
    let p = (&a - &a_dag) * C64::new(0.0, -inv_sqrt2);
    let n: Vec<f64> = (0..dim).map(|k| k as f64).collect();
    Ok(BosonOperators {
        number: HermitianOperator::diagonal("n", &n)?,
        position: HermitianOperator::new("x", x)?,
        momentum: HermitianOperator::new("p", p)?,
        annihilation: a,
    })
}

/// The four 3×3 observables `A_1 ... A_4` of the su(3) worked example.
pub fn su3_example_set() -> ObservableSet {
    let o = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let i = C64::new(0.0, 1.0);
    let a1 = DMatrix::from_row_slice(3, 3, &[o, r(1.0), o, r(1.0), o, i, o, -i, o]);
    let a2 = DMatrix::from_row_slice(3, 3, &[r(1.0), o, o, o, o, o, o, o, r(-1.0)]);
    let a3 = DMatrix::from_row_slice(
        3,
        3,
        &[r(1.0), r(1.0), o, r(1.0), o, r(-1.0), o, r(-1.0), r(-1.0)],
    );
    let a4 = DMatrix::from_row_slice(3, 3, &[r(1.0), o, i, o, o, o, -i, o, r(-1.0)]);
    let ops = [("A1", a1), ("A2", a2), ("A3", a3), ("A4", a4)]
        .into_iter()
        .map(|(label, m)| HermitianOperator::new(label, m).expect("hard-coded matrices are Hermitian"))
        .collect();
    ObservableSet::new(ops).expect("hard-coded matrices share a dimension")
}
