//! Variance lower and upper bounds for sets of Hermitian observables.
//!
//! The sum of variances of `A_1, ..., A_N` in a pure state `|ψ>` equals the
//! expectation of a Hamiltonian `H_Tot` on the doubled state `|ψ>|ψ>`. Ground
//! energies of `H_Tot` and related operators on the doubled space therefore
//! bound the minimum of the variance sum from below, and product states built
//! from their ground vectors bound it from above.

pub mod bounds;
pub mod cases;
pub mod eigen;
pub mod error;
pub mod hamiltonian;
pub mod io;
pub mod linalg;
pub mod operator;

pub type C64 = nalgebra::Complex<f64>;

pub use eigen::{lowest_k, LinearOperator, SolverConfig, SpectralResult};
pub use error::{Error, Result};
pub use hamiltonian::{build_h_tot, build_h_tot_modified, build_local_term, ExtendedHamiltonian};
pub use operator::{HermitianOperator, ObservableSet, PureState};
