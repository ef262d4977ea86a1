//! Full su(2) set `{J_X, J_Y, J_Z}`: the minimum variance sum is `j`,
//! reached by the spin coherent states.

use super::{CaseOptions, CasePoint, CaseReport, Provenance};
use crate::bounds::{prop1_bound, Method};
use crate::eigen::{degenerate_ground_manifold, lowest_k, SpectralResult};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_h_tot, ExtendedHamiltonian, HamiltonianKind, KronFactor, KronTerm};
use crate::operator::SpinMatrices;
use crate::C64;

/// `Σ_a c · J_a ⊗ J_a + shift · I ⊗ I`.
fn exchange(spin: &SpinMatrices, c: f64, shift: f64) -> Result<ExtendedHamiltonian> {
    let m = spin.dim();
    let mut terms = Vec::new();
    if shift != 0.0 {
        terms.push(KronTerm::new(shift, KronFactor::identity(m), KronFactor::identity(m)));
    }
    for j in [&spin.jx, &spin.jy, &spin.jz] {
        terms.push(KronTerm::new(c, KronFactor::from_matrix(j.clone())?, KronFactor::from_matrix(j.clone())?));
    }
    ExtendedHamiltonian::from_terms(m, terms, HamiltonianKind::Custom)
}

fn in_span(manifold: &[nalgebra::DVector<C64>], v: &nalgebra::DVector<C64>) -> f64 {
    let mut residual = v.clone();
    for b in manifold {
        let c = b.dotc(v);
        residual.axpy(-c, b, C64::new(1.0, 0.0));
    }
    residual.norm()
}

pub fn case_su2_full(j_values: &[f64], opts: &CaseOptions) -> Result<CaseReport> {
    if j_values.is_empty() {
        return Err(Error::InvalidArgument("no j values given".into()));
    }
    let mut case = CaseReport::new("su2", "j");
    let bopts = opts.bound_options();
    for &j in j_values {
        if j > 25.0 {
            return Err(Error::InvalidArgument(format!("j = {j} exceeds 25 for the su2 case")));
        }
        let spin = SpinMatrices::new(j)?;
        let set = spin.full_set()?;
        let report = prop1_bound(&set, &bopts)?;
        let tag = format!("j={j}");

        case.check(
            format!("{tag}: ground-energy branch"),
            report.method == Method::Prop1Gs,
            format!("method {}", report.method.as_str()),
        );
        case.check_close(format!("{tag}: lower = j"), report.lower, j, 1e-8);
        match report.upper {
            Some(u) => case.check_close(format!("{tag}: upper = lower"), u, report.lower, 1e-8),
            None => case.check(format!("{tag}: upper = lower"), false, "no witness"),
        };

        let h = build_h_tot(&set);
        let spec: SpectralResult = lowest_k(&h, 2, &bopts.solver)?;
        let manifold = degenerate_ground_manifold(&h, &spec, 1e-7 * j.max(1.0), &bopts.solver)?;
        let top = spin.state(j)?.doubled();
        let bottom = spin.state(-j)?.doubled();
        let (d_top, d_bottom) = (in_span(&manifold, &top), in_span(&manifold, &bottom));
        case.check(
            format!("{tag}: |j,±j>|j,±j> in ground manifold"),
            d_top < 1e-8 && d_bottom < 1e-8,
            format!("manifold dimension {}, distances {d_top:.2e} and {d_bottom:.2e}", manifold.len()),
        );
        let expected_dim = (4.0 * j + 1.0).round() as usize;
        case.check(
            format!("{tag}: ground manifold dimension 4j+1"),
            manifold.len() == expected_dim,
            format!("found {}", manifold.len()),
        );

        // Casimir remap: H' = j(j+1) I⊗I − Σ J_a⊗J_a and the ferromagnetic
        // Heisenberg model −Σ J_a⊗J_a with ground energy −j².
        let casimir = j * (j + 1.0);
        let remapped = lowest_k(&exchange(&spin, -1.0, casimir)?, 1, &bopts.solver)?.eigenvalues[0];
        let heisenberg = lowest_k(&exchange(&spin, -1.0, 0.0)?, 1, &bopts.solver)?.eigenvalues[0];
        case.check_close(format!("{tag}: Heisenberg ground energy = -j^2"), heisenberg, -j * j, 1e-9 * j.max(1.0).powi(2));
        case.check_close(format!("{tag}: remapped ground energy = H_Tot ground energy"), remapped, spec.eigenvalues[0], 1e-9);

        let psi = spin.state(j)?;
        let coherent = set.v_tot(&psi)?;
        let mut point = CasePoint::new(tag, Some(j), report);
        point.value("eps_gs", spec.eigenvalues[0]);
        point.value("eps_remapped", remapped);
        point.value("eps_heisenberg", heisenberg);
        point.value("v_coherent", coherent);
        point.value("manifold_dim", manifold.len() as f64);
        point.reference("min_v", j, Provenance::ClosedForm);
        point.relative("lower_vs_min_v", point.report.lower, j);
        case.points.push(point);
    }
    Ok(case)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_spins_pass() {
        let case = case_su2_full(&[0.5, 1.0, 3.0], &CaseOptions::default()).unwrap();
        assert!(case.all_passed(), "{:#?}", case.failed_checks());
        assert_eq!(case.points.len(), 3);
        assert!((case.points[2].report.lower - 3.0).abs() < 1e-8);
    }

    #[test]
    fn too_large_spin() {
        assert!(case_su2_full(&[30.0], &CaseOptions::default()).is_err());
    }
}
