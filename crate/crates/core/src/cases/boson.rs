//! Single mode with `{n̂, x̂}` in a truncated Fock space. The lower bound is
//! `ε_gs(H_{Tot,x}^0)`, which covers states with `<x̂> = 0`; the squeezed
//! vacuum gives the closed-form comparison.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CaseOptions, CasePoint, CaseReport, Provenance};
use crate::bounds::{attach_witness, direct_minimize, golden_section, BoundOptions, BoundReport, Method, SymmetryHint};
use crate::eigen::{is_zero_energy, lowest_k};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_h_tot, build_h_tot_modified};
use crate::linalg::{self, kron_vec};
use crate::operator::{make_boson_operators, ObservableSet, PureState};
use crate::C64;

pub const BOSON_DEFAULT_NMAX: &[usize] = &[10, 20, 30, 40, 50, 60];
const REFERENCE_NMAX: usize = 30;
const REF_EPS_X: f64 = 0.412721;
const REF_LAMBDA: f64 = 0.99931;
const REF_UPPER: f64 = 0.415139;
const REF_XI: f64 = 0.1665679;
const REF_V_XI: f64 = 0.41591;
const REF_OVERLAP_STATE: f64 = 0.999927;
const REF_OVERLAP_GROUND: f64 = 0.999168;
const GAUSSIAN_SAMPLES: usize = 200;
const GAUSSIAN_TRUNCATION: usize = 120;

/// `V_xn` of the squeezed vacuum with squeezing `r`:
/// `2 sinh²r cosh²r + e^{−2r}/2`.
pub fn squeezed_vacuum_variance_sum(r: f64) -> f64 {
    2.0 * r.sinh().powi(2) * r.cosh().powi(2) + (-2.0 * r).exp() / 2.0
}

/// Squeezed vacuum truncated at `n_max`, renormalized, with the discarded
/// probability mass.
pub fn squeezed_vacuum(n_max: usize, r: f64) -> Result<(PureState, f64)> {
    let mut amps = DVector::zeros(n_max + 1);
    let mut c = 1.0 / r.cosh().sqrt();
    let mut kept = 0.0;
    let t = -r.tanh();
    let mut n = 0usize;
    while 2 * n <= n_max {
        amps[2 * n] = C64::new(c, 0.0);
        kept += c * c;
        n += 1;
        c *= t * ((2 * n - 1) as f64 / (2 * n) as f64).sqrt();
    }
    let tail = (1.0 - kept).max(0.0);
    Ok((PureState::normalized(amps)?, tail))
}

/// `D(β) S(ξ) |0>` in the truncation of `a`, with `ξ = r e^{iθ}`.
fn displaced_squeezed(a: &nalgebra::DMatrix<C64>, beta: C64, xi: C64) -> Result<PureState> {
    let n_max = a.nrows() - 1;
    let (r, theta) = (xi.norm(), xi.arg());
    let (base, _) = squeezed_vacuum(n_max, r)?;
    let rotated = DVector::from_fn(n_max + 1, |k, _| {
        base.amplitudes()[k] * C64::from_polar(1.0, theta * (k / 2) as f64)
    });
    let displace = a.adjoint() * beta - a * beta.conj();
    PureState::normalized(linalg::expm_apply(&displace, C64::new(1.0, 0.0), &rotated))
}

fn x_index(set: &ObservableSet) -> usize {
    set.index_of("x").expect("boson set has an x operator")
}

pub fn case_boson_xn(n_max_values: &[usize], opts: &CaseOptions) -> Result<CaseReport> {
    if n_max_values.is_empty() {
        return Err(Error::InvalidArgument("no n_max values given".into()));
    }
    if n_max_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n_max values must be strictly ascending".into()));
    }
    if *n_max_values.last().expect("non-empty") > 60 {
        return Err(Error::InvalidArgument("n_max above 60 is not supported for the boson case".into()));
    }
    let mut case = CaseReport::new("boson", "n_max");
    let bopts: BoundOptions = opts.bound_options();
    let cfg = &bopts.solver;

    let (xi_m, v_xi, _) = golden_section(0.0, 1.0, 1e-12, |r| Ok(squeezed_vacuum_variance_sum(r)))?;
    case.check_close("closed-form xi_m", xi_m, REF_XI, 1e-5);
    case.check_close("closed-form V(xi_m)", v_xi, REF_V_XI, 1e-4);
    case.check_close("V(xi = 0) = 1/2", squeezed_vacuum_variance_sum(0.0), 0.5, 1e-15);

    let mut eps_x_series = Vec::new();
    let mut eps_tot_series = Vec::new();
    for &n_max in n_max_values {
        let bosons = make_boson_operators(n_max)?;
        let set = bosons.xn_set()?;
        let xi = x_index(&set);
        let tag = format!("n_max={n_max}");

        let h_tot = build_h_tot(&set);
        let tot = lowest_k(&h_tot, 2, cfg)?;
        eps_tot_series.push((n_max, tot.eigenvalues[0], tot.eigenvalues[1]));

        let u = linalg::expm(bosons.number.entries(), C64::new(0.0, -std::f64::consts::PI));
        let parity = SymmetryHint::parity(xi, u).verify(&set)?;
        case.check(
            format!("{tag}: parity exp(-i pi n) reverses x"),
            parity.halves_scan_of(xi),
            "U x U^dagger = -x with H_n invariant",
        );

        let h = build_h_tot_modified(&set, xi, 0.0)?;
        let spec = lowest_k(&h, 2, cfg)?;
        let eps_x = spec.eigenvalues[0];
        eps_x_series.push(eps_x);
        let mut report = BoundReport::new(eps_x, Method::Prop2);
        report.set_restricted = true;
        report.n_star = Some(xi);
        report.alpha_star = Some(0.0);
        report.note("holds on states with <x> = 0");
        let sat = attach_witness(&mut report, &set, &h, &spec, &bopts)?;

        let (squeezed, tail) = squeezed_vacuum(n_max, xi_m)?;
        let v_squeezed = set.v_tot(&squeezed)?;
        let ground_overlap = kron_vec(squeezed.amplitudes(), squeezed.amplitudes())
            .dotc(&spec.eigenvectors[0])
            .norm();

        let mut point = CasePoint::new(tag.clone(), Some(n_max as f64), report);
        point.value("eps_gs_tot", tot.eigenvalues[0]);
        point.value("eps_1_tot", tot.eigenvalues[1]);
        point.value("eps_gs_x", eps_x);
        point.value("v_squeezed_xi_m", v_squeezed);
        point.value("squeezed_tail_mass", tail);
        point.value("overlap_ground_squeezed", ground_overlap);
        if let Some(sat) = &sat {
            let overlap = squeezed.inner(&sat.state).norm();
            point.value("overlap_witness_squeezed", overlap);
            if n_max == REFERENCE_NMAX {
                case.check_close(format!("{tag}: lambda_max"), sat.lambda_max, REF_LAMBDA, 1e-3);
                case.check_close(format!("{tag}: upper"), sat.upper, REF_UPPER, 5e-4);
                case.check_close(format!("{tag}: <xi_m|psi_sat>"), overlap, REF_OVERLAP_STATE, 1e-3);
                let gap = (sat.upper - eps_x) / eps_x;
                point.value("relative_gap", gap);
                case.check(format!("{tag}: relative gap about 0.5%"), gap < 0.01, format!("{:.3}%", 100.0 * gap));
            }
        } else if n_max == REFERENCE_NMAX {
            case.check(format!("{tag}: witness"), false, "no symmetric product witness");
        }
        if n_max == REFERENCE_NMAX {
            case.check_close(format!("{tag}: eps_gs,x"), eps_x, REF_EPS_X, 1e-4);
            case.check_close(format!("{tag}: |<eps_gs|xi_m xi_m>|"), ground_overlap, REF_OVERLAP_GROUND, 1e-3);
            case.check(
                format!("{tag}: squeezed vacuum tail mass < 1e-12"),
                tail < 1e-12,
                format!("{tail:.3e}"),
            );
            let oracle = direct_minimize(&set, opts.direct_restarts.min(32), opts.seed)?
                .upper
                .expect("direct minimization reports its value");
            point.value("direct_oracle", oracle);
            case.check_close(format!("{tag}: direct minimization vs squeezed vacuum"), oracle, v_xi, 1e-3);
            point.reference("eps_gs_x", REF_EPS_X, Provenance::Published);
            point.reference("lambda_max", REF_LAMBDA, Provenance::Published);
            point.reference("upper", REF_UPPER, Provenance::Published);
            point.relative("eps_gs_x", eps_x, REF_EPS_X);
            if let Some(u) = point.report.upper {
                point.relative("upper", u, REF_UPPER);
            }
        }
        point.reference("v_xi_m_closed_form", v_xi, Provenance::ClosedForm);
        point.relative("upper_vs_closed_form", point.report.upper.unwrap_or(f64::NAN), v_xi);
        case.points.push(point);
    }

    let (last_n, last_gs, _) = *eps_tot_series.last().expect("non-empty");
    case.check(
        format!("H_Tot ground energy vanishes at n_max={last_n}"),
        is_zero_energy(last_gs, 1.0),
        format!("{last_gs:.3e}"),
    );
    let excited_falls = eps_tot_series.windows(2).all(|w| w[1].2 <= w[0].2 + 1e-12);
    case.flag(
        "H_Tot first excited energy decreases with n_max",
        excited_falls,
        eps_tot_series
            .iter()
            .map(|(n, _, e1)| format!("{n}:{e1:.6}"))
            .collect::<Vec<_>>()
            .join(" "),
    );
    let monotone = eps_x_series.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    case.flag(
        "eps_gs,x non-increasing in n_max (to 1e-9)",
        monotone,
        format!("{eps_x_series:?}"),
    );
    if eps_x_series.len() >= 2 {
        let k = eps_x_series.len();
        let change = (eps_x_series[k - 1] - eps_x_series[k - 2]).abs();
        case.flag(
            "eps_gs,x truncation converged (change < 1e-4)",
            change < 1e-4,
            format!("{change:.3e}"),
        );
        let top_two = &n_max_values[k - 2..];
        if top_two == [50, 60] {
            case.check("eps_gs,x at n_max 50 and 60 within 1e-6", change < 1e-6, format!("{change:.3e}"));
        }
    }
    gaussian_check(&mut case, opts.seed)?;
    Ok(case)
}

/// Displacement never lowers `V_xn` of a squeezed state.
fn gaussian_check(case: &mut CaseReport, seed: u64) -> Result<()> {
    let bosons = make_boson_operators(GAUSSIAN_TRUNCATION)?;
    let set = bosons.xn_set()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a55);
    let mut worst = f64::INFINITY;
    for _ in 0..GAUSSIAN_SAMPLES {
        let beta = C64::from_polar(rng.random_range(0.0..1.0), rng.random_range(0.0..std::f64::consts::TAU));
        let xi = C64::from_polar(rng.random_range(0.0..0.6), rng.random_range(0.0..std::f64::consts::TAU));
        let displaced = set.v_tot(&displaced_squeezed(&bosons.annihilation, beta, xi)?)?;
        let centred = set.v_tot(&displaced_squeezed(&bosons.annihilation, C64::new(0.0, 0.0), xi)?)?;
        worst = worst.min(displaced - centred);
    }
    case.check(
        "Gaussian states: displacement never lowers V_xn",
        worst >= -1e-9,
        format!("min V(beta, xi) - V(0, xi) over {GAUSSIAN_SAMPLES} samples = {worst:.3e}"),
    );
    Ok(())
}
