//! Runs every worked case and prints its checks.

use std::time::Instant;

use varbound::cases::{case_boson_xn, case_planar_xz, case_su2_full, case_su3, CaseOptions, CaseReport, BOSON_DEFAULT_NMAX, XZ_DEFAULT_J};

fn show(name: &str, started: Instant, report: varbound::Result<CaseReport>) {
    println!("== {name} ({:.1?})", started.elapsed());
    match report {
        Ok(r) => {
            for c in &r.checks {
                let mark = if c.passed { "ok  " } else if c.fatal { "FAIL" } else { "warn" };
                println!("  {mark} {}: {}", c.name, c.detail);
            }
        }
        Err(e) => println!("  error: {e}"),
    }
}

fn main() {
    let opts = CaseOptions::default();
    let which: Vec<String> = std::env::args().skip(1).collect();
    let wants = |n: &str| which.is_empty() || which.iter().any(|w| w == n);
    if wants("su2") {
        let t = Instant::now();
        show("su2", t, case_su2_full(&[0.5, 1.0, 1.5, 2.0, 5.0, 10.0], &opts));
    }
    if wants("xz") {
        let t = Instant::now();
        show("xz", t, case_planar_xz(XZ_DEFAULT_J, &opts));
    }
    if wants("su3") {
        let t = Instant::now();
        show("su3", t, case_su3(&opts));
    }
    if wants("boson") {
        let t = Instant::now();
        show("boson", t, case_boson_xn(BOSON_DEFAULT_NMAX, &opts));
    }
}
