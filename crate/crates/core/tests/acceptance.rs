//! One test per acceptance criterion. Each prints its report line.

use std::io::Write;
use std::process::Command;

use kdv_airy::acceptance::{self, CriterionOutcome};

fn check(outcome: CriterionOutcome) {
    // Written to the raw handle so the line shows without --nocapture.
    let _ = writeln!(std::io::stderr(), "{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn criterion_01_airy_accuracy() {
    check(acceptance::airy_accuracy());
}

#[test]
fn criterion_02_asymptotic_series() {
    check(acceptance::asymptotic_series());
}

#[test]
fn criterion_03_profile_identity() {
    check(acceptance::profile_identity());
}

#[test]
fn criterion_04_conservation() {
    check(acceptance::conservation());
}

#[test]
fn criterion_05_step_exactness() {
    check(acceptance::step_exactness());
}

#[test]
fn criterion_06_fourier_equivalence() {
    check(acceptance::fourier_equivalence());
}

#[test]
fn criterion_07_split_invariance() {
    check(acceptance::split_invariance());
}

#[test]
fn criterion_08_remainder_order() {
    check(acceptance::remainder_order());
}

#[test]
fn criterion_09_growth_bounds() {
    check(acceptance::growth_bounds());
}

#[test]
fn criterion_10_pde_convergence() {
    check(acceptance::pde_convergence());
}

#[test]
fn criterion_11_determinism() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_kdv-airy"))
            .arg("selftest")
            .output()
            .expect("selftest runs");
        assert!(
            matches!(out.status.code(), Some(0) | Some(1)),
            "unexpected status {:?}",
            out.status
        );
        out.stdout
    };
    let (first, second) = (run(), run());
    let lines = String::from_utf8_lossy(&first).lines().count();
    let passed = first == second && lines == 12;
    check(CriterionOutcome {
        id: 11,
        name: "Determinism",
        passed,
        detail: format!(
            "two selftest processes produced {} reports of {} bytes",
            if first == second {
                "identical"
            } else {
                "different"
            },
            first.len()
        ),
    });
}
