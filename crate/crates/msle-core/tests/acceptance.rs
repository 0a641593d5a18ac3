//! Acceptance gate: one test per suite check, each printing a single
//! pass/fail line (visible with `--nocapture`). Tolerances live next to the
//! checks in `msle_core::suite`.

use std::sync::{Mutex, PoisonError};

use msle_core::suite::{self, CheckResult};

/// The Monte Carlo checks saturate all cores through rayon; running them
/// concurrently would double-book the machine and distort their timings.
static MC_LOCK: Mutex<()> = Mutex::new(());

fn assert_check(r: CheckResult) {
    let verdict = if r.passed { "pass" } else { "FAIL" };
    println!(
        "check {:2} {:24} {} [{:.2} s] {}",
        r.id, r.name, verdict, r.seconds, r.detail
    );
    assert!(r.passed, "{} failed: {}", r.name, r.detail);
}

#[test]
fn c01_matrix_tables() {
    assert_check(suite::check_matrix_tables());
}

#[test]
fn c02_tiling_counts() {
    assert_check(suite::check_tiling_counts());
}

#[test]
fn c03_catalan_and_order() {
    assert_check(suite::check_catalan_and_order());
}

#[test]
fn c04_basis_sum() {
    assert_check(suite::check_basis_sum());
}

#[test]
fn c05_closed_forms() {
    assert_check(suite::check_closed_forms());
}

#[test]
fn c06_pde_residuals() {
    assert_check(suite::check_pde_residuals());
}

#[test]
fn c07_mobius_covariance() {
    assert_check(suite::check_covariance());
}

#[test]
fn c08_fused_pair_limits() {
    assert_check(suite::check_asymptotics());
}

#[test]
fn c09_dual_basis() {
    assert_check(suite::check_dual_basis());
}

#[test]
fn c10_decay_slopes() {
    assert_check(suite::check_decay_slopes());
}

#[test]
fn c11_general_kappa_n2() {
    assert_check(suite::check_general_kappa_n2());
}

#[test]
fn c12_pfaffian_and_positivity() {
    assert_check(suite::check_pfaffian_positivity());
}

#[test]
fn c13_mc_marginals() {
    let _guard = MC_LOCK.lock().unwrap_or_else(PoisonError::into_inner);
    assert_check(suite::check_mc_marginals());
}

#[test]
fn c14_mc_drive() {
    let _guard = MC_LOCK.lock().unwrap_or_else(PoisonError::into_inner);
    assert_check(suite::check_mc_drive());
}
