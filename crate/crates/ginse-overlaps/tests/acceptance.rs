//! Acceptance suite: every validation criterion runs at its stated
//! tolerance and prints one pass/fail line. The same suite implementations
//! back the `validate` subcommand.

use ginse_overlaps::suites::{self, SuiteResult};

const SEED: u64 = 20_260_808;

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |p| p.get())
}

fn report(criterion: &str, s: &SuiteResult) {
    for c in &s.checks {
        println!(
            "[{}] {criterion} :: {} measured {:.3e} threshold {:.3e} {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.threshold,
            c.detail
        );
    }
    assert!(s.pass, "criterion failed: {criterion}");
}

#[test]
fn criterion_01_band_entry_equivalence() {
    report("criterion 1 (closed forms vs moment engine)", &suites::suite_band_equivalence(SEED));
}

#[test]
fn criterion_02_origin_limit() {
    report("criterion 2 (origin limit ratio)", &suites::suite_origin());
}

#[test]
fn criterion_03_mc_vs_exact_diagonal() {
    report("criterion 3 (MC vs exact, diagonal)", &suites::suite_mc_diag(SEED, threads()));
}

#[test]
fn criterion_04_mc_vs_exact_offdiagonal() {
    report(
        "criterion 4 (MC vs exact, off-diagonal)",
        &suites::suite_mc_offdiag(SEED, threads(), 1_000_000),
    );
}

#[test]
fn criterion_05_route_equivalence() {
    report("criterion 5 (Schur vs direct overlaps)", &suites::suite_route_equivalence(SEED));
}

#[test]
fn criterion_06_t_average_closed_forms() {
    report("criterion 6 (T-average closed forms)", &suites::suite_t_averages(SEED));
}

#[test]
fn criterion_07_identity_suite() {
    report("criterion 7 (overlap identities)", &suites::suite_identities(SEED, 100_000));
}

#[test]
fn criterion_08_bulk_trend() {
    report("criterion 8 (bulk universality trend)", &suites::suite_asymptotics());
}

#[test]
fn criterion_09_pfaffian_kernel() {
    report("criterion 9 (Pfaffian kernel)", &suites::suite_pfaffian(SEED));
}

#[test]
fn criterion_10_metropolis_route() {
    report("criterion 10 (jpdf sampler route)", &suites::suite_metropolis(SEED, threads()));
}
