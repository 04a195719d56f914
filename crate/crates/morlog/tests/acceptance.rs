//! Acceptance gate. Each criterion prints exactly one pass/fail line
//! (visible with `--nocapture`); the test fails if the criterion does.
//!
//! Criteria 1-13 dispatch through `morlog::selftest`, the same runners the
//! `morlog selftest` subcommand uses. Criterion 14 executes the compiled
//! CLI binary itself.

use std::process::Command;
use std::time::Instant;

use morlog::selftest;

fn gate(index: u32) {
    let o = selftest::run(index);
    println!(
        "criterion {:02} [{}] {}: {}",
        o.index,
        if o.pass { "pass" } else { "FAIL" },
        o.anchor,
        o.detail
    );
    assert!(o.pass, "criterion {} ({}) failed: {}", o.index, o.anchor, o.detail);
}

#[test]
fn criterion_01_gaussian_alternating_sum() {
    gate(1);
}

#[test]
fn criterion_02_moebius_values() {
    gate(2);
}

#[test]
fn criterion_03_idempotent_element() {
    gate(3);
}

#[test]
fn criterion_04_burnside_product_oracle() {
    gate(4);
}

#[test]
fn criterion_05_euler_factor_inversion() {
    gate(5);
}

#[test]
fn criterion_06_k1_log_additivity() {
    gate(6);
}

#[test]
fn criterion_07_square_zero_log() {
    gate(7);
}

#[test]
fn criterion_08_hecke_form_of_the_log() {
    gate(8);
}

#[test]
fn criterion_09_theta_tower_integrality() {
    gate(9);
}

#[test]
fn criterion_10_artin_hasse_integrality() {
    gate(10);
}

#[test]
fn criterion_11_exp_inverts_log() {
    gate(11);
}

#[test]
fn criterion_12_level_structures() {
    gate(12);
}

#[test]
fn criterion_13_restriction_and_cancellation() {
    gate(13);
}

#[test]
fn criterion_14_selftest_cli() {
    let bin = env!("CARGO_BIN_EXE_morlog");
    let start = Instant::now();
    let out = Command::new(bin)
        .args(["--format", "json", "selftest"])
        .output()
        .expect("selftest binary runs");
    let secs = start.elapsed().as_secs_f64();
    let pass = out.status.success() && secs < 300.0;
    println!(
        "criterion 14 [{}] selftest-cli: exit {} in {:.1}s",
        if pass { "pass" } else { "FAIL" },
        out.status.code().map(|c| c.to_string()).unwrap_or_else(|| "?".into()),
        secs
    );
    assert!(
        out.status.success(),
        "selftest exited nonzero; stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(secs < 300.0, "selftest took {secs:.1}s, over the 300s budget");

    // identical config must give byte-identical reports
    let run = || {
        Command::new(bin)
            .args(["hecke-form", "--prime", "2", "--height", "2", "--seed", "5"])
            .output()
            .expect("hecke-form runs")
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "report bytes differ between identical runs");
}
