//! Acceptance criteria, one test per criterion. Each prints a single
//! PASS/FAIL line (written past the test harness capture) and asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use pssmp_core::verify::{run_suite, up_right_tail_slope, Check, Status, Suite, VerifyOptions};

fn report(criterion: &str, ok: bool, summary: &str) {
    let line = format!("acceptance {criterion}: {} | {summary}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn describe(checks: &[&Check]) -> String {
    checks
        .iter()
        .map(|c| format!("{} {:?} {:.3e}/{:.3e}", c.name, c.status, c.measured, c.tolerance))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Runs `suite`, keeps the named checks, and requires each to have status
/// `want` and the suite to finish within `limit`.
fn criterion(label: &str, suite: Suite, names: &[&str], want: Status, limit: Duration) {
    let opts = VerifyOptions::default();
    let start = Instant::now();
    let rep = run_suite(suite, &opts);
    let elapsed = start.elapsed();
    let checks: Vec<&Check> = names.iter().map(|n| rep.check(n).unwrap_or_else(|| panic!("missing check {n}"))).collect();
    let ok = checks.iter().all(|c| c.status == want) && elapsed < limit;
    report(label, ok, &format!("{} | {:.1}s (limit {}s)", describe(&checks), elapsed.as_secs_f64(), limit.as_secs()));
    for c in &checks {
        assert_eq!(c.status, want, "{}: {}", c.name, c.detail);
    }
    assert!(elapsed < limit, "{label} took {elapsed:?}");
}

#[test]
fn criterion_1_exit_masses_normalize() {
    criterion("1 normalization", Suite::Normalization, &["exit-mass-up-kind", "exit-mass-down-kind"], Status::Pass, Duration::from_secs(30));
}

#[test]
fn criterion_2_esscher_density_ratios() {
    criterion("2 esscher", Suite::Esscher, &["density-ratio-up-down", "density-ratio-up-star"], Status::Pass, Duration::from_secs(1));
}

#[test]
fn criterion_3_extrema_laws() {
    criterion(
        "3 extrema",
        Suite::Extrema,
        &["min-cdf-up-vs-exit-mass", "max-cdf-down-vs-exit-mass", "max-star-density-mass"],
        Status::Pass,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_4_scale_functions_and_triple_laws() {
    criterion(
        "4 scale",
        Suite::Scale,
        &["scale-fn-laplace", "psi-down-shift", "triple-law-normalization"],
        Status::Pass,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_5_two_point_hitting() {
    criterion(
        "5 hitting",
        Suite::Hitting,
        &["matrix-vs-closed-ratio", "resolvent-constant-invariance", "lamperti-hitting-in-unit-interval"],
        Status::Pass,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_6_exponential_functional_moments_and_densities() {
    criterion(
        "6 expfun (moments, densities)",
        Suite::Expfun,
        &["negative-moments-vs-laplace", "density-i-mass", "density-i-negative-moments", "entrance-density-moments"],
        Status::Pass,
        Duration::from_secs(120),
    );
}

/// Right-tail slope of the density of I(ξ↑) against -α ± 0.05. The law is a
/// stable subordinator of index 1/α, whose density decays like x^{-1-1/α}
/// (-1.667 at α = 1.5), so this criterion is not attainable.
#[test]
fn criterion_6_right_tail_slope_is_minus_alpha() {
    let c = up_right_tail_slope();
    report("6 expfun (right-tail slope)", c.status == Status::Pass, &describe(&[&c]));
    assert_eq!(c.status, Status::Pass, "{}", c.detail);
}

#[test]
fn criterion_7_monte_carlo() {
    criterion(
        "7 montecarlo",
        Suite::Montecarlo,
        &["star-up-share", "up-overshoot-ks", "esscher-reweighting"],
        Status::Pass,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_8_findings_are_reproduced() {
    let opts = VerifyOptions::default();
    let ext = run_suite(Suite::Extrema, &opts);
    let exp = run_suite(Suite::Expfun, &opts);
    let checks = [
        ext.check("min-star-law-as-quoted").expect("min-law finding"),
        exp.check("star-left-tail-slope").expect("left-tail finding"),
        exp.check("star-density-as-quoted").expect("density finding"),
    ];
    let ok = checks.iter().all(|c| c.status == Status::Finding);
    report("8 findings", ok, &describe(&checks));
    for c in checks {
        assert_eq!(c.status, Status::Finding, "{}: {}", c.name, c.detail);
    }
}
