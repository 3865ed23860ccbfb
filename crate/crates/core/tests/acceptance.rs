//! Acceptance suite: every desk-scale guarantee the crate makes, checked
//! exactly, one criterion per test. Each test prints one PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::{Duration, Instant};

use stringlink::enumerate::{for_each_diagram, for_each_diagram_up_to};
use stringlink::{find_adjacency_collisions, run_suite, ClosedCurveState, Gf2Matrix};

fn report(number: usize, name: &str, ok: bool, detail: &str, elapsed: Duration) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {number} {status} {name}: {detail} ({elapsed:.2?})");
    assert!(ok, "criterion {number} {name}: {detail}");
}

#[test]
fn criterion_01_conway_equals_det_times_rank_on_two_strands() {
    let t0 = Instant::now();
    let r = run_suite("conway2", 2, 4).unwrap();
    let elapsed = t0.elapsed();
    let ok = r.cases == 1068 && r.passed() && elapsed < Duration::from_secs(10);
    report(
        1,
        "conway2",
        ok,
        &format!("{} cases, {} failures", r.cases, r.failure_count),
        elapsed,
    );
}

#[test]
fn criterion_02_knot_conway_equals_det() {
    let t0 = Instant::now();
    let r = run_suite("knot-conway", 1, 5).unwrap();
    let elapsed = t0.elapsed();
    let ok = r.cases == 1069 && r.passed() && elapsed < Duration::from_secs(10);
    report(
        2,
        "knot-conway",
        ok,
        &format!("{} cases, {} failures", r.cases, r.failure_count),
        elapsed,
    );
}

#[test]
fn criterion_03_homfly_rank_formula_on_two_strands() {
    let t0 = Instant::now();
    let r = run_suite("homfly2", 2, 4).unwrap();
    let elapsed = t0.elapsed();
    let ok = r.cases == 1068 && r.passed() && elapsed < Duration::from_secs(10);
    report(
        3,
        "homfly2",
        ok,
        &format!("{} cases, {} failures", r.cases, r.failure_count),
        elapsed,
    );
}

#[test]
fn criterion_04_vanishing_conditions() {
    let t0 = Instant::now();
    let r = run_suite("parity", 3, 4).unwrap();
    let elapsed = t0.elapsed();
    let ok = r.passed();
    report(
        4,
        "parity",
        ok,
        &format!("{} cases, {} failures", r.cases, r.failure_count),
        elapsed,
    );
}

#[test]
fn criterion_05_congruence_witness() {
    let t0 = Instant::now();
    let r = run_suite("congruence", 3, 4).unwrap();
    let elapsed = t0.elapsed();
    let ok = r.passed() && elapsed < Duration::from_secs(60);
    report(
        5,
        "congruence",
        ok,
        &format!("{} cases, {} failures", r.cases, r.failure_count),
        elapsed,
    );
}

#[test]
fn criterion_06_slide_coherence() {
    let t0 = Instant::now();
    let r = run_suite("slides", 3, 4).unwrap();
    let elapsed = t0.elapsed();
    let ok = r.passed();
    report(
        6,
        "slides",
        ok,
        &format!("{} cases, {} failures", r.cases, r.failure_count),
        elapsed,
    );
}

#[test]
fn criterion_07_four_term_coherence() {
    let t0 = Instant::now();
    let r = run_suite("fourterm", 3, 4).unwrap();
    let elapsed = t0.elapsed();
    let ok = r.passed();
    report(
        7,
        "fourterm",
        ok,
        &format!("{} cases, {} failures", r.cases, r.failure_count),
        elapsed,
    );
}

#[test]
fn criterion_08_bialgebra_homomorphism() {
    let t0 = Instant::now();
    let hom = run_suite("hom", 3, 4).unwrap();
    let bialgebra = run_suite("bialgebra", 2, 3).unwrap();
    let elapsed = t0.elapsed();
    let ok = hom.passed() && bialgebra.passed();
    report(
        8,
        "hom+bialgebra",
        ok,
        &format!(
            "{} hom cases + {} bialgebra cases, {} failures",
            hom.cases,
            bialgebra.cases,
            hom.failure_count + bialgebra.failure_count
        ),
        elapsed,
    );
}

#[test]
fn criterion_09_normal_form() {
    let t0 = Instant::now();
    let r = run_suite("normalform", 3, 4).unwrap();
    let elapsed = t0.elapsed();
    let ok = r.passed() && elapsed < Duration::from_secs(300);
    report(
        9,
        "normalform",
        ok,
        &format!("{} connected cases, {} failures", r.cases, r.failure_count),
        elapsed,
    );
}

#[test]
fn criterion_10_counterexample_reproduction() {
    let t0 = Instant::now();
    let target = Gf2Matrix::parse("10000\n11000\n11100\n01110\n01101").unwrap();
    let scan = find_adjacency_collisions(4, 5, Some(&target));
    let elapsed = t0.elapsed();
    let class = scan.target.expect("target class tracked");
    let ok =
        class.count_one > 0 && class.count_zero > 0 && elapsed < Duration::from_secs(300);
    report(
        10,
        "collision",
        ok,
        &format!(
            "{} diagrams scanned, target class holds conway=1 x{} and conway=0 x{}",
            scan.scanned, class.count_one, class.count_zero
        ),
        elapsed,
    );
}

#[test]
fn criterion_11_surgery_changes_components_by_one() {
    let t0 = Instant::now();
    let mut cases = 0usize;
    let mut failures = 0usize;
    for k in 1..=3usize {
        for_each_diagram_up_to(k, 4, false, |d| {
            cases += 1;
            let n = d.chord_count();
            for mask in 0u32..(1 << n) {
                let mut state = ClosedCurveState::new(d);
                for c in 0..n {
                    if mask >> c & 1 == 1 {
                        state.surger(c).unwrap();
                    }
                }
                let before = state.components();
                for c in 0..n {
                    if mask >> c & 1 == 0 {
                        let mut next = state.clone();
                        next.surger(c).unwrap();
                        if before.abs_diff(next.components()) != 1 {
                            failures += 1;
                        }
                    }
                }
            }
        });
        // The empty diagram of each strand count has no surgeries but is
        // still part of the sweep domain.
        for_each_diagram(k, 0, false, |_| cases += 1);
    }
    let elapsed = t0.elapsed();
    report(
        11,
        "surgery-parity",
        failures == 0,
        &format!("{cases} diagrams, {failures} failures"),
        elapsed,
    );
}
