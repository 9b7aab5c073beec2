use std::time::Instant;

use reshape_testkit::suites;

fn timed(name: &str, result: suites::SuiteResult, start: Instant) {
    let elapsed = start.elapsed();
    match result {
        Ok(n) => eprintln!("{name}: {n} cases in {elapsed:?}"),
        Err(e) => panic!("{name}: {e}"),
    }
    assert!(elapsed.as_secs() < 30, "{name} took {elapsed:?}");
}

#[test]
fn plans_are_sound() {
    let start = Instant::now();
    timed("soundness", suites::soundness(200, 11), start);
}

#[test]
fn alignment_is_complete() {
    let start = Instant::now();
    timed("completeness", suites::completeness(300, 4, 12), start);
}

#[test]
fn explanations_reproduce_plans() {
    let start = Instant::now();
    timed("explanation", suites::explanation_fidelity(200, 13), start);
}

#[test]
fn profiler_partitions_rows() {
    let start = Instant::now();
    timed("profiler", suites::profiler_invariants(1000, 14), start);
}
