//! Acceptance gate: runs every criterion of the self-test suite and prints
//! one line per criterion.

use floermod_core::selftest;

#[test]
fn acceptance() {
    let mut results = Vec::new();
    for (i, (name, f)) in selftest::criteria().into_iter().enumerate() {
        let r = selftest::run_criterion(i + 1, name, f);
        eprintln!(
            "criterion {:2} [{}] {} — {} ({:.2} s)",
            r.index,
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail,
            r.seconds
        );
        results.push(r);
    }
    assert!(selftest::all_passed(&results), "acceptance criteria failed");
}
