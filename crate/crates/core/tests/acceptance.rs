//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p conecheck --test acceptance -- --nocapture` to
//! see the lines. Criteria 2 and 5 contain claims that do not hold
//! numerically; they are reported FAIL and this test pins exactly that set,
//! so any other failure, or either of them starting to pass, is an error.

use conecheck::suite::{run_suite, SuiteOptions, CRITERIA};

const KNOWN_FAILING: [u8; 2] = [2, 5];

#[test]
fn acceptance_criteria() {
    let outcomes = run_suite(&SuiteOptions { seed: 1, timing: true });
    assert_eq!(outcomes.len(), CRITERIA as usize);
    let mut failing = Vec::new();
    for c in &outcomes {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2} ({}): {} [{:.2} s]",
            c.id,
            c.title,
            c.detail,
            c.seconds.unwrap_or(0.0)
        );
        if !c.pass {
            failing.push(c.id);
        }
    }
    assert_eq!(failing, KNOWN_FAILING, "unexpected set of failing criteria");
}
