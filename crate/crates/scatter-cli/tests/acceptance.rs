//! Acceptance suite: one PASS/FAIL line per criterion on stderr.
//!
//! Criterion 10 asks for max/min < 3 over a time sweep that includes t = 0, where
//! the remainder vanishes identically; that sub-check cannot hold and is reported
//! as a failure. This test requires every other check of every criterion to pass
//! and requires that sub-check to be the only failure of criterion 10.

use std::io::Write;

use scatter_cli::acceptance::{run_all, CRITERIA};

const UNATTAINABLE: (u8, &str) = (10, "max/min over the time sweep");

#[test]
fn acceptance_criteria_report() {
    let reports = run_all(|r| {
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "{}", r.line());
        for note in &r.notes {
            let _ = writeln!(err, "             {note}");
        }
    });
    assert_eq!(reports.len(), CRITERIA.len());
    let passed = reports.iter().filter(|r| r.passed()).count();
    let _ = writeln!(std::io::stderr(), "acceptance: {passed}/{} criteria pass", reports.len());

    for r in &reports {
        assert!(r.error.is_none(), "{}", r.line());
        let failing: Vec<&str> = r.failing().iter().map(|c| c.label.as_str()).collect();
        if r.id == UNATTAINABLE.0 {
            assert_eq!(failing, vec![UNATTAINABLE.1], "{}", r.line());
        } else {
            assert!(failing.is_empty(), "{}", r.line());
        }
    }
}
