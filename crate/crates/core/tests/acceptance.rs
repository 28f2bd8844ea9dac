use std::io::Write;

use polarscheme::regression::{run_suite, Status, SuiteOptions};

/// Checks that fail for mathematical reasons at `(5,3,-1)`: the eigenspace
/// carrying `τ = -(q^{(n-1)/2}+1)` has multiplicity zero there, and the
/// weighted matrix `2·A2 + 0·A4` vanishes because `R2` is empty at `q = 3`.
const KNOWN_FAILURES: [(u8, &str); 2] = [(10, "clique (5,3,-1)"), (10, "coclique (5,3,-1)")];

#[test]
fn acceptance() {
    let report = run_suite(SuiteOptions::default());
    // straight to the handle, so the lines survive output capture
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err);
    for c in &report.criteria {
        let _ = writeln!(err, "criterion {:>2} {:<7} {}", c.number, c.status.to_string(), c.title);
        for check in c.checks.iter().filter(|x| x.status != Status::Pass) {
            let _ = writeln!(err, "    {} {}: {}", check.status, check.name, check.detail);
        }
    }
    let _ = writeln!(err, "total {:.1?}", report.elapsed);
    drop(err);

    let unexpected: Vec<String> = report
        .criteria
        .iter()
        .flat_map(|c| c.checks.iter().map(move |x| (c.number, x)))
        .filter(|(k, x)| x.status != Status::Pass && !KNOWN_FAILURES.contains(&(*k, x.name.as_str())))
        .map(|(k, x)| format!("{k}: {} {}: {}", x.status, x.name, x.detail))
        .collect();
    assert!(unexpected.is_empty(), "{unexpected:#?}");
    for (k, name) in KNOWN_FAILURES {
        let found = report.criteria[k as usize - 1]
            .checks
            .iter()
            .find(|x| x.name == name)
            .map(|x| x.status);
        assert_eq!(
            found,
            Some(Status::Fail),
            "{name} no longer fails; revisit the analysis"
        );
    }
}
