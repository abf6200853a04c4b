//! Acceptance suite: runs every criterion at full settings and prints one
//! pass/fail line per criterion.

use jacobi_spectral::selfcheck::{run_all, SelfCheckConfig};

#[test]
fn acceptance_criteria() {
    let cfg = SelfCheckConfig::default();
    let results = run_all(&cfg);
    let mut all_pass = true;
    for r in &results {
        println!("{}", r.line());
        all_pass &= r.pass;
    }
    assert!(
        all_pass,
        "acceptance criteria failed:\n{}",
        results
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.line())
            .collect::<Vec<_>>()
            .join("\n")
    );
}
