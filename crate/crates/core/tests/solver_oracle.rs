//! Per-solver summary of the oracle comparison on a different seed range
//! than the acceptance run.

mod common;

use common::solver_cases::{cases, check_case};

#[test]
fn dedicated_solvers_match_brute_force() {
    let mut all = Vec::new();
    for (i, case) in cases().iter().enumerate() {
        let (bad, yes) = check_case(case, 100, 1000 + i as u64);
        println!("{:<24} {:>3} yes / 100  {}", case.name, yes, if bad.is_empty() { "ok" } else { "MISMATCH" });
        all.extend(bad);
    }
    for b in all.iter().take(5) {
        println!("{b}");
    }
    assert!(all.is_empty(), "{} mismatches", all.len());
}
