//! Acceptance criteria 1-11, one line each.

use linkgame::sweep::{run_criterion, CRITERIA};

fn main() {
    let mut failed = Vec::new();
    for id in CRITERIA {
        let report = run_criterion(id);
        println!("{}", report.line());
        for m in &report.mismatches {
            println!("      mismatch: {m}");
        }
        if !report.passed() {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
