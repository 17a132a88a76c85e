//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use aiprod_core::checks::{run_criterion, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let mut failed = 0;
    for id in CRITERIA {
        let t = Instant::now();
        match run_criterion(id, DEFAULT_SEED).expect("registered id") {
            Ok(c) if c.id != id => {
                failed += 1;
                println!("FAIL {id}: runner reported id {}", c.id);
            }
            Ok(c) => {
                if !c.passed() {
                    failed += 1;
                }
                println!("{} [{:.1?}]", c.summary_line(), t.elapsed());
            }
            Err(e) => {
                failed += 1;
                println!("FAIL {id}: error: {e}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
