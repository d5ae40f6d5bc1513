//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure. Tolerances are the constants in `uwrelay_core::validation`.

use std::process::ExitCode;

use uwrelay_core::validation::{run_check, ValidationOptions, CRITERIA};

fn main() -> ExitCode {
    let opts = ValidationOptions::default();
    let mut failed = 0;
    println!("acceptance suite: seed {}, workers {}", opts.seed, opts.workers);
    for (id, _) in CRITERIA {
        let report = run_check(id, &opts);
        println!("{}", report.line());
        for f in &report.failures {
            println!("    failure: {f}");
        }
        if !report.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
