//! Prints one PASS/FAIL line per criterion. `ACCEPTANCE_SCALE=small` runs reduced batches.

use std::process::ExitCode;

use crownful::acceptance::{run_criterion, Scale};

fn main() -> ExitCode {
    let scale = match std::env::var("ACCEPTANCE_SCALE").as_deref() {
        Ok("small") => Scale::Small,
        _ => Scale::Full,
    };
    let seed = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(2024);
    let only: Option<u8> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for id in 1..=12u8 {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let r = run_criterion(id, scale, seed).expect("known criterion");
        println!("{}", r.line());
        failed += usize::from(!r.passed);
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
