//! Runs every reference check and prints one line per criterion.

use std::process::ExitCode;

use witsets::reproduce::criteria;

fn main() -> ExitCode {
    let mut failed = 0;
    for c in criteria() {
        let outcome = c.run();
        println!("{}", outcome.line());
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of 10 passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
