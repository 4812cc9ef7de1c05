//! One pass/fail line per acceptance criterion; exits nonzero on any failure.

use std::process::ExitCode;

fn main() -> ExitCode {
    let reports = av321::acceptance::run_all(|r| println!("{r}"));
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", reports.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
