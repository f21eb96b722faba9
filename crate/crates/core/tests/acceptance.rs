use std::process::ExitCode;

use fq_smarandache::verify::{run_all, Context};

fn main() -> ExitCode {
    let ctx = Context::default();
    let outcomes = run_all(&ctx, |o| println!("{}", o.line()));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {} failed", outcomes.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
