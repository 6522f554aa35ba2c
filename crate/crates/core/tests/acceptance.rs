//! Criteria 1-10; one PASS/FAIL line each. Runs without the libtest harness so
//! the lines are printed even when every check passes.

use std::process::ExitCode;

use hermcodes::acceptance::{self, Status};
use hermcodes::ff::ConwayTable;

fn main() -> ExitCode {
    let table = ConwayTable::builtin().expect("bundled Conway table");
    let outcomes = acceptance::run_all(&table, 20240611);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| o.status != Status::Pass).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria not passing: {failed:?}");
        ExitCode::FAILURE
    }
}
