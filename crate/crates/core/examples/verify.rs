// Run every instance-check suite with its default bounds.

use quadcollatz::theorems::{run_suite, Suite, SuiteBounds};

fn main() {
    let results = run_suite(Suite::All, SuiteBounds::default());
    let passed = results.iter().filter(|r| r.passed()).count();
    for r in results.iter().filter(|r| !r.passed()) {
        println!("FAIL {} {}: {:?}", r.suite, r.case, r.result);
    }
    println!("{passed}/{} passed", results.len());
    assert_eq!(passed, results.len());
}
