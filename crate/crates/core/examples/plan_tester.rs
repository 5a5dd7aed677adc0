// Sample size and decision threshold of one Tester call, then the call
// itself against a synthetic oracle.

use quantcert::oracle::bernoulli;
use quantcert::tester::{plan_tester, run_tester, Execution};
use quantcert::SeedSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let plan = plan_tester(0.1, 0.2, 0.01)?;
    println!(
        "interval (0.1, 0.2) at delta 0.01: N = {}, eta1 = {:.6}, t = {:.6}",
        plan.n_samples, plan.eta1, plan.t
    );

    for p in [0.05, 0.15, 0.25] {
        let r = run_tester(&plan, &bernoulli(p)?, 0, SeedSpec::new(1), &Execution::default())?;
        println!("  p = {p:.2}: p_hat = {:.4} -> {:?}", r.tally.p_hat(), r.outcome);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
