// Closed-form and exact worst-case sample budgets of BinCert.

use quantcert::strategy::estimation_sample_count;
use quantcert::{worst_case_budget, ThresholdQuery};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (theta, eta, delta) in [(0.1, 0.001, 0.01), (0.01, 0.01, 0.01), (0.5, 0.05, 0.1)] {
        let q = ThresholdQuery::new(theta, eta, delta)?;
        let b = worst_case_budget(&q)?;
        println!(
            "({theta}, {eta}, {delta}): k1 {:.0} k2 {:.0} k3 {:.0}, schedule {} over {} calls, baseline {}",
            b.k1,
            b.k2,
            b.k3,
            b.exact_schedule_total,
            b.schedule_calls,
            estimation_sample_count(eta, delta)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
