// FixedCert's interval layout and a run over it.

use quantcert::oracle::bernoulli;
use quantcert::strategy::{fixedcert_schedule, FixedCertParams};
use quantcert::{fixedcert, Execution, SeedSpec, ThresholdQuery};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let query = ThresholdQuery::new(0.3, 0.01, 0.01)?;
    let params = FixedCertParams::new(&query);
    println!(
        "n_l = {}, n_r = {}, alpha_l = {:.3}, alpha_r = {:.3}, delta spent at most {:.4}",
        params.n_l,
        params.n_r,
        params.alpha_l,
        params.alpha_r,
        params.delta_total()
    );
    for s in fixedcert_schedule(&query) {
        println!(
            "  {:?} ({:.3}, {:.3}) delta {:.2e} N {}",
            s.side,
            s.theta1,
            s.theta2,
            s.delta_call,
            s.plan()?.n_samples
        );
    }

    let report = fixedcert(&query, &bernoulli(0.7)?, SeedSpec::new(3), &Execution::default())?;
    println!("p = 0.7: {:?} after {} samples", report.verdict, report.total_samples);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
