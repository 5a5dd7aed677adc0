// BinCert against direct estimation on the same query.

use quantcert::oracle::{bernoulli, CountingOracle};
use quantcert::strategy::estimation_sample_count;
use quantcert::{bincert, estimate_baseline, Execution, SeedSpec, ThresholdQuery};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let query = ThresholdQuery::new(0.01, 0.01, 0.01)?;
    println!(
        "baseline needs {} samples for eta = delta = 0.01",
        estimation_sample_count(query.eta(), query.delta())
    );
    for p in [0.0, 0.005, 0.05, 0.5] {
        let oracle = CountingOracle::new(bernoulli(p)?);
        let r = bincert(&query, &oracle, SeedSpec::new(42), &Execution::default())?;
        println!(
            "p = {p:<5}: {:?} after {} samples in {} calls",
            r.verdict,
            oracle.trials(),
            r.calls.len()
        );
    }

    // The baseline spends its whole budget whatever p is.
    let r = estimate_baseline(
        &ThresholdQuery::new(0.2, 0.1, 0.1)?,
        &bernoulli(0.6)?,
        SeedSpec::new(1),
        &Execution::default(),
    )?;
    println!("estimation at (0.2, 0.1, 0.1): {:?}, {} samples", r.verdict, r.total_samples);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
