// Soundness rates and sample counts against Bernoulli oracles.

use quantcert::sim::linear_grid;
use quantcert::{complexity_sweep, soundness_trial, Execution, SeedSpec, StrategyKind, ThresholdQuery};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let exec = Execution::default().with_threads(4)?;
    let query = ThresholdQuery::new(0.1, 0.05, 0.1)?;
    for p in [0.05, 0.1, 0.12, 0.2] {
        let s = soundness_trial(StrategyKind::BinCert, &query, p, 100, SeedSpec::new(1), &exec)?;
        println!(
            "p = {p}: yes {} no {} failure {:?} mean samples {:.0}",
            s.yes_count, s.no_count, s.failure_rate, s.mean_samples
        );
    }

    let query = ThresholdQuery::new(0.01, 0.01, 0.01)?;
    let table = complexity_sweep(
        &[StrategyKind::BinCert, StrategyKind::FixedCert],
        &query,
        &linear_grid(0.0, 1.0, 0.25)?,
        20,
        SeedSpec::new(2),
        &exec,
    )?;
    print!("{}", table.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
