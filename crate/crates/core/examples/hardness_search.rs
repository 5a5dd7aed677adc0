// Largest radius that still certifies, by grid sweep and by bisection.

use std::sync::Arc;

use quantcert::nn::{Layer, Model};
use quantcert::{
    adversarial_hardness, Execution, HardnessSearch, Norm, RobustnessQuery, SeedSpec, StrategyKind,
    ThresholdQuery,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // class 1 iff x0 > 0.7, so the boundary is 0.2 away from (0.5, 0.5)
    let model = Arc::new(Model::new(2, vec![Layer::dense(2, 2, vec![0.0, 0.0, 1.0, 0.0], vec![0.0, -0.7])])?);
    let template = RobustnessQuery::new(vec![0.5, 0.5], 0.1, Norm::Linf, ThresholdQuery::new(1e-3, 1e-3, 0.01)?)?;

    let searches = [
        HardnessSearch::Sweep(vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3]),
        HardnessSearch::Bisect { lo: 0.05, hi: 0.4, resolution: 0.01 },
    ];
    for search in &searches {
        let r = adversarial_hardness(model.clone(), &template, search, StrategyKind::BinCert, SeedSpec::new(1), &Execution::default())?;
        println!("{:?}: hardness {:.4}", r.method, r.hardness);
        for p in &r.probe_log {
            println!("    eps {:.4}: {:?} ({} samples)", p.epsilon, p.verdict, p.total_samples);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
