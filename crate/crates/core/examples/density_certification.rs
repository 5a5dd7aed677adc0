// Adversarial density of a small ReLU network around one input.

use std::sync::Arc;

use quantcert::nn::{predict, Layer, Model};
use quantcert::{certify_density, Execution, Norm, RobustnessQuery, SeedSpec, StrategyKind, ThresholdQuery};

/// 2 -> 2 -> 2 network; class 1 when x0 + x1 > 1.1.
fn network() -> Result<Model, quantcert::NnError> {
    Model::new(
        2,
        vec![
            Layer::dense(2, 2, vec![1.0, 1.0, -1.0, -1.0], vec![-1.1, 1.1]),
            Layer::Relu,
            Layer::dense(2, 2, vec![0.0, 1.0, 1.0, 0.0], vec![0.0, 0.0]),
        ],
    )
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = Arc::new(network()?);
    let x0 = vec![0.5, 0.5];
    println!("label at x0: {}", predict(&model, &x0)?);

    let query = ThresholdQuery::new(0.01, 0.01, 0.01)?;
    for (norm, eps) in [(Norm::Linf, 0.03), (Norm::Linf, 0.05), (Norm::L2, 0.07), (Norm::Linf, 0.08)] {
        let rq = RobustnessQuery::new(x0.clone(), eps, norm, query)?;
        let r = certify_density(&rq, model.clone(), StrategyKind::BinCert, SeedSpec::new(7), &Execution::default())?;
        println!("{norm} eps {eps}: {:?} with {} samples", r.verdict, r.total_samples);
        for note in &r.notes {
            println!("    note: {note}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
