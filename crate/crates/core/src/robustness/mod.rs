//! Adversarial density and hardness of classifiers around an input.
//!
//! The adversarial density of `x0` under a perturbation ball is the fraction
//! of the ball the model labels differently from `x0`. Certifying that it is
//! at most `theta` uses any strategy from [`crate::strategy`] over an oracle
//! composed of a ball sampler, the model, and the misclassification
//! property. Adversarial hardness is the largest radius at which that
//! certificate still answers Yes.

mod hardness;
mod sampler;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use hardness::{adversarial_hardness, HardnessResult, HardnessSearch, Probe, SearchMethod};
pub use sampler::{
    ball_sampler, l2_sampler, linf_sampler, L2BallSampler, LinfBallSampler, Norm, Sampler,
};

use crate::domain::ThresholdQuery;
use crate::error::{Error, NnError, Result};
use crate::nn::{predict, Model};
use crate::oracle::{compose, Property};
use crate::seed::SeedSpec;
use crate::strategy::{CertificationReport, StrategyKind};
use crate::tester::Execution;

/// Holds when the model's label at `x` differs from its label at the
/// reference input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Misclassification {
    reference_label: usize,
}

impl Misclassification {
    pub fn reference_label(&self) -> usize {
        self.reference_label
    }
}

pub fn misclassification_property(model: &Model, x0: &[f64]) -> Result<Misclassification> {
    let reference_label = predict(model, x0).map_err(|e| match e {
        NnError::DimensionMismatch { expected, found } => {
            Error::DimensionMismatch { expected, found }
        }
        other => Error::Model(other),
    })?;
    Ok(Misclassification { reference_label })
}

impl Property for Misclassification {
    fn holds(&self, x: &[f64], model: &Model) -> Result<bool, NnError> {
        Ok(predict(model, x)? != self.reference_label)
    }

    fn describe(&self) -> String {
        format!("label != {}", self.reference_label)
    }
}

/// Ball around `center` plus the threshold query to certify.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessQuery {
    pub center: Vec<f64>,
    pub epsilon: f64,
    pub norm: Norm,
    pub query: ThresholdQuery,
}

impl RobustnessQuery {
    pub fn new(center: Vec<f64>, epsilon: f64, norm: Norm, query: ThresholdQuery) -> Result<Self> {
        // sampler construction performs the range checks
        ball_sampler(norm, center.clone(), epsilon)?;
        Ok(Self {
            center,
            epsilon,
            norm,
            query,
        })
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.center.clone(), epsilon, self.norm, self.query)
    }
}

/// Certifies that at most `theta` of the ball is misclassified.
pub fn certify_density(
    rq: &RobustnessQuery,
    model: Arc<Model>,
    strategy: StrategyKind,
    seed: SeedSpec,
    exec: &Execution,
) -> Result<CertificationReport> {
    let sampler: Arc<dyn Sampler> = Arc::from(ball_sampler(rq.norm, rq.center.clone(), rq.epsilon)?);
    let property = misclassification_property(&model, &rq.center)?;
    let note = sampler.note();
    let description = sampler.description();
    let oracle = compose(sampler, model, Arc::new(property))?;
    let mut report = strategy.run(&rq.query, &oracle, seed, exec)?;
    report.notes.push(format!(
        "input distribution: {description}; reference label {}",
        property.reference_label()
    ));
    if let Some(note) = note {
        report.notes.push(note);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Verdict;
    use crate::nn::Layer;

    /// Label 1 iff x[0] > boundary.
    fn threshold_model(dim: usize, boundary: f64) -> Arc<Model> {
        let mut weights = vec![0.0; 2 * dim];
        weights[dim] = 1.0;
        Arc::new(Model::new(dim, vec![Layer::dense(2, dim, weights, vec![0.0, -boundary])]).unwrap())
    }

    #[test]
    fn reference_point_is_not_misclassified() {
        let model = threshold_model(3, 0.5);
        let x0 = vec![0.2, 0.9, 0.1];
        let p = misclassification_property(&model, &x0).unwrap();
        assert!(!p.holds(&x0, &model).unwrap());
        assert!(p.holds(&[0.7, 0.9, 0.1], &model).unwrap());
        assert!(matches!(
            misclassification_property(&model, &[0.1, 0.2]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn robust_model_certifies_yes() {
        let model = threshold_model(2, 0.9);
        let q = ThresholdQuery::new(1e-3, 1e-3, 0.01).unwrap();
        let rq = RobustnessQuery::new(vec![0.5, 0.5], 0.1, Norm::Linf, q).unwrap();
        let r = certify_density(&rq, model, StrategyKind::BinCert, SeedSpec::new(1), &Execution::default())
            .unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        r.check_invariants().unwrap();
    }

    #[test]
    fn boundary_through_center_certifies_no() {
        // x0 sits just below the boundary: about half the ball is misclassified
        let model = threshold_model(2, 0.5);
        let q = ThresholdQuery::new(1e-3, 1e-3, 0.01).unwrap();
        let rq = RobustnessQuery::new(vec![0.5, 0.5], 0.1, Norm::L2, q).unwrap();
        let r = certify_density(&rq, model, StrategyKind::BinCert, SeedSpec::new(2), &Execution::default())
            .unwrap();
        assert_eq!(r.verdict, Verdict::No);
        assert!(r.notes.iter().any(|n| n.contains("clamped")));
    }
}
