use std::ops::Range;
use std::sync::Arc;

use crate::domain::SampleTally;
use crate::error::{Error, NnError, OracleError, OracleErrorKind, Result};
use crate::nn::Model;
use crate::oracle::Oracle;
use crate::robustness::Sampler;
use crate::seed::SeedSpec;

/// A 0/1 predicate over an input and the model under test.
pub trait Property: Send + Sync {
    fn holds(&self, x: &[f64], model: &Model) -> Result<bool, NnError>;

    fn describe(&self) -> String {
        "custom property".into()
    }
}

impl<F> Property for F
where
    F: Fn(&[f64], &Model) -> Result<bool, NnError> + Send + Sync,
{
    fn holds(&self, x: &[f64], model: &Model) -> Result<bool, NnError> {
        self(x, model)
    }
}

/// Oracle built from a sampler, an in-process model, and a property.
///
/// Every trial draws one fresh input, evaluates the model once and the
/// property once. Nothing is cached between trials.
#[derive(Clone)]
pub struct PropertyOracle {
    sampler: Arc<dyn Sampler>,
    model: Arc<Model>,
    property: Arc<dyn Property>,
}

pub fn compose(
    sampler: Arc<dyn Sampler>,
    model: Arc<Model>,
    property: Arc<dyn Property>,
) -> Result<PropertyOracle> {
    if sampler.dimension() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            found: sampler.dimension(),
        });
    }
    Ok(PropertyOracle {
        sampler,
        model,
        property,
    })
}

impl PropertyOracle {
    pub fn sampler(&self) -> &dyn Sampler {
        self.sampler.as_ref()
    }
}

impl Oracle for PropertyOracle {
    fn draw(
        &self,
        call_index: u64,
        trials: Range<u64>,
        seed: SeedSpec,
    ) -> Result<SampleTally, OracleError> {
        let mut tally = SampleTally::empty();
        for i in trials {
            let mut rng = seed.trial_rng(call_index, i);
            let x = self.sampler.sample(&mut rng);
            debug_assert!(self.sampler.contains(&x), "sample outside declared support");
            match self.property.holds(&x, &self.model) {
                Ok(hit) => tally.record(hit),
                Err(e) => {
                    return Err(OracleError::new(OracleErrorKind::Model(e)).with_partial(tally))
                }
            }
        }
        Ok(tally)
    }

    fn describe(&self) -> String {
        format!(
            "{} over {}",
            self.property.describe(),
            self.sampler.description()
        )
    }
}
