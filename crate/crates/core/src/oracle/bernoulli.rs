use std::ops::Range;

use crate::domain::SampleTally;
use crate::error::{Error, OracleError, Result};
use crate::oracle::Oracle;
use crate::seed::SeedSpec;

/// Synthetic oracle whose trials are i.i.d. coin flips with a known rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliOracle {
    true_p: f64,
}

pub fn bernoulli(p: f64) -> Result<BernoulliOracle> {
    BernoulliOracle::new(p)
}

impl BernoulliOracle {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                field: "p",
                value: p,
                expected: "[0, 1]",
            });
        }
        Ok(Self { true_p: p })
    }

    pub fn true_p(&self) -> f64 {
        self.true_p
    }
}

impl Oracle for BernoulliOracle {
    fn draw(
        &self,
        call_index: u64,
        trials: Range<u64>,
        seed: SeedSpec,
    ) -> Result<SampleTally, OracleError> {
        let mut tally = SampleTally::empty();
        for i in trials {
            tally.record(seed.trial_uniform(call_index, i) < self.true_p);
        }
        Ok(tally)
    }

    fn describe(&self) -> String {
        format!("bernoulli(p={})", self.true_p)
    }
}
