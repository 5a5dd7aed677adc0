//! Black-box 0/1 trial sources.
//!
//! An [`Oracle`] answers "how many of these trials satisfied the property?"
//! for a contiguous range of trial indices. Trials are independent; the
//! randomness of trial `i` in call `c` comes from
//! [`SeedSpec::trial_word`]/[`SeedSpec::trial_rng`] so that results do not
//! depend on how a call is split into batches.

mod bernoulli;
mod property;
mod subprocess;

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};

pub use bernoulli::{bernoulli, BernoulliOracle};
pub use property::{compose, Property, PropertyOracle};
pub use subprocess::{subprocess_oracle, SubprocessOracle};

use crate::domain::SampleTally;
use crate::error::OracleError;
use crate::seed::SeedSpec;

pub trait Oracle: Send + Sync {
    /// Runs trials `trials.start..trials.end` of Tester call `call_index`.
    ///
    /// On success the returned tally has exactly `trials.end - trials.start`
    /// trials.
    fn draw(
        &self,
        call_index: u64,
        trials: Range<u64>,
        seed: SeedSpec,
    ) -> Result<SampleTally, OracleError>;

    /// Whether `draw` may be called from several threads at once.
    fn supports_concurrent_draws(&self) -> bool {
        true
    }

    fn describe(&self) -> String;
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn draw(
        &self,
        call_index: u64,
        trials: Range<u64>,
        seed: SeedSpec,
    ) -> Result<SampleTally, OracleError> {
        (**self).draw(call_index, trials, seed)
    }

    fn supports_concurrent_draws(&self) -> bool {
        (**self).supports_concurrent_draws()
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn draw(
        &self,
        call_index: u64,
        trials: Range<u64>,
        seed: SeedSpec,
    ) -> Result<SampleTally, OracleError> {
        (**self).draw(call_index, trials, seed)
    }

    fn supports_concurrent_draws(&self) -> bool {
        (**self).supports_concurrent_draws()
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Wraps an oracle and counts every trial and draw call that reaches it.
pub struct CountingOracle<O> {
    inner: O,
    trials: AtomicU64,
    draws: AtomicU64,
}

impl<O: Oracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            trials: AtomicU64::new(0),
            draws: AtomicU64::new(0),
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials.load(Ordering::SeqCst)
    }

    pub fn draws(&self) -> u64 {
        self.draws.load(Ordering::SeqCst)
    }

    pub fn reset(&self) {
        self.trials.store(0, Ordering::SeqCst);
        self.draws.store(0, Ordering::SeqCst);
    }
}

impl<O: Oracle> Oracle for CountingOracle<O> {
    fn draw(
        &self,
        call_index: u64,
        trials: Range<u64>,
        seed: SeedSpec,
    ) -> Result<SampleTally, OracleError> {
        self.draws.fetch_add(1, Ordering::SeqCst);
        let result = self.inner.draw(call_index, trials, seed);
        let counted = match &result {
            Ok(t) => t.trials(),
            Err(e) => e.partial.trials(),
        };
        self.trials.fetch_add(counted, Ordering::SeqCst);
        result
    }

    fn supports_concurrent_draws(&self) -> bool {
        self.inner.supports_concurrent_draws()
    }

    fn describe(&self) -> String {
        format!("counting({})", self.inner.describe())
    }
}
