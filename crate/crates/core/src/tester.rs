//! The Tester primitive: one sample set deciding between `p <= theta1` and
//! `p > theta2`.
//!
//! The error budget `theta2 - theta1` is split into `eta1 + eta2` so that
//! the two Chernoff sample requirements `3 theta1 / eta1^2 ln(1/delta)` and
//! `2 theta2 / eta2^2 ln(1/delta)` coincide, which minimizes their maximum.
//! The decision boundary is `t = theta1 + eta1 = theta2 - eta2`.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::SampleTally;
use crate::error::{Error, OracleError, Result};
use crate::oracle::Oracle;
use crate::seed::SeedSpec;

pub const DEFAULT_BATCH_SIZE: usize = 128;

/// Fully derived parameters of one Tester call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TesterPlan {
    pub theta1: f64,
    pub theta2: f64,
    pub delta_call: f64,
    pub n_samples: u64,
    pub eta1: f64,
    pub eta2: f64,
    pub t: f64,
}

/// Sample requirement before rounding up.
pub fn tester_sample_requirement(theta1: f64, theta2: f64, delta_call: f64) -> f64 {
    let a = (3.0 * theta1).sqrt();
    let b = (2.0 * theta2).sqrt();
    let width = theta2 - theta1;
    (a + b) * (a + b) / (width * width) * (1.0 / delta_call).ln()
}

pub fn plan_tester(theta1: f64, theta2: f64, delta_call: f64) -> Result<TesterPlan> {
    if !(theta1 >= 0.0 && theta1 < theta2 && theta2 <= 1.0) {
        return Err(Error::InvalidInterval { theta1, theta2 });
    }
    if !(delta_call > 0.0 && delta_call < 1.0) {
        return Err(Error::InvalidConfidence(delta_call));
    }
    let a = (3.0 * theta1).sqrt();
    let b = (2.0 * theta2).sqrt();
    let width = theta2 - theta1;
    let eta1 = width * a / (a + b);
    let eta2 = width - eta1;
    let n = tester_sample_requirement(theta1, theta2, delta_call).ceil();
    Ok(TesterPlan {
        theta1,
        theta2,
        delta_call,
        n_samples: (n as u64).max(1),
        eta1,
        eta2,
        t: theta1 + eta1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestOutcome {
    Yes,
    No,
}

impl TesterPlan {
    /// Yes iff `p_hat <= t`; a tie goes to Yes.
    pub fn decide(&self, tally: &SampleTally) -> TestOutcome {
        if tally.p_hat() <= self.t {
            TestOutcome::Yes
        } else {
            TestOutcome::No
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TesterResult {
    pub outcome: TestOutcome,
    pub tally: SampleTally,
    pub plan: TesterPlan,
}

/// Resource caps for a whole certification run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_samples: Option<u64>,
    pub max_wall_ms: Option<u64>,
}

/// How trials are executed: batch size, worker threads, limits and whether
/// wall time is recorded in reports.
#[derive(Clone)]
pub struct Execution {
    pub limits: Limits,
    pub record_timing: bool,
    batch_size: usize,
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl Default for Execution {
    fn default() -> Self {
        Self {
            limits: Limits::default(),
            record_timing: true,
            batch_size: DEFAULT_BATCH_SIZE,
            pool: None,
        }
    }
}

impl std::fmt::Debug for Execution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Execution")
            .field("limits", &self.limits)
            .field("record_timing", &self.record_timing)
            .field("batch_size", &self.batch_size)
            .field("threads", &self.threads())
            .finish()
    }
}

impl Execution {
    pub fn sequential() -> Self {
        Self::default()
    }

    /// Uses a dedicated pool of `threads` workers (1 means sequential).
    pub fn with_threads(mut self, threads: usize) -> Result<Self> {
        if threads <= 1 {
            self.pool = None;
            return Ok(self);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        self.pool = Some(Arc::new(pool));
        Ok(self)
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Result<Self> {
        if batch_size == 0 {
            return Err(Error::InvalidArgument("batch size must be positive".into()));
        }
        self.batch_size = batch_size;
        Ok(self)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn without_timing(mut self) -> Self {
        self.record_timing = false;
        self
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    pub fn threads(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }

    /// Same settings but without the worker pool.
    pub fn single_threaded(&self) -> Self {
        Self {
            pool: None,
            ..self.clone()
        }
    }

    pub(crate) fn pool(&self) -> Option<&rayon::ThreadPool> {
        self.pool.as_deref()
    }
}

/// Why drawing stopped before all trials were collected.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Interruption {
    #[error(transparent)]
    Oracle(OracleError),
    #[error("wall-time limit reached")]
    Timeout,
}

/// A Tester call that did not finish; `partial` counts the trials that were
/// taken (in trial order) before it stopped.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("tester interrupted after {} trials: {cause}", .partial.trials())]
pub struct TesterError {
    pub cause: Interruption,
    pub partial: SampleTally,
}

impl From<TesterError> for Error {
    fn from(e: TesterError) -> Self {
        match e.cause {
            Interruption::Oracle(o) => Error::Oracle(o.with_partial(e.partial)),
            Interruption::Timeout => Error::Timeout,
        }
    }
}

/// Draws exactly `n` trials of call `call_index` in batches, stopping early
/// only on an oracle failure or once `deadline` has passed.
pub fn draw_trials(
    oracle: &dyn Oracle,
    call_index: u64,
    n: u64,
    seed: SeedSpec,
    exec: &Execution,
    deadline: Option<Instant>,
) -> Result<SampleTally, TesterError> {
    let batch = exec.batch_size as u64;
    let n_batches = n.div_ceil(batch);
    let range_of = |b: u64| b * batch..((b + 1) * batch).min(n);
    let check = |tally: SampleTally, expected: u64, acc: SampleTally| {
        if tally.trials() != expected {
            return Err(TesterError {
                cause: Interruption::Oracle(OracleError::new(
                    crate::error::OracleErrorKind::ProtocolViolation(format!(
                        "oracle returned {} trials for a batch of {expected}",
                        tally.trials()
                    )),
                )),
                partial: acc,
            });
        }
        Ok(acc.merge(tally))
    };
    let timed_out = || deadline.is_some_and(|d| Instant::now() >= d);

    let mut acc = SampleTally::empty();
    match exec.pool() {
        Some(pool) if oracle.supports_concurrent_draws() && n_batches > 1 => {
            // Waves of batches run in parallel; the reduction walks them in
            // batch order so the result never depends on scheduling.
            let wave = (pool.current_num_threads() as u64 * 4).max(1);
            let mut next = 0;
            while next < n_batches {
                if timed_out() {
                    return Err(TesterError {
                        cause: Interruption::Timeout,
                        partial: acc,
                    });
                }
                let end = (next + wave).min(n_batches);
                let results: Vec<_> = pool.install(|| {
                    (next..end)
                        .into_par_iter()
                        .map(|b| (b, oracle.draw(call_index, range_of(b), seed)))
                        .collect()
                });
                for (b, r) in results {
                    match r {
                        Ok(t) => acc = check(t, range_of(b).end - range_of(b).start, acc)?,
                        Err(e) => {
                            let partial = acc.merge(e.partial);
                            return Err(TesterError {
                                cause: Interruption::Oracle(e),
                                partial,
                            });
                        }
                    }
                }
                next = end;
            }
        }
        _ => {
            for b in 0..n_batches {
                if timed_out() {
                    return Err(TesterError {
                        cause: Interruption::Timeout,
                        partial: acc,
                    });
                }
                let range = range_of(b);
                let expected = range.end - range.start;
                match oracle.draw(call_index, range, seed) {
                    Ok(t) => acc = check(t, expected, acc)?,
                    Err(e) => {
                        let partial = acc.merge(e.partial);
                        return Err(TesterError {
                            cause: Interruption::Oracle(e),
                            partial,
                        });
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// Runs one Tester call: exactly `plan.n_samples` trials, then the decision
/// at `plan.t`.
pub fn run_tester(
    plan: &TesterPlan,
    oracle: &dyn Oracle,
    call_index: u64,
    seed: SeedSpec,
    exec: &Execution,
) -> Result<TesterResult, TesterError> {
    run_tester_until(plan, oracle, call_index, seed, exec, None)
}

pub fn run_tester_until(
    plan: &TesterPlan,
    oracle: &dyn Oracle,
    call_index: u64,
    seed: SeedSpec,
    exec: &Execution,
    deadline: Option<Instant>,
) -> Result<TesterResult, TesterError> {
    let tally = draw_trials(oracle, call_index, plan.n_samples, seed, exec, deadline)?;
    Ok(TesterResult {
        outcome: plan.decide(&tally),
        tally,
        plan: *plan,
    })
}
