//! Certification strategies assembled from Tester calls.
//!
//! Every strategy follows the same shape: test cheap "proving" intervals
//! left of `theta` (a Yes there proves `p <= theta`) and "refuting"
//! intervals right of `theta + eta` (a No there proves `p > theta + eta`),
//! and fall back to one final Tester on `(theta, theta + eta)`.

mod baseline;
mod bincert;
mod budget;
mod fixedcert;

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use baseline::{estimate_baseline, estimation_sample_count};
pub use bincert::{bincert, bincert_schedule, create_interval, BinCertParams};
pub use budget::{worst_case_budget, BudgetBound};
pub use fixedcert::{fixedcert, fixedcert_schedule, FixedCertParams};

use crate::domain::{InconclusiveReason, SampleTally, ThresholdQuery, Verdict};
use crate::error::Result;
use crate::oracle::Oracle;
use crate::seed::SeedSpec;
use crate::tester::{
    plan_tester, run_tester_until, Execution, Interruption, TestOutcome, TesterPlan,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    #[value(name = "bincert")]
    BinCert,
    #[value(name = "fixedcert")]
    FixedCert,
    #[value(name = "estimate")]
    Estimate,
}

impl StrategyKind {
    pub fn run(
        self,
        query: &ThresholdQuery,
        oracle: &dyn Oracle,
        seed: SeedSpec,
        exec: &Execution,
    ) -> Result<CertificationReport> {
        match self {
            StrategyKind::BinCert => bincert(query, oracle, seed, exec),
            StrategyKind::FixedCert => fixedcert(query, oracle, seed, exec),
            StrategyKind::Estimate => estimate_baseline(query, oracle, seed, exec),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::BinCert => "bincert",
            StrategyKind::FixedCert => "fixedcert",
            StrategyKind::Estimate => "estimate",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bincert" => Ok(StrategyKind::BinCert),
            "fixedcert" => Ok(StrategyKind::FixedCert),
            "estimate" | "baseline" => Ok(StrategyKind::Estimate),
            other => Err(crate::error::Error::InvalidArgument(format!(
                "unknown strategy '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Proving,
    Refuting,
    Final,
    /// Single direct-estimation call of the baseline strategy.
    Estimate,
}

/// One interval a strategy hands to the Tester.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSchedule {
    pub side: Side,
    pub theta1: f64,
    pub theta2: f64,
    pub delta_call: f64,
}

impl IntervalSchedule {
    pub fn width(&self) -> f64 {
        self.theta2 - self.theta1
    }

    pub fn plan(&self) -> Result<TesterPlan> {
        plan_tester(self.theta1, self.theta2, self.delta_call)
    }
}

/// Audit record of one executed (or interrupted) Tester call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CallRecord {
    pub side: Side,
    pub theta1: f64,
    pub theta2: f64,
    pub delta_call: f64,
    pub n: u64,
    pub eta1: f64,
    pub eta2: f64,
    pub t: f64,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    /// `None` when the call was cut short by a wall-time limit.
    pub outcome: Option<TestOutcome>,
}

impl CallRecord {
    fn new(side: Side, plan: &TesterPlan, tally: SampleTally, outcome: Option<TestOutcome>) -> Self {
        Self {
            side,
            theta1: plan.theta1,
            theta2: plan.theta2,
            delta_call: plan.delta_call,
            n: plan.n_samples,
            eta1: plan.eta1,
            eta2: plan.eta2,
            t: plan.t,
            trials: tally.trials(),
            successes: tally.successes(),
            p_hat: tally.p_hat(),
            outcome,
        }
    }

    pub fn tally(&self) -> SampleTally {
        SampleTally::new(self.trials, self.successes).expect("record holds a valid tally")
    }
}

/// Verdict of one strategy run plus the full per-call audit trail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub query: ThresholdQuery,
    pub strategy: StrategyKind,
    pub verdict: Verdict,
    pub total_samples: u64,
    pub wall_time_ms: Option<u64>,
    pub seed: SeedSpec,
    pub calls: Vec<CallRecord>,
    pub notes: Vec<String>,
}

impl CertificationReport {
    /// Sum of the per-call confidence parameters actually spent.
    pub fn delta_spent(&self) -> f64 {
        self.calls.iter().map(|c| c.delta_call).sum()
    }

    /// Checks the structural guarantees every report must satisfy.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let sum: u64 = self.calls.iter().map(|c| c.trials).sum();
        if sum != self.total_samples {
            return Err(format!("total_samples {} != sum of calls {sum}", self.total_samples));
        }
        let theta = self.query.theta();
        let upper = self.query.upper();
        for (i, c) in self.calls.iter().enumerate() {
            match c.side {
                Side::Proving if c.theta2 > theta => {
                    return Err(format!("proving call {i} ends at {} > theta", c.theta2))
                }
                Side::Refuting if c.theta1 < upper => {
                    return Err(format!("refuting call {i} starts at {} < theta + eta", c.theta1))
                }
                _ => {}
            }
            if c.outcome.is_some() && c.trials != c.n {
                return Err(format!("completed call {i} drew {} of {} trials", c.trials, c.n));
            }
        }
        let last = self.calls.last();
        match self.verdict {
            Verdict::Yes => match last {
                Some(c)
                    if c.outcome == Some(TestOutcome::Yes)
                        && matches!(c.side, Side::Proving | Side::Final | Side::Estimate) => {}
                _ => return Err("Yes verdict not backed by a proving/final Yes".into()),
            },
            Verdict::No => match last {
                Some(c)
                    if c.outcome == Some(TestOutcome::No)
                        && matches!(c.side, Side::Refuting | Side::Final | Side::Estimate) => {}
                _ => return Err("No verdict not backed by a refuting/final No".into()),
            },
            Verdict::Inconclusive(_) => {}
        }
        if self.delta_spent() > self.query.delta() * (1.0 + 1e-12) {
            return Err(format!(
                "spent delta {} exceeds {}",
                self.delta_spent(),
                self.query.delta()
            ));
        }
        Ok(())
    }
}

pub(crate) enum Step {
    Outcome(TestOutcome),
    Halt(InconclusiveReason),
}

/// Shared bookkeeping for a strategy run: limits, call indices, records.
pub(crate) struct Driver<'a> {
    query: ThresholdQuery,
    strategy: StrategyKind,
    oracle: &'a dyn Oracle,
    seed: SeedSpec,
    exec: &'a Execution,
    start: Instant,
    deadline: Option<Instant>,
    calls: Vec<CallRecord>,
    total: u64,
    notes: Vec<String>,
}

impl<'a> Driver<'a> {
    pub(crate) fn new(
        query: &ThresholdQuery,
        strategy: StrategyKind,
        oracle: &'a dyn Oracle,
        seed: SeedSpec,
        exec: &'a Execution,
    ) -> Self {
        let start = Instant::now();
        Self {
            query: *query,
            strategy,
            oracle,
            seed,
            exec,
            start,
            deadline: exec
                .limits
                .max_wall_ms
                .map(|ms| start + Duration::from_millis(ms)),
            calls: Vec::new(),
            total: 0,
            notes: Vec::new(),
        }
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub(crate) fn test(&mut self, schedule: IntervalSchedule) -> Result<Step> {
        let plan = schedule.plan()?;
        self.run_plan(schedule.side, plan)
    }

    pub(crate) fn run_plan(&mut self, side: Side, plan: TesterPlan) -> Result<Step> {
        if let Some(max) = self.exec.limits.max_samples {
            if self.total.saturating_add(plan.n_samples) > max {
                return Ok(Step::Halt(InconclusiveReason::BudgetExhausted));
            }
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(Step::Halt(InconclusiveReason::Timeout));
        }
        let call_index = self.calls.len() as u64;
        match run_tester_until(&plan, self.oracle, call_index, self.seed, self.exec, self.deadline)
        {
            Ok(result) => {
                self.total += result.tally.trials();
                self.calls
                    .push(CallRecord::new(side, &plan, result.tally, Some(result.outcome)));
                Ok(Step::Outcome(result.outcome))
            }
            Err(err) => match err.cause {
                Interruption::Timeout => {
                    self.total += err.partial.trials();
                    self.calls.push(CallRecord::new(side, &plan, err.partial, None));
                    Ok(Step::Halt(InconclusiveReason::Timeout))
                }
                Interruption::Oracle(_) => Err(err.into()),
            },
        }
    }

    pub(crate) fn finish(self, verdict: Verdict) -> CertificationReport {
        CertificationReport {
            query: self.query,
            strategy: self.strategy,
            verdict,
            total_samples: self.total,
            wall_time_ms: self
                .exec
                .record_timing
                .then(|| self.start.elapsed().as_millis() as u64),
            seed: self.seed,
            calls: self.calls,
            notes: self.notes,
        }
    }
}
