//! Direct estimation: one Chernoff-sized sample, decide at `theta + eta/2`.

use super::{Driver, Side, Step, StrategyKind};
use crate::domain::{ThresholdQuery, Verdict};
use crate::error::Result;
use crate::oracle::Oracle;
use crate::seed::SeedSpec;
use crate::strategy::CertificationReport;
use crate::tester::{Execution, TestOutcome, TesterPlan};

/// Smallest integer strictly greater than `12 ln(1/delta) / eta^2`.
pub fn estimation_sample_count(eta: f64, delta: f64) -> u64 {
    let bound = 12.0 * (1.0 / delta).ln() / (eta * eta);
    bound.floor() as u64 + 1
}

pub(crate) fn baseline_plan(query: &ThresholdQuery) -> TesterPlan {
    let half = query.eta() / 2.0;
    TesterPlan {
        theta1: query.theta(),
        theta2: query.upper(),
        delta_call: query.delta(),
        n_samples: estimation_sample_count(query.eta(), query.delta()),
        eta1: half,
        eta2: half,
        t: query.theta() + half,
    }
}

pub fn estimate_baseline(
    query: &ThresholdQuery,
    oracle: &dyn Oracle,
    seed: SeedSpec,
    exec: &Execution,
) -> Result<CertificationReport> {
    let mut driver = Driver::new(query, StrategyKind::Estimate, oracle, seed, exec);
    let verdict = match driver.run_plan(Side::Estimate, baseline_plan(query))? {
        Step::Outcome(TestOutcome::Yes) => Verdict::Yes,
        Step::Outcome(TestOutcome::No) => Verdict::No,
        Step::Halt(reason) => Verdict::Inconclusive(reason),
    };
    Ok(driver.finish(verdict))
}
