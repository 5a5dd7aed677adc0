//! Adaptive strategy: halve the proving and refuting intervals toward
//! `theta` and `theta + eta` until both are no wider than `eta`.

use serde::{Deserialize, Serialize};

use super::{Driver, IntervalSchedule, Side, Step, StrategyKind};
use crate::domain::{ThresholdQuery, Verdict};
use crate::error::Result;
use crate::oracle::Oracle;
use crate::seed::SeedSpec;
use crate::strategy::CertificationReport;
use crate::tester::{Execution, TestOutcome};

/// Next proving (`left`) or refuting interval.
///
/// The first left interval is `(0, theta)`, or `(theta, theta + eta)` when
/// `theta = 0`; the first right interval is `(theta + eta, 1)`. Later
/// intervals keep the endpoint adjacent to the no-guarantee zone fixed and
/// shrink to `max(eta, width / 2)`.
pub fn create_interval(theta: f64, prev: Option<(f64, f64)>, eta: f64, left: bool) -> (f64, f64) {
    match (left, prev) {
        (true, None) if theta == 0.0 => (theta, theta + eta),
        (true, None) => (0.0, theta),
        (false, None) => (theta + eta, 1.0),
        (true, Some((lo, hi))) => (theta - eta.max((hi - lo) / 2.0), theta),
        (false, Some((lo, hi))) => {
            let upper = theta + eta;
            (upper, upper + eta.max((hi - lo) / 2.0))
        }
    }
}

// Widths are theta / 2^k, so exact ties with eta are common; a width within
// rounding of eta counts as eta.
fn wider_than(interval: (f64, f64), eta: f64) -> bool {
    interval.1 - interval.0 > eta * (1.0 + 1e-9)
}

/// Yields the intervals of one side while they are wider than `eta`.
struct SideWalk {
    theta: f64,
    eta: f64,
    left: bool,
    prev: Option<(f64, f64)>,
    done: bool,
}

impl SideWalk {
    fn new(query: &ThresholdQuery, left: bool) -> Self {
        Self {
            theta: query.theta(),
            eta: query.eta(),
            left,
            prev: None,
            done: false,
        }
    }
}

impl Iterator for SideWalk {
    type Item = (f64, f64);

    fn next(&mut self) -> Option<(f64, f64)> {
        if self.done {
            return None;
        }
        let interval = create_interval(self.theta, self.prev, self.eta, self.left);
        self.prev = Some(interval);
        if wider_than(interval, self.eta) {
            Some(interval)
        } else {
            self.done = true;
            None
        }
    }
}

/// Call-count bound and the per-call confidence derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinCertParams {
    /// `3 + max(0, log2(theta/eta)) + max(0, log2((1 - theta - eta)/eta))`
    pub n_calls_bound: f64,
    /// `delta / n_calls_bound`
    pub delta_min: f64,
}

impl BinCertParams {
    pub fn new(query: &ThresholdQuery) -> Self {
        let eta = query.eta();
        let left = (query.theta() / eta).log2().max(0.0);
        let right = (query.right_span() / eta).log2().max(0.0);
        let n = 3.0 + left + right;
        Self {
            n_calls_bound: n,
            delta_min: query.delta() / n,
        }
    }
}

/// Every interval BinCert could test, in execution order, assuming no
/// early return.
pub fn bincert_schedule(query: &ThresholdQuery) -> Vec<IntervalSchedule> {
    let delta_min = BinCertParams::new(query).delta_min;
    let mut left = SideWalk::new(query, true);
    let mut right = SideWalk::new(query, false);
    let mut out = Vec::new();
    loop {
        let l = left.next();
        if let Some((theta1, theta2)) = l {
            out.push(IntervalSchedule {
                side: Side::Proving,
                theta1,
                theta2,
                delta_call: delta_min,
            });
        }
        let r = right.next();
        if let Some((theta1, theta2)) = r {
            out.push(IntervalSchedule {
                side: Side::Refuting,
                theta1,
                theta2,
                delta_call: delta_min,
            });
        }
        if l.is_none() && r.is_none() {
            break;
        }
    }
    out.push(IntervalSchedule {
        side: Side::Final,
        theta1: query.theta(),
        theta2: query.upper(),
        delta_call: delta_min,
    });
    out
}

/// Runs the schedule, returning Yes on the first proving Yes and No on the
/// first refuting No; otherwise the final Tester decides.
pub fn bincert(
    query: &ThresholdQuery,
    oracle: &dyn Oracle,
    seed: SeedSpec,
    exec: &Execution,
) -> Result<CertificationReport> {
    let mut driver = Driver::new(query, StrategyKind::BinCert, oracle, seed, exec);
    let params = BinCertParams::new(query);
    driver.note(format!(
        "call bound n = {:.6} uses log base 2; every Tester call runs at delta_min = {:.6e}",
        params.n_calls_bound, params.delta_min
    ));
    for schedule in bincert_schedule(query) {
        let verdict = match (driver.test(schedule)?, schedule.side) {
            (Step::Halt(reason), _) => Some(Verdict::Inconclusive(reason)),
            (Step::Outcome(TestOutcome::Yes), Side::Proving | Side::Final) => Some(Verdict::Yes),
            (Step::Outcome(TestOutcome::No), Side::Refuting | Side::Final) => Some(Verdict::No),
            (Step::Outcome(_), _) => None,
        };
        if let Some(v) = verdict {
            return Ok(driver.finish(v));
        }
    }
    unreachable!("the schedule always ends with a final call")
}
