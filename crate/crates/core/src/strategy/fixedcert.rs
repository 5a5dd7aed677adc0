//! Non-adaptive strategy over fixed intervals of size about `sqrt(eta)`.

use serde::{Deserialize, Serialize};

use super::{Driver, IntervalSchedule, Side, Step, StrategyKind};
use crate::domain::{ThresholdQuery, Verdict};
use crate::error::Result;
use crate::oracle::Oracle;
use crate::seed::SeedSpec;
use crate::strategy::CertificationReport;
use crate::tester::{Execution, TestOutcome};

/// Interval layout. A side with zero intervals has `alpha = 0` and
/// `delta = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedCertParams {
    pub n_l: u64,
    pub n_r: u64,
    pub alpha_l: f64,
    pub alpha_r: f64,
    pub delta_l: f64,
    pub delta_r: f64,
    pub delta_final: f64,
}

// floor() that absorbs representation error, e.g. 0.3 / 0.1 = 2.9999999999999996.
fn count_fitting(span: f64, size: f64) -> u64 {
    let ratio = span / size;
    if ratio <= 0.0 {
        0
    } else {
        (ratio * (1.0 + 1e-12)).floor() as u64
    }
}

impl FixedCertParams {
    pub fn new(query: &ThresholdQuery) -> Self {
        let size = query.eta().sqrt();
        let delta = query.delta();
        let n_l = count_fitting(query.theta(), size);
        let n_r = count_fitting(query.right_span(), size);
        let (alpha_l, delta_l) = if n_l > 0 {
            (query.theta() / n_l as f64, delta / (3.0 * n_l as f64))
        } else {
            (0.0, 0.0)
        };
        let (alpha_r, delta_r) = if n_r > 0 {
            (query.right_span() / n_r as f64, delta / (3.0 * n_r as f64))
        } else {
            (0.0, 0.0)
        };
        Self {
            n_l,
            n_r,
            alpha_l,
            alpha_r,
            delta_l,
            delta_r,
            delta_final: delta / 3.0,
        }
    }

    /// `n_l * delta_l + n_r * delta_r + delta / 3`.
    pub fn delta_total(&self) -> f64 {
        self.n_l as f64 * self.delta_l + self.n_r as f64 * self.delta_r + self.delta_final
    }

    fn proving(&self, query: &ThresholdQuery, i: u64) -> IntervalSchedule {
        let lo = (i - 1) as f64 * self.alpha_l;
        let hi = if i == self.n_l {
            query.theta()
        } else {
            (i as f64 * self.alpha_l).min(query.theta())
        };
        IntervalSchedule {
            side: Side::Proving,
            theta1: lo,
            theta2: hi,
            delta_call: self.delta_l,
        }
    }

    fn refuting(&self, query: &ThresholdQuery, j: u64) -> IntervalSchedule {
        let hi = 1.0 - (j - 1) as f64 * self.alpha_r;
        let lo = if j == self.n_r {
            query.upper()
        } else {
            (1.0 - j as f64 * self.alpha_r).max(query.upper())
        };
        IntervalSchedule {
            side: Side::Refuting,
            theta1: lo,
            theta2: hi,
            delta_call: self.delta_r,
        }
    }
}

/// Every interval FixedCert tests without an early return: proving and
/// refuting intervals alternate from the outside in, the longer side
/// continues alone, then the final `(theta, theta + eta)` call at `delta/3`.
pub fn fixedcert_schedule(query: &ThresholdQuery) -> Vec<IntervalSchedule> {
    let params = FixedCertParams::new(query);
    let mut out = Vec::with_capacity((params.n_l + params.n_r + 1) as usize);
    for k in 1..=params.n_l.max(params.n_r) {
        if k <= params.n_l {
            out.push(params.proving(query, k));
        }
        if k <= params.n_r {
            out.push(params.refuting(query, k));
        }
    }
    out.push(IntervalSchedule {
        side: Side::Final,
        theta1: query.theta(),
        theta2: query.upper(),
        delta_call: params.delta_final,
    });
    out
}

pub fn fixedcert(
    query: &ThresholdQuery,
    oracle: &dyn Oracle,
    seed: SeedSpec,
    exec: &Execution,
) -> Result<CertificationReport> {
    let mut driver = Driver::new(query, StrategyKind::FixedCert, oracle, seed, exec);
    let params = FixedCertParams::new(query);
    driver.note(format!(
        "{} proving intervals of width {:.6}, {} refuting intervals of width {:.6}",
        params.n_l, params.alpha_l, params.n_r, params.alpha_r
    ));
    for schedule in fixedcert_schedule(query) {
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
