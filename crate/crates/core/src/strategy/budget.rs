//! Worst-case sample budget of BinCert.

use serde::{Deserialize, Serialize};

use super::{bincert_schedule, BinCertParams};
use crate::domain::ThresholdQuery;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetBound {
    /// Proving-side halving term, 0 when `theta < eta`.
    pub k1: f64,
    /// Refuting-side halving term, 0 when `1 - theta - eta < eta`.
    pub k2: f64,
    /// Final-interval term.
    pub k3: f64,
    pub n_calls_bound: f64,
    pub delta_min: f64,
    /// Sum of Tester sample counts over every interval BinCert could test.
    pub exact_schedule_total: u64,
    pub schedule_calls: usize,
    pub left_degenerate: bool,
    pub right_degenerate: bool,
}

impl BudgetBound {
    pub fn closed_form_total(&self) -> f64 {
        self.k1 + self.k2 + self.k3
    }
}

pub fn worst_case_budget(query: &ThresholdQuery) -> Result<BudgetBound> {
    let params = BinCertParams::new(query);
    let (theta, eta) = (query.theta(), query.eta());
    let ln = (1.0 / params.delta_min).ln();
    let c = (3f64.sqrt() + 2f64.sqrt()).powi(2);
    let inv_eta2 = 1.0 / (eta * eta);

    let left_degenerate = theta < eta;
    let right_degenerate = query.right_span() < eta;
    let k1 = if left_degenerate {
        0.0
    } else {
        (4.0 / 3.0) * c * (inv_eta2 - 1.0 / (theta * theta)) * ln
    };
    let k2 = if right_degenerate {
        0.0
    } else {
        let span = query.right_span();
        (4.0 / 3.0) * c * (inv_eta2 - 1.0 / (4.0 * span * span)) * ln
    };
    let k3 = ((3.0 * theta).sqrt() + (2.0 * (theta + eta)).sqrt()).powi(2) * inv_eta2 * ln;

    let schedule = bincert_schedule(query);
    let mut total = 0u64;
    for s in &schedule {
        total += s.plan()?.n_samples;
    }
    Ok(BudgetBound {
        k1,
        k2,
        k3,
        n_calls_bound: params.n_calls_bound,
        delta_min: params.delta_min,
        exact_schedule_total: total,
        schedule_calls: schedule.len(),
        left_degenerate,
        right_degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_k3() {
        let q = ThresholdQuery::new(0.1, 0.001, 0.01).unwrap();
        let b = worst_case_budget(&q).unwrap();
        // 40-digit reference 7530472.566355480...
        assert!((b.k3 - 7_530_472.566_355_48).abs() / 7.53e6 < 1e-12);
        assert!(!b.left_degenerate && !b.right_degenerate);
        assert!(b.k1 > 0.0 && b.k2 > 0.0);
        assert!(b.exact_schedule_total as f64 >= b.k3);
    }

    #[test]
    fn degenerate_sides_contribute_zero() {
        let q = ThresholdQuery::new(0.01, 0.01, 0.01).unwrap();
        let b = worst_case_budget(&q).unwrap();
        assert_eq!(b.k1, 0.0);
        let q = ThresholdQuery::new(0.005, 0.01, 0.01).unwrap();
        let b = worst_case_budget(&q).unwrap();
        assert!(b.left_degenerate);
        assert_eq!(b.k1, 0.0);
        let q = ThresholdQuery::new(0.95, 0.04, 0.01).unwrap();
        let b = worst_case_budget(&q).unwrap();
        assert!(b.right_degenerate);
        assert_eq!(b.k2, 0.0);
    }

    #[test]
    fn schedule_total_bounded_by_closed_forms_plus_rounding() {
        // Each call is at most (sqrt3+sqrt2)^2/w^2 ln(1/delta_min) + 1, and the
        // halving sums are dominated by the closed-form geometric series. The
        // opening (0, theta) call sits outside k1 and costs 2/theta ln(1/delta_min).
        for (theta, eta, delta) in [(0.1, 0.001, 0.01), (0.3, 0.01, 0.05), (0.5, 0.02, 0.1)] {
            let q = ThresholdQuery::new(theta, eta, delta).unwrap();
            let b = worst_case_budget(&q).unwrap();
            let first = 2.0 / theta * (1.0 / b.delta_min).ln();
            let slack = b.schedule_calls as f64 + first;
            assert!(
                (b.exact_schedule_total as f64) <= b.closed_form_total() + slack,
                "{theta} {eta}: {} vs {}",
                b.exact_schedule_total,
                b.closed_form_total()
            );
        }
    }
}
