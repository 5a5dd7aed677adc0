use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{certify_density, RobustnessQuery};
use crate::domain::Verdict;
use crate::error::{Error, Result};
use crate::nn::Model;
use crate::seed::SeedSpec;
use crate::strategy::StrategyKind;
use crate::tester::Execution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HardnessSearch {
    /// Probe each radius in ascending order, stop at the first non-Yes.
    Sweep(Vec<f64>),
    /// Binary search on `[lo, hi]` down to `resolution`; assumes verdicts
    /// are monotone in the radius.
    Bisect { lo: f64, hi: f64, resolution: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Sweep,
    Bisect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub epsilon: f64,
    pub verdict: Verdict,
    pub total_samples: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessResult {
    pub hardness: f64,
    pub probe_log: Vec<Probe>,
    pub method: SearchMethod,
}

/// Largest probed radius at which density certification answers Yes.
///
/// Probe `k` runs with seed `seed.derive(k)`. The template's epsilon is
/// ignored; its center, norm and query are reused for every probe.
pub fn adversarial_hardness(
    model: Arc<Model>,
    template: &RobustnessQuery,
    search: &HardnessSearch,
    strategy: StrategyKind,
    seed: SeedSpec,
    exec: &Execution,
) -> Result<HardnessResult> {
    let mut log = Vec::new();
    let probe = |epsilon: f64, log: &mut Vec<Probe>| -> Result<Verdict> {
        let rq = template.with_epsilon(epsilon)?;
        let report = certify_density(&rq, model.clone(), strategy, seed.derive(log.len() as u64), exec)?;
        log.push(Probe {
            epsilon,
            verdict: report.verdict,
            total_samples: report.total_samples,
        });
        Ok(report.verdict)
    };

    match search {
        HardnessSearch::Sweep(grid) => {
            if grid.is_empty() {
                return Err(Error::InvalidArgument("empty epsilon grid".into()));
            }
            if grid.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidArgument("epsilon grid must be strictly ascending".into()));
            }
            let mut best = None;
            for &eps in grid {
                if probe(eps, &mut log)?.is_yes() {
                    best = Some(eps);
                } else {
                    break;
                }
            }
            match best {
                Some(hardness) => Ok(HardnessResult {
                    hardness,
                    probe_log: log,
                    method: SearchMethod::Sweep,
                }),
                None => Err(Error::NoYesFound { probes: log }),
            }
        }
        &HardnessSearch::Bisect { lo, hi, resolution } => {
            if !(lo > 0.0 && lo < hi && resolution > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "bisection needs 0 < lo < hi and resolution > 0 (got {lo}, {hi}, {resolution})"
                )));
            }
            if !probe(lo, &mut log)?.is_yes() {
                return Err(Error::NoYesFound { probes: log });
            }
            if probe(hi, &mut log)?.is_yes() {
                return Ok(HardnessResult {
                    hardness: hi,
                    probe_log: log,
                    method: SearchMethod::Bisect,
                });
            }
            let (mut yes, mut not_yes) = (lo, hi);
            while not_yes - yes > resolution {
                let mid = 0.5 * (yes + not_yes);
                if probe(mid, &mut log)?.is_yes() {
                    yes = mid;
                } else {
                    not_yes = mid;
                }
            }
            Ok(HardnessResult {
                hardness: yes,
                probe_log: log,
                method: SearchMethod::Bisect,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ThresholdQuery;
    use crate::nn::Layer;
    use crate::robustness::Norm;

    fn boundary_model(boundary: f64) -> Arc<Model> {
        Arc::new(
            Model::new(2, vec![Layer::dense(2, 2, vec![0.0, 0.0, 1.0, 0.0], vec![0.0, -boundary])])
                .unwrap(),
        )
    }

    fn template() -> RobustnessQuery {
        let q = ThresholdQuery::new(1e-3, 1e-3, 0.01).unwrap();
        RobustnessQuery::new(vec![0.5, 0.5], 0.1, Norm::Linf, q).unwrap()
    }

    #[test]
    fn grid_above_boundary_finds_nothing() {
        let err = adversarial_hardness(
            boundary_model(0.7),
            &template(),
            &HardnessSearch::Sweep(vec![0.3, 0.4]),
            StrategyKind::BinCert,
            SeedSpec::new(1),
            &Execution::default(),
        )
        .unwrap_err();
        match err {
            Error::NoYesFound { probes } => {
                assert_eq!(probes.len(), 1);
                assert!(!probes[0].verdict.is_yes());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unsorted_grid_and_bad_bisect() {
        let run = |search: HardnessSearch| {
            adversarial_hardness(
                boundary_model(0.7),
                &template(),
                &search,
                StrategyKind::BinCert,
                SeedSpec::new(1),
                &Execution::default(),
            )
        };
        assert!(matches!(run(HardnessSearch::Sweep(vec![0.2, 0.1])), Err(Error::InvalidArgument(_))));
        assert!(matches!(run(HardnessSearch::Sweep(vec![])), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            run(HardnessSearch::Bisect { lo: 0.3, hi: 0.1, resolution: 0.01 }),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn sweep_log_is_yes_below_hardness() {
        let r = adversarial_hardness(
            boundary_model(0.7),
            &template(),
            &HardnessSearch::Sweep(vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3]),
            StrategyKind::BinCert,
            SeedSpec::new(9),
            &Execution::default(),
        )
        .unwrap();
        assert!(r.hardness == 0.15 || r.hardness == 0.2, "hardness {}", r.hardness);
        for p in &r.probe_log {
            if p.epsilon <= r.hardness {
                assert!(p.verdict.is_yes());
            }
        }
        let last = r.probe_log.last().unwrap();
        if last.epsilon > r.hardness {
            assert!(!last.verdict.is_yes());
        }
    }
}
