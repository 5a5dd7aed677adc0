//! Monte-Carlo harness: soundness rates and sample counts against
//! Bernoulli oracles with known `p`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{ThresholdQuery, Verdict};
use crate::error::{Error, Result};
use crate::oracle::bernoulli;
use crate::seed::SeedSpec;
use crate::strategy::{estimation_sample_count, CertificationReport, StrategyKind};
use crate::tester::Execution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoundnessStats {
    pub p: f64,
    pub strategy: StrategyKind,
    pub trials: u64,
    pub yes_count: u64,
    pub no_count: u64,
    pub inconclusive_count: u64,
    /// Fraction of wrong verdicts; `None` when `theta < p <= theta + eta`,
    /// where neither answer is wrong.
    pub failure_rate: Option<f64>,
    pub mean_samples: f64,
    pub median_samples: f64,
    pub stddev_samples: f64,
    pub max_samples: u64,
}

/// Runs `strategy` `trials` times on `bernoulli(p)`. Trial `i` uses
/// `seed.derive(i)`; trials run on the execution's pool, each one
/// single-threaded, and are reduced in index order.
pub fn soundness_trial(
    strategy: StrategyKind,
    query: &ThresholdQuery,
    p: f64,
    trials: u64,
    seed: SeedSpec,
    exec: &Execution,
) -> Result<SoundnessStats> {
    if trials == 0 {
        return Err(Error::OutOfRange {
            field: "trials",
            value: 0.0,
            expected: ">= 1",
        });
    }
    let oracle = bernoulli(p)?;
    let inner = exec.single_threaded();
    let one = |i: u64| -> Result<(Verdict, u64)> {
        let r: CertificationReport = strategy.run(query, &oracle, seed.derive(i), &inner)?;
        Ok((r.verdict, r.total_samples))
    };
    let results: Vec<(Verdict, u64)> = match exec.pool() {
        Some(pool) => pool.install(|| (0..trials).into_par_iter().map(one).collect::<Result<_>>())?,
        None => (0..trials).map(one).collect::<Result<_>>()?,
    };

    let (mut yes, mut no, mut inc) = (0u64, 0u64, 0u64);
    for (v, _) in &results {
        match v {
            Verdict::Yes => yes += 1,
            Verdict::No => no += 1,
            Verdict::Inconclusive(_) => inc += 1,
        }
    }
    let failure_rate = if p <= query.theta() {
        Some((trials - yes) as f64 / trials as f64)
    } else if p > query.upper() {
        Some((trials - no) as f64 / trials as f64)
    } else {
        None
    };

    let mut samples: Vec<u64> = results.iter().map(|r| r.1).collect();
    samples.sort_unstable();
    let n = samples.len() as f64;
    let mean = samples.iter().map(|&s| s as f64).sum::<f64>() / n;
    let median = if samples.len() % 2 == 1 {
        samples[samples.len() / 2] as f64
    } else {
        let h = samples.len() / 2;
        (samples[h - 1] + samples[h]) as f64 / 2.0
    };
    let stddev = if samples.len() < 2 {
        0.0
    } else {
        let var = samples.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        var.sqrt()
    };

    Ok(SoundnessStats {
        p,
        strategy,
        trials,
        yes_count: yes,
        no_count: no,
        inconclusive_count: inc,
        failure_rate,
        mean_samples: mean,
        median_samples: median,
        stddev_samples: stddev,
        max_samples: *samples.last().unwrap(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub theta: f64,
    pub eta: f64,
    pub delta: f64,
    pub strategy: StrategyKind,
    pub mean_samples: f64,
    pub max_samples: u64,
    pub baseline_samples: u64,
    /// `baseline_samples / mean_samples`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Mean over grid cells of the per-cell mean samples for `strategy`.
    pub fn grid_mean_samples(&self, strategy: StrategyKind) -> Option<f64> {
        let cells: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.strategy == strategy)
            .map(|r| r.mean_samples)
            .collect();
        if cells.is_empty() {
            None
        } else {
            Some(cells.iter().sum::<f64>() / cells.len() as f64)
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row).map_err(csv_error)?;
        }
        if self.rows.is_empty() {
            w.write_record([
                "p", "theta", "eta", "delta", "strategy", "mean_samples", "max_samples",
                "baseline_samples", "ratio",
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Mean samples per strategy and grid cell. Cell `k` uses `seed.derive(k)`
/// for every strategy, so strategies see the same oracle streams.
pub fn complexity_sweep(
    strategies: &[StrategyKind],
    query: &ThresholdQuery,
    p_grid: &[f64],
    trials: u64,
    seed: SeedSpec,
    exec: &Execution,
) -> Result<SweepTable> {
    if strategies.is_empty() || p_grid.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one strategy and one p".into()));
    }
    let baseline = estimation_sample_count(query.eta(), query.delta());
    let mut rows = Vec::with_capacity(strategies.len() * p_grid.len());
    for (k, &p) in p_grid.iter().enumerate() {
        for &strategy in strategies {
            let stats = soundness_trial(strategy, query, p, trials, seed.derive(k as u64), exec)?;
            rows.push(SweepRow {
                p,
                theta: query.theta(),
                eta: query.eta(),
                delta: query.delta(),
                strategy,
                mean_samples: stats.mean_samples,
                max_samples: stats.max_samples,
                baseline_samples: baseline,
                ratio: baseline as f64 / stats.mean_samples,
            });
        }
    }
    Ok(SweepTable { rows })
}

/// `start, start + step, ...` up to `end` inclusive, computed by index so
/// rounding does not accumulate. The last point is clamped to `end`.
pub fn linear_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "grid needs start <= end and step > 0 (got {start}:{end}:{step})"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as u64;
    Ok((0..=count).map(|i| (start + i as f64 * step).min(end)).collect())
}
