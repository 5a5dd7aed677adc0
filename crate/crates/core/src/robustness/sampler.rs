use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::TrialRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    Linf,
    L2,
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Linf => f.write_str("linf"),
            Norm::L2 => f.write_str("l2"),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linf" | "l_inf" | "inf" => Ok(Norm::Linf),
            "l2" => Ok(Norm::L2),
            other => Err(Error::InvalidArgument(format!("unknown norm '{other}'"))),
        }
    }
}

/// Source of input vectors for a property oracle.
pub trait Sampler: Send + Sync {
    fn dimension(&self) -> usize;

    /// One input vector drawn with the trial's generator.
    fn sample(&self, rng: &mut TrialRng) -> Vec<f64>;

    /// Whether `x` lies in the declared support.
    fn contains(&self, x: &[f64]) -> bool;

    fn description(&self) -> String;

    /// Disclosure to attach to reports, if the sampler's measure departs
    /// from the plain ball.
    fn note(&self) -> Option<String> {
        None
    }
}

/// Builds the sampler for a norm ball around `center`.
pub fn ball_sampler(norm: Norm, center: Vec<f64>, epsilon: f64) -> Result<Box<dyn Sampler>> {
    Ok(match norm {
        Norm::Linf => Box::new(linf_sampler(center, epsilon)?),
        Norm::L2 => Box::new(l2_sampler(center, epsilon)?),
    })
}

fn check_ball(center: &[f64], epsilon: f64) -> Result<()> {
    if center.is_empty() {
        return Err(Error::InvalidArgument("center must have at least one coordinate".into()));
    }
    if let Some(&bad) = center.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::OutOfRange {
            field: "center coordinate",
            value: bad,
            expected: "[0, 1]",
        });
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::OutOfRange {
            field: "epsilon",
            value: epsilon,
            expected: "(0, inf)",
        });
    }
    Ok(())
}

/// Exactly uniform on the intersection of the L-infinity ball with the unit
/// box: each coordinate is uniform on `[max(0, c - eps), min(1, c + eps)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinfBallSampler {
    center: Vec<f64>,
    epsilon: f64,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

pub fn linf_sampler(center: Vec<f64>, epsilon: f64) -> Result<LinfBallSampler> {
    check_ball(&center, epsilon)?;
    let lo = center.iter().map(|c| (c - epsilon).max(0.0)).collect();
    let hi = center.iter().map(|c| (c + epsilon).min(1.0)).collect();
    Ok(LinfBallSampler {
        center,
        epsilon,
        lo,
        hi,
    })
}

impl LinfBallSampler {
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }
}

impl Sampler for LinfBallSampler {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn sample(&self, rng: &mut TrialRng) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&lo, &hi)| {
                let u: f64 = rng.random();
                (lo + u * (hi - lo)).min(hi)
            })
            .collect()
    }

    fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.center.len()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    fn description(&self) -> String {
        format!(
            "uniform L-inf ball, radius {}, dimension {}, intersected with [0,1]^d",
            self.epsilon,
            self.center.len()
        )
    }
}

/// Uniform in the L2 ball, then clamped into the unit box.
///
/// Points that land outside `[0, 1]^d` are projected coordinate-wise, so near
/// the box boundary the measure is not uniform on ball ∩ box.
#[derive(Debug, Clone, PartialEq)]
pub struct L2BallSampler {
    center: Vec<f64>,
    epsilon: f64,
}

pub fn l2_sampler(center: Vec<f64>, epsilon: f64) -> Result<L2BallSampler> {
    check_ball(&center, epsilon)?;
    Ok(L2BallSampler { center, epsilon })
}

impl L2BallSampler {
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Ball-uniform point before clamping into the unit box.
    pub fn sample_unclamped(&self, rng: &mut TrialRng) -> Vec<f64> {
        let d = self.center.len();
        let direction = loop {
            let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                break z.into_iter().map(|v| v / norm).collect::<Vec<_>>();
            }
        };
        let u: f64 = rng.random();
        let radius = self.epsilon * u.powf(1.0 / d as f64);
        self.center
            .iter()
            .zip(direction)
            .map(|(c, dir)| c + radius * dir)
            .collect()
    }
}

impl Sampler for L2BallSampler {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn sample(&self, rng: &mut TrialRng) -> Vec<f64> {
        self.sample_unclamped(rng)
            .into_iter()
            .map(|v| v.clamp(0.0, 1.0))
            .collect()
    }

    fn contains(&self, x: &[f64]) -> bool {
        // Clamping moves every coordinate toward the (in-box) center, so a
        // clamped point never leaves the ball.
        x.len() == self.center.len()
            && x.iter().all(|v| (0.0..=1.0).contains(v))
            && x.iter()
                .zip(&self.center)
                .map(|(v, c)| (v - c) * (v - c))
                .sum::<f64>()
                .sqrt()
                <= self.epsilon * (1.0 + 1e-12)
    }

    fn description(&self) -> String {
        format!(
            "uniform L2 ball, radius {}, dimension {}, clamped to [0,1]^d",
            self.epsilon,
            self.center.len()
        )
    }

    fn note(&self) -> Option<String> {
        Some(
            "L2 samples are drawn uniformly in the ball and then clamped coordinate-wise \
             into [0,1]; near the box boundary the measure is not uniform on ball ∩ box"
                .into(),
        )
    }
}
