//! Value types shared by every certification strategy.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A certification request: decide whether `p <= theta` with error tolerance
/// `eta` and failure probability at most `delta`.
///
/// Construct through [`validate_query`] (or [`ThresholdQuery::new`]); the
/// fields are only readable afterwards, so a value of this type is always
/// valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQuery")]
pub struct ThresholdQuery {
    theta: f64,
    eta: f64,
    delta: f64,
}

#[derive(Deserialize)]
struct RawQuery {
    theta: f64,
    eta: f64,
    delta: f64,
}

impl TryFrom<RawQuery> for ThresholdQuery {
    type Error = Error;

    fn try_from(raw: RawQuery) -> Result<Self> {
        validate_query(raw.theta, raw.eta, raw.delta)
    }
}

/// Checks `0 <= theta <= 1`, `0 < eta < 1`, `0 < delta <= 1` and
/// `theta + eta <= 1`.
pub fn validate_query(theta: f64, eta: f64, delta: f64) -> Result<ThresholdQuery> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::OutOfRange {
            field: "theta",
            value: theta,
            expected: "[0, 1]",
        });
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::OutOfRange {
            field: "eta",
            value: eta,
            expected: "(0, 1)",
        });
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::OutOfRange {
            field: "delta",
            value: delta,
            expected: "(0, 1]",
        });
    }
    if theta + eta > 1.0 {
        return Err(Error::Degenerate(format!(
            "theta + eta = {} exceeds 1, no refuting interval exists",
            theta + eta
        )));
    }
    Ok(ThresholdQuery { theta, eta, delta })
}

impl ThresholdQuery {
    pub fn new(theta: f64, eta: f64, delta: f64) -> Result<Self> {
        validate_query(theta, eta, delta)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Upper end of the no-guarantee zone, `theta + eta`.
    pub fn upper(&self) -> f64 {
        self.theta + self.eta
    }

    /// Width of the refuting region `(theta + eta, 1]`.
    pub fn right_span(&self) -> f64 {
        1.0 - self.theta - self.eta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveReason {
    BudgetExhausted,
    Timeout,
}

/// Final answer of a certification run.
///
/// `Yes` and `No` come from a Tester call; `Inconclusive` only from a
/// resource limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive(InconclusiveReason),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => f.write_str("Yes"),
            Verdict::No => f.write_str("No"),
            Verdict::Inconclusive(InconclusiveReason::BudgetExhausted) => {
                f.write_str("Inconclusive (budget exhausted)")
            }
            Verdict::Inconclusive(InconclusiveReason::Timeout) => {
                f.write_str("Inconclusive (timeout)")
            }
        }
    }
}

/// Number of trials and how many of them satisfied the property.
///
/// The empirical frequency is always derived from the two counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SampleTally {
    trials: u64,
    successes: u64,
}

impl SampleTally {
    pub fn new(trials: u64, successes: u64) -> Result<Self> {
        if successes > trials {
            return Err(Error::InvalidArgument(format!(
                "{successes} successes out of {trials} trials"
            )));
        }
        Ok(Self { trials, successes })
    }

    pub const fn empty() -> Self {
        Self {
            trials: 0,
            successes: 0,
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    /// `successes / trials`, or 0 for an empty tally.
    pub fn p_hat(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// Adds one trial.
    pub fn record(&mut self, success: bool) {
        self.trials += 1;
        self.successes += u64::from(success);
    }

    pub fn merge(self, other: SampleTally) -> SampleTally {
        SampleTally {
            trials: self.trials + other.trials,
            successes: self.successes + other.successes,
        }
    }
}

impl Serialize for SampleTally {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("SampleTally", 3)?;
        s.serialize_field("trials", &self.trials)?;
        s.serialize_field("successes", &self.successes)?;
        s.serialize_field("p_hat", &self.p_hat())?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for SampleTally {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            trials: u64,
            successes: u64,
        }
        let raw = Raw::deserialize(deserializer)?;
        SampleTally::new(raw.trials, raw.successes).map_err(serde::de::Error::custom)
    }
}
