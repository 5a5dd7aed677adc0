//! Multiplicative Chernoff tail bounds for sums of independent 0/1 trials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// `Pr[p_hat >= mu + eta]`
    Upper,
    /// `Pr[p_hat <= mu - eta]`
    Lower,
}

/// Bound on the probability that the empirical mean of `n` trials deviates
/// from `mu` by `eta` on the given side.
///
/// Upper: `exp(-n eta^2 / (3 mu))`. Lower: `exp(-n eta^2 / (2 mu))`.
/// `mu = 0` is rejected; callers handle an exactly-zero rate separately.
pub fn chernoff_tail(mu: f64, eta: f64, n: u64, side: Tail) -> Result<f64> {
    if mu == 0.0 {
        return Err(Error::DomainError("mu = 0 makes the Chernoff bound degenerate"));
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::OutOfRange {
            field: "mu",
            value: mu,
            expected: "(0, 1]",
        });
    }
    if !(eta > 0.0) {
        return Err(Error::OutOfRange {
            field: "eta",
            value: eta,
            expected: "(0, inf)",
        });
    }
    if n == 0 {
        return Err(Error::DomainError("at least one trial is required"));
    }
    let denom = match side {
        Tail::Upper => 3.0 * mu,
        Tail::Lower => 2.0 * mu,
    };
    Ok((-(n as f64) * eta * eta / denom).exp())
}
