//! Quantitative certification of black-box 0/1 properties.
//!
//! Given an oracle that samples a property with unknown success rate `p`,
//! a strategy answers whether `p <= theta` (Yes) or `p > theta + eta` (No)
//! with error probability at most `delta`, using far fewer samples than
//! estimating `p` directly.
//!
//! ```
//! use quantcert::{bernoulli, bincert, Execution, SeedSpec, ThresholdQuery, Verdict};
//!
//! let query = ThresholdQuery::new(0.1, 0.05, 0.01)?;
//! let report = bincert(&query, &bernoulli(0.5)?, SeedSpec::new(7), &Execution::default())?;
//! assert_eq!(report.verdict, Verdict::No);
//! # Ok::<(), quantcert::Error>(())
//! ```

pub mod bounds;
pub mod cli;
pub mod domain;
pub mod error;
pub mod nn;
pub mod oracle;
pub mod robustness;
pub mod seed;
pub mod sim;
pub mod strategy;
pub mod tester;

pub use domain::{InconclusiveReason, SampleTally, ThresholdQuery, Verdict};
pub use error::{Error, NnError, OracleError, OracleErrorKind, Result};
pub use nn::{load_model, Layer, Model};
pub use oracle::{bernoulli, compose, subprocess_oracle, Oracle};
pub use robustness::{adversarial_hardness, certify_density, HardnessSearch, Norm, RobustnessQuery};
pub use seed::SeedSpec;
pub use sim::{complexity_sweep, soundness_trial, SoundnessStats, SweepTable};
pub use strategy::{
    bincert, estimate_baseline, fixedcert, worst_case_budget, CertificationReport, StrategyKind,
};
pub use tester::{plan_tester, Execution, Limits, TesterPlan};
