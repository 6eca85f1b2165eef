//! Two-sample chi-squared homogeneity testing on `[0,1]` with a number of
//! cells that grows with the sample size.
//!
//! The library is organised around a small pipeline:
//!
//! * [`partition`] — cell partitions of `[0,1]` and the centered indicator
//!   basis built on them,
//! * [`density`] — piecewise-constant density models `1 + Σ θ_j φ_j`,
//!   sampling and alternative construction,
//! * [`statistics`] — cell counts and the test statistics `T1`, `T2`, `T3`,
//! * [`moments`] — exact single-observation moments and the theoretical
//!   mean/variance expansions of the statistics,
//! * [`estimators`] — plug-in variance and centering estimators,
//! * [`hypothesis`] — the decision rules `K1`, `K2`, `K3` and the one-sample
//!   goodness-of-fit test,
//! * [`power`] — asymptotic type II error predictions,
//! * [`montecarlo`] — a deterministic, parallel replication engine,
//! * [`oracle`] — brute-force enumeration oracles used for validation.
//!
//! Everything is deterministic given an explicit random stream; the Monte
//! Carlo engine produces identical output for any worker count.

pub mod cli;
pub mod density;
pub mod error;
pub mod estimators;
pub mod hypothesis;
pub mod moments;
pub mod montecarlo;
pub mod normal;
pub mod oracle;
pub mod partition;
pub mod power;
pub mod statistics;

pub use density::{AlternativePair, CellDensity, Norms};
pub use error::{Error, Result};
pub use estimators::EstimatedScale;
pub use hypothesis::{gof_test, run_test, TestKind, TestReport};
pub use moments::MomentReport;
pub use montecarlo::{run_experiment, ExperimentConfig, ExperimentResult};
pub use partition::Partition;
pub use power::{predict_beta, PowerPrediction};
pub use statistics::{tally, Functional, TwoSampleCounts, Weights};
