//! Credibility-weighted assessment of small-sample backtests.
//!
//! Risk-model forecasts are backtested by mapping each realized value to its
//! quantile within the forecast distribution (the PIT) and testing the PIT
//! series for uniformity. Long horizons on non-overlapping dates leave only a
//! handful of observations, so this crate attaches a classical credibility
//! weight `Z` to each test and reports the p-value lower bound `p·Z`.
//!
//! Modules:
//!
//! * [`statdist`]: standard normal CDF/quantile, uniform moments.
//! * [`credibility`]: full-credibility criteria, weights, p-value adjustment.
//! * [`uniformity`]: Anderson-Darling, Kolmogorov-Smirnov and Cramér-von Mises tests.
//! * [`backtest`]: PIT ingestion, non-overlapping bucketing, verdicts.
//! * [`synthetic`]: seeded scenario generator producing PIT observations.
//! * [`report`]: credibility tables and verdict matrices as CSV or text.
//! * [`cli`]: the `credback` command line.

pub mod backtest;
pub mod cli;
pub mod credibility;
pub mod error;
pub mod report;
pub mod statdist;
pub mod synthetic;
pub mod uniformity;

pub use error::{Error, Result};
pub use statdist::{DistributionMoments, Probability};
