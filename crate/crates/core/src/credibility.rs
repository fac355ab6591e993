//! Classical (limited-fluctuation) credibility.
//!
//! A sample earns full credibility once its size reaches the criterion at
//! which the observed mean falls within `±k` of the true mean with
//! probability `P`. Under the normal approximation this gives
//!
//! ```text
//! y  = Φ⁻¹((1 + P) / 2)
//! n₀ = y² / k²                 (Poisson frequency)
//! N  = n₀ · (σ/μ)²             (any distribution with moments μ, σ²)
//! N  = n₀ / 3                  (uniform on (0,1), since CV² = 1/3)
//! ```
//!
//! Partial credibility below the criterion is either linear, `Z = n/N`, or
//! the smoother Longley-Cook form `Z = (1+γ)n / (n + γN)`. Both are capped
//! at 1. A test p-value is then shrunk to the lower confidence bound `p·Z`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::statdist::{self, DistributionMoments, Probability};

/// Coverage used when none is configured: `P = 90%`.
pub const DEFAULT_COVERAGE: f64 = 0.90;
/// Relative half-width used when none is configured: `k = 10%`.
pub const DEFAULT_HALF_WIDTH: f64 = 0.10;
/// Longley-Cook smoothing constant.
pub const DEFAULT_GAMMA: f64 = 0.30;

/// A target coverage probability `P` and relative half-width `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CredibilityQuery {
    coverage: Probability,
    half_width: f64,
}

impl CredibilityQuery {
    pub fn new(coverage: f64, half_width: f64) -> Result<Self> {
        if !(coverage > 0.0 && coverage < 1.0) {
            return Err(Error::invalid(format!(
                "coverage P must lie in (0, 1), got {coverage}"
            )));
        }
        if !(half_width > 0.0 && half_width <= 1.0) {
            return Err(Error::invalid(format!(
                "half-width k must lie in (0, 1], got {half_width}"
            )));
        }
        Ok(CredibilityQuery {
            coverage: Probability::new(coverage)?,
            half_width,
        })
    }

    pub fn coverage(&self) -> Probability {
        self.coverage
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }
}

impl Default for CredibilityQuery {
    fn default() -> Self {
        CredibilityQuery {
            coverage: Probability::new(DEFAULT_COVERAGE).expect("constant in range"),
            half_width: DEFAULT_HALF_WIDTH,
        }
    }
}

/// Sample size needed for full credibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullCredibilityCriterion {
    /// Unrounded criterion.
    pub raw: f64,
    /// Nearest integer to `raw`, never below 1.
    pub rounded: u64,
    /// Normal quantile `Φ⁻¹((1+P)/2)` the criterion was built from.
    pub y: f64,
}

impl FullCredibilityCriterion {
    fn from_raw(raw: f64, y: f64) -> Self {
        FullCredibilityCriterion {
            raw,
            rounded: (raw.round() as u64).max(1),
            y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightMethod {
    Linear,
    LongleyCook,
}

impl WeightMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            WeightMethod::Linear => "linear",
            WeightMethod::LongleyCook => "longley-cook",
        }
    }
}

impl fmt::Display for WeightMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(WeightMethod::Linear),
            "longley-cook" | "longley_cook" | "longleycook" | "lc" => Ok(WeightMethod::LongleyCook),
            other => Err(Error::invalid(format!("unknown weight method `{other}`"))),
        }
    }
}

/// A credibility weight `Z` together with the inputs that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CredibilityWeight {
    /// `Z` capped to `[0, 1]`.
    pub value: f64,
    /// The formula value before capping. Published credibility tables print
    /// this (e.g. 367%), so it is kept for reporting.
    pub unclamped: f64,
    pub method: WeightMethod,
    /// Only meaningful for [`WeightMethod::LongleyCook`]; zero otherwise.
    pub gamma: f64,
    pub sample_size: u64,
    pub criterion: u64,
}

impl CredibilityWeight {
    /// Full credibility, for callers that want an unadjusted p-value.
    pub fn full(sample_size: u64, criterion: u64) -> Self {
        CredibilityWeight {
            value: 1.0,
            unclamped: 1.0,
            method: WeightMethod::Linear,
            gamma: 0.0,
            sample_size,
            criterion,
        }
    }
}

/// `y = Φ⁻¹((1 + P) / 2)`.
pub fn y_for_coverage(q: &CredibilityQuery) -> f64 {
    statdist::quantile_unchecked((1.0 + q.coverage.value()) / 2.0)
}

fn check_coverage_args(n: u64, k: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(
            "coverage probability needs a sample size of at least 1",
        ));
    }
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::invalid(format!(
            "half-width k must lie in (0, 1], got {k}"
        )));
    }
    Ok(())
}

fn two_sided(z: f64) -> Probability {
    // 2Φ(z) - 1 == 1 - 2(1 - Φ(z)); the upper tail is exact for large z.
    let (_, upper) = statdist::phi_both(z);
    Probability::saturating(1.0 - 2.0 * upper)
}

/// Probability that a Poisson count with mean `n` falls within `±k·n` of its
/// mean, under the normal approximation: `2Φ(k√n) − 1`.
pub fn coverage_probability_poisson(n: u64, k: f64) -> Result<Probability> {
    check_coverage_args(n, k)?;
    Ok(two_sided(k * (n as f64).sqrt()))
}

/// Probability that the mean of `n` uniform(0,1) draws falls within `±k/2`
/// of 1/2: `2Φ(k√(3n)) − 1`.
pub fn coverage_probability_uniform(n: u64, k: f64) -> Result<Probability> {
    check_coverage_args(n, k)?;
    Ok(two_sided(k * (3.0 * n as f64).sqrt()))
}

/// `n₀ = y² / k²`.
pub fn full_credibility_poisson(q: &CredibilityQuery) -> FullCredibilityCriterion {
    let y = y_for_coverage(q);
    let ratio = y / q.half_width;
    FullCredibilityCriterion::from_raw(ratio * ratio, y)
}

/// `N = (y/k)² · CV²` for a statistic with the given moments.
pub fn full_credibility_general(
    q: &CredibilityQuery,
    moments: &DistributionMoments,
) -> Result<FullCredibilityCriterion> {
    let cv2 = moments.cv_squared()?;
    let base = full_credibility_poisson(q);
    Ok(FullCredibilityCriterion::from_raw(base.raw * cv2, base.y))
}

/// `N = n₀ / 3`, the criterion for a mean of uniform(0,1) values.
pub fn full_credibility_uniform(q: &CredibilityQuery) -> FullCredibilityCriterion {
    let base = full_credibility_poisson(q);
    FullCredibilityCriterion::from_raw(base.raw / 3.0, base.y)
}

/// `Z = min(1, n/N)`.
pub fn linear_credibility(n: u64, criterion: u64) -> Result<CredibilityWeight> {
    if criterion == 0 {
        return Err(Error::domain(
            "full-credibility criterion must be at least 1",
        ));
    }
    let unclamped = n as f64 / criterion as f64;
    Ok(CredibilityWeight {
        value: unclamped.min(1.0),
        unclamped,
        method: WeightMethod::Linear,
        gamma: 0.0,
        sample_size: n,
        criterion,
    })
}

/// `Z = min(1, (1+γ)n / (n + γN))`.
pub fn longley_cook_credibility(n: u64, criterion: u64, gamma: f64) -> Result<CredibilityWeight> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::invalid(format!(
            "gamma must be finite and non-negative, got {gamma}"
        )));
    }
    if criterion == 0 {
        return Err(Error::domain(
            "full-credibility criterion must be at least 1",
        ));
    }
    let (nf, crit) = (n as f64, criterion as f64);
    let den = nf + gamma * crit;
    if den <= 0.0 {
        return Err(Error::domain(
            "Longley-Cook weight undefined for n = 0 and gamma = 0",
        ));
    }
    let unclamped = (1.0 + gamma) * nf / den;
    Ok(CredibilityWeight {
        value: unclamped.min(1.0),
        unclamped,
        method: WeightMethod::LongleyCook,
        gamma,
        sample_size: n,
        criterion,
    })
}

/// Dispatches on `method`; `gamma` is ignored for the linear rule.
pub fn credibility_weight(
    method: WeightMethod,
    n: u64,
    criterion: u64,
    gamma: f64,
) -> Result<CredibilityWeight> {
    match method {
        WeightMethod::Linear => linear_credibility(n, criterion),
        WeightMethod::LongleyCook => longley_cook_credibility(n, criterion, gamma),
    }
}

/// Lower confidence bound of the p-value, `p · Z`.
pub fn adjust_pvalue(pvalue: Probability, z: &CredibilityWeight) -> Probability {
    Probability::saturating(pvalue.value() * z.value)
}

/// The symmetric band `p · (1 ∓ (1 − Z))` around a p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvalueBand {
    pub lower: Probability,
    /// `p · (2 − Z)`, capped at 1. Reported only; decisions use `lower`.
    pub upper: Probability,
}

pub fn pvalue_band(pvalue: Probability, z: &CredibilityWeight) -> PvalueBand {
    PvalueBand {
        lower: adjust_pvalue(pvalue, z),
        upper: Probability::saturating(pvalue.value() * (2.0 - z.value)),
    }
}
