//! Seeded scenario generator for end-to-end checks of the pipeline.
//!
//! A Gaussian random walk plays the role of the risk factor. For every
//! (initialization date, horizon) pair the generator draws `forecast_paths`
//! terminal increments from the model, looks up the realized increment of a
//! single "true" path, and records the PIT of the realization within the
//! forecast sample. The realized path can be given a larger volatility than
//! the forecasting model (`misspecification > 1`) to produce PIT series that a
//! uniformity test should reject.
//!
//! All randomness comes from ChaCha8 with a 64-bit stream id, so every
//! forecast sample and every 256-day block of the realized path has its own
//! independent, addressable substream:
//!
//! * forecast for (date, horizon): stream `day_number << 24 | horizon_days`
//! * realized path block `b`: stream `1 << 63 | b`
//!
//! where `day_number` counts days from 0001-01-01. Adding dates or horizons
//! never changes the values already produced for the others.

use chrono::{Datelike, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::backtest::{bucket_nonoverlapping, pit_transform, Horizon, PitObservation};
use crate::error::{Error, Result};
use crate::uniformity::{self, TestKind};

const PATH_BLOCK_DAYS: i64 = 256;
const REALIZED_STREAM_TAG: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Model {
    /// Arithmetic Brownian motion on a daily grid.
    #[default]
    GaussianRandomWalk,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub model: Model,
    pub risk_factor: String,
    /// Expected change per day.
    pub drift: f64,
    /// Standard deviation of the daily change.
    pub volatility: f64,
    pub calendar: Vec<NaiveDate>,
    pub horizons: Vec<Horizon>,
    pub forecast_paths: usize,
    pub seed: u64,
    /// Multiplier on the realized path's volatility; 1.0 is well specified.
    pub misspecification: f64,
}

impl ScenarioSpec {
    /// A well-specified driftless walk with daily volatility 1%, 99 forecast
    /// paths and seed 0.
    pub fn new(calendar: Vec<NaiveDate>, horizons: Vec<Horizon>) -> Self {
        ScenarioSpec {
            model: Model::GaussianRandomWalk,
            risk_factor: "SYNTH".to_string(),
            drift: 0.0,
            volatility: 0.01,
            calendar,
            horizons,
            forecast_paths: 99,
            seed: 0,
            misspecification: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.calendar.is_empty() {
            return Err(Error::domain("scenario calendar is empty"));
        }
        if self.horizons.is_empty() {
            return Err(Error::domain("scenario has no horizons"));
        }
        if !(self.volatility.is_finite() && self.volatility > 0.0) {
            return Err(Error::invalid(format!(
                "volatility must be positive, got {}",
                self.volatility
            )));
        }
        if !self.drift.is_finite() {
            return Err(Error::invalid("drift must be finite"));
        }
        if self.forecast_paths < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 forecast paths, got {}",
                self.forecast_paths
            )));
        }
        if !(self.misspecification.is_finite() && self.misspecification > 0.0) {
            return Err(Error::invalid(format!(
                "misspecification must be positive, got {}",
                self.misspecification
            )));
        }
        Ok(())
    }
}

/// Dates `start, start + step, ...` up to and including `end`.
pub fn regular_calendar(
    start: NaiveDate,
    end: NaiveDate,
    step_days: u32,
) -> Result<Vec<NaiveDate>> {
    if step_days == 0 {
        return Err(Error::invalid("calendar step must be at least one day"));
    }
    if end < start {
        return Err(Error::invalid(format!(
            "calendar end {end} precedes start {start}"
        )));
    }
    let step = Horizon::from_days(step_days)?;
    let mut dates = Vec::new();
    let mut d = start;
    while d <= end {
        dates.push(d);
        match step.after(d) {
            Some(next) => d = next,
            None => break,
        }
    }
    Ok(dates)
}

fn day_number(date: NaiveDate) -> i64 {
    i64::from(date.num_days_from_ce())
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Cumulative sum of standardized daily shocks over `[first_day, last_day]`,
/// indexed by `day - first_day`. Entry 0 is zero.
fn realized_shock_path(seed: u64, first_day: i64, last_day: i64) -> Vec<f64> {
    let len = (last_day - first_day) as usize + 1;
    let mut path = Vec::with_capacity(len);
    path.push(0.0);
    let mut level = 0.0;
    let mut day = first_day + 1;
    while day <= last_day {
        let block = day.div_euclid(PATH_BLOCK_DAYS);
        let mut rng = stream(seed, REALIZED_STREAM_TAG | block as u64);
        // skip to this day's position within the block
        for _ in 0..day.rem_euclid(PATH_BLOCK_DAYS) {
            let _: f64 = rng.sample(StandardNormal);
        }
        let block_end = ((block + 1) * PATH_BLOCK_DAYS - 1).min(last_day);
        while day <= block_end {
            let shock: f64 = rng.sample(StandardNormal);
            level += shock;
            path.push(level);
            day += 1;
        }
    }
    path
}

/// PIT observations for every (calendar date, horizon), ordered by date then
/// horizon. Identical specs give identical output.
pub fn generate(spec: &ScenarioSpec) -> Result<Vec<PitObservation>> {
    spec.validate()?;
    let mut calendar = spec.calendar.clone();
    calendar.sort();
    calendar.dedup();
    let mut horizons = spec.horizons.clone();
    horizons.sort();
    horizons.dedup();

    let first_day = day_number(calendar[0]);
    let longest = i64::from(horizons.last().expect("validated non-empty").days());
    let last_day = day_number(*calendar.last().expect("validated non-empty")) + longest;
    let shocks = realized_shock_path(spec.seed, first_day, last_day);
    let realized_vol = spec.volatility * spec.misspecification;

    let mut forecast = vec![0.0; spec.forecast_paths];
    let mut out = Vec::with_capacity(calendar.len() * horizons.len());
    for &date in &calendar {
        let day = day_number(date);
        for &horizon in &horizons {
            let h = i64::from(horizon.days());
            let start = (day - first_day) as usize;
            let end = start + h as usize;
            let drift = spec.drift * h as f64;
            let realized = drift + realized_vol * (shocks[end] - shocks[start]);

            let scale = spec.volatility * (h as f64).sqrt();
            let mut rng = stream(spec.seed, ((day as u64) << 24) | u64::from(horizon.days()));
            for x in forecast.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *x = drift + scale * z;
            }
            let pit = pit_transform(realized, &forecast)?;
            out.push(PitObservation::new(
                &spec.risk_factor,
                date,
                horizon,
                pit.value(),
            )?);
        }
    }
    Ok(out)
}

/// Repeated backtests of independent synthetic series of a fixed length.
///
/// Replication `r` uses seed `seed + r`, so two runs that differ only in
/// `misspecification` see the same shocks (common random numbers).
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    /// Non-overlapping observations per series.
    pub sample_size: usize,
    pub replications: usize,
    pub horizon: Horizon,
    pub forecast_paths: usize,
    pub misspecification: f64,
    pub test: TestKind,
    pub seed: u64,
}

impl Replication {
    /// Well-specified two-week series with 99 forecast paths, tested with AD.
    pub fn new(sample_size: usize, replications: usize) -> Self {
        Replication {
            sample_size,
            replications,
            horizon: Horizon::TWO_WEEKS,
            forecast_paths: 99,
            misspecification: 1.0,
            test: TestKind::AndersonDarling,
            seed: 0,
        }
    }
}

/// Raw uniformity-test p-values, one per replication.
///
/// Each series starts on 2000-01-01 with initialization dates exactly one
/// horizon apart, and goes through the same PIT, bucketing and testing path
/// as real data.
pub fn replicate_pvalues(run: &Replication) -> Result<Vec<f64>> {
    if run.sample_size == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    let start = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date");
    let mut calendar = Vec::with_capacity(run.sample_size);
    let mut d = start;
    for _ in 0..run.sample_size {
        calendar.push(d);
        d = run
            .horizon
            .after(d)
            .ok_or_else(|| Error::invalid("calendar runs past the last representable date"))?;
    }
    let mut spec = ScenarioSpec::new(calendar, vec![run.horizon]);
    spec.forecast_paths = run.forecast_paths;
    spec.misspecification = run.misspecification;

    (0..run.replications as u64)
        .map(|r| {
            spec.seed = run.seed.wrapping_add(r);
            let obs = generate(&spec)?;
            let series = bucket_nonoverlapping(&obs, run.horizon)
                .pop()
                .expect("one risk factor");
            debug_assert_eq!(series.len(), run.sample_size);
            Ok(uniformity::run_test(run.test, &series.sample()?)
                .pvalue
                .value())
        })
        .collect()
}
