//! End to end from forecasts to verdicts: simulate forecasts and realizations,
//! map them to PIT values, keep non-overlapping dates per horizon, test for
//! uniformity and credibility-adjust the p-values.
//!
//! ```text
//! cargo run --example pit_pipeline
//! ```

use chrono::{Months, NaiveDate};
use credback::backtest::{
    bucket_nonoverlapping, pit_transform, run_backtest, write_verdict_csv, BacktestConfig, Horizon,
    PitObservation,
};
use credback::credibility::WeightMethod;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> credback::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2013);
    let start = NaiveDate::from_ymd_opt(2002, 1, 1).unwrap();
    let horizons = [
        Horizon::ONE_MONTH,
        Horizon::SIX_MONTHS,
        Horizon::ONE_YEAR,
        Horizon::TWO_YEARS,
    ];

    // A model that forecasts N(0, σ√h) while the world moves with 1.3σ.
    let daily_vol = 0.01;
    let mut observations = Vec::new();
    for month in 0..138 {
        let init = start + Months::new(month);
        for &h in &horizons {
            let sd = daily_vol * f64::from(h.days()).sqrt();
            let model = Normal::new(0.0, sd).unwrap();
            let world = Normal::new(0.0, 1.3 * sd).unwrap();
            let forecast: Vec<f64> = (0..500).map(|_| model.sample(&mut rng)).collect();
            let pit = pit_transform(world.sample(&mut rng), &forecast)?;
            observations.push(PitObservation::new("RATE-10Y", init, h, pit.value())?);
        }
    }

    let cfg = BacktestConfig::default().with_method(WeightMethod::LongleyCook);
    let mut verdicts = Vec::new();
    for &h in &horizons {
        for series in bucket_nonoverlapping(&observations, h) {
            verdicts.push(run_backtest(&series, &cfg)?);
        }
    }
    write_verdict_csv(std::io::stdout().lock(), &verdicts)
}
