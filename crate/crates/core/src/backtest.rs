//! The backtesting pipeline.
//!
//! PIT observations are grouped by risk factor and forecast horizon, thinned
//! to non-overlapping initialization dates, tested for uniformity, and the
//! resulting p-value is shrunk by its credibility weight. A model forecast is
//! accepted when the adjusted p-value stays at or above the warning level.
//!
//! Published studies often ship only the test p-values and sample sizes, so
//! [`run_portfolio`] also accepts pre-computed rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use chrono::{Days, NaiveDate};
use serde::Deserialize;

use crate::credibility::{self, CredibilityQuery, CredibilityWeight, WeightMethod};
use crate::error::{Error, Result};
use crate::statdist::Probability;
use crate::uniformity::{self, Sample01, TestKind};

/// Warning level on the adjusted p-value.
pub const DEFAULT_THRESHOLD: f64 = 0.01;

/// Header of the PIT observation CSV.
pub const PIT_HEADER: [&str; 4] = ["risk_factor", "init_date", "horizon", "pit"];
/// Header of the pre-computed p-value CSV.
pub const PVALUE_HEADER: [&str; 4] = ["risk_factor", "horizon", "pvalue", "n"];
/// Header of the verdict CSV.
pub const VERDICT_HEADER: [&str; 9] = [
    "risk_factor",
    "horizon",
    "n",
    "test",
    "raw_pvalue",
    "criterion_N",
    "z",
    "adjusted_pvalue",
    "decision",
];

/// A forecast horizon in calendar days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Horizon(u32);

const CANONICAL_HORIZONS: [(&str, u32); 7] = [
    ("2w", 14),
    ("1m", 30),
    ("3m", 91),
    ("6m", 182),
    ("1y", 365),
    ("18m", 547),
    ("2y", 730),
];

impl Horizon {
    pub const TWO_WEEKS: Horizon = Horizon(14);
    pub const ONE_MONTH: Horizon = Horizon(30);
    pub const THREE_MONTHS: Horizon = Horizon(91);
    pub const SIX_MONTHS: Horizon = Horizon(182);
    pub const ONE_YEAR: Horizon = Horizon(365);
    pub const EIGHTEEN_MONTHS: Horizon = Horizon(547);
    pub const TWO_YEARS: Horizon = Horizon(730);

    pub fn from_days(days: u32) -> Result<Self> {
        if days == 0 {
            return Err(Error::invalid("horizon must be at least one day"));
        }
        Ok(Horizon(days))
    }

    pub fn days(self) -> u32 {
        self.0
    }

    /// The canonical label (`2w`, `1m`, ...) when the day count has one.
    pub fn label(self) -> Option<&'static str> {
        CANONICAL_HORIZONS
            .iter()
            .find(|(_, d)| *d == self.0)
            .map(|(l, _)| *l)
    }

    /// `date + horizon`, `None` on calendar overflow.
    pub fn after(self, date: NaiveDate) -> Option<NaiveDate> {
        date.checked_add_days(Days::new(u64::from(self.0)))
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(label) => f.write_str(label),
            None => write!(f, "{}", self.0),
        }
    }
}

impl FromStr for Horizon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        if let Some((_, days)) = CANONICAL_HORIZONS.iter().find(|(l, _)| *l == lower) {
            return Ok(Horizon(*days));
        }
        let digits = lower.strip_suffix('d').unwrap_or(&lower);
        match digits.parse::<u32>() {
            Ok(days) => Horizon::from_days(days),
            Err(_) => Err(Error::invalid(format!(
                "unknown horizon `{s}` (expected 2w, 1m, 3m, 6m, 1y, 18m, 2y or a day count)"
            ))),
        }
    }
}

/// One realized-vs-forecast comparison, already mapped to its quantile.
#[derive(Debug, Clone, PartialEq)]
pub struct PitObservation {
    pub risk_factor: String,
    pub init_date: NaiveDate,
    pub horizon: Horizon,
    pub pit: f64,
}

impl PitObservation {
    pub fn new(
        risk_factor: impl Into<String>,
        init_date: NaiveDate,
        horizon: Horizon,
        pit: f64,
    ) -> Result<Self> {
        if !(pit.is_finite() && (0.0..=1.0).contains(&pit)) {
            return Err(Error::invalid(format!("PIT value {pit} is outside [0, 1]")));
        }
        Ok(PitObservation {
            risk_factor: risk_factor.into(),
            init_date,
            horizon,
            pit,
        })
    }
}

/// The non-overlapping PIT series for one (risk factor, horizon).
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonSeries {
    pub risk_factor: String,
    pub horizon: Horizon,
    /// Retained initialization dates, ascending.
    pub dates: Vec<NaiveDate>,
    /// PIT values aligned with `dates`.
    pub pits: Vec<f64>,
}

impl HorizonSeries {
    pub fn len(&self) -> usize {
        self.pits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pits.is_empty()
    }

    pub fn sample(&self) -> Result<Sample01> {
        Sample01::new(self.pits.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Decision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accept" => Ok(Decision::Accept),
            "reject" => Ok(Decision::Reject),
            _ => Err(Error::invalid(format!("unknown decision `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BacktestConfig {
    pub query: CredibilityQuery,
    pub method: WeightMethod,
    pub gamma: f64,
    pub test: TestKind,
    pub threshold: f64,
}

impl Default for BacktestConfig {
    fn default() -> Self {
        BacktestConfig {
            query: CredibilityQuery::default(),
            method: WeightMethod::Linear,
            gamma: credibility::DEFAULT_GAMMA,
            test: TestKind::AndersonDarling,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl BacktestConfig {
    pub fn with_method(mut self, method: WeightMethod) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::invalid(format!(
                "threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::invalid(format!(
                "gamma must be non-negative, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Full-credibility criterion `N` for a uniform PIT series.
    pub fn criterion(&self) -> u64 {
        credibility::full_credibility_uniform(&self.query).rounded
    }

    pub fn weight(&self, n: u64) -> Result<CredibilityWeight> {
        credibility::credibility_weight(self.method, n, self.criterion(), self.gamma)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestVerdict {
    pub risk_factor: String,
    pub horizon: Horizon,
    pub n: u64,
    pub test: TestKind,
    pub raw_pvalue: Probability,
    pub criterion_n: u64,
    pub z: CredibilityWeight,
    pub adjusted_pvalue: Probability,
    pub decision: Decision,
}

/// Empirical quantile of `realized` within a forecast sample, by the mid-rank
/// estimator `(#{x < r} + ½#{x = r} + ½) / (m + 1)`. The sample need not be
/// sorted. The result always lies strictly inside (0, 1).
pub fn pit_transform(realized: f64, forecast_sample: &[f64]) -> Result<Probability> {
    if forecast_sample.is_empty() {
        return Err(Error::domain("PIT needs a non-empty forecast sample"));
    }
    if realized.is_nan() {
        return Err(Error::invalid("realized value is NaN"));
    }
    let (mut below, mut tied) = (0usize, 0usize);
    for &x in forecast_sample {
        if x < realized {
            below += 1;
        } else if x == realized {
            tied += 1;
        }
    }
    let m = forecast_sample.len() as f64;
    Probability::new((below as f64 + 0.5 * tied as f64 + 0.5) / (m + 1.0))
}

/// Greedy earliest-first thinning of ascending dates: keep the first date,
/// then each next date at least `horizon` days after the last kept one.
/// Returns indices into `dates`.
pub fn select_nonoverlapping(dates: &[NaiveDate], horizon: Horizon) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut next_allowed: Option<NaiveDate> = None;
    for (i, &d) in dates.iter().enumerate() {
        if next_allowed.is_none_or(|t| d >= t) {
            kept.push(i);
            // past the calendar's end nothing else can be kept
            next_allowed = Some(horizon.after(d).unwrap_or(NaiveDate::MAX));
            if next_allowed == Some(NaiveDate::MAX) {
                break;
            }
        }
    }
    kept
}

/// One non-overlapping series per risk factor for `horizon`.
///
/// Every risk factor present in `observations` gets a series, possibly empty
/// when it has no observation at this horizon. Duplicate (risk factor, date)
/// pairs keep the first occurrence. Output is ordered by risk factor.
pub fn bucket_nonoverlapping(
    observations: &[PitObservation],
    horizon: Horizon,
) -> Vec<HorizonSeries> {
    let mut by_factor: BTreeMap<&str, BTreeMap<NaiveDate, f64>> = BTreeMap::new();
    for obs in observations {
        let entry = by_factor.entry(obs.risk_factor.as_str()).or_default();
        if obs.horizon == horizon {
            entry.entry(obs.init_date).or_insert(obs.pit);
        }
    }
    by_factor
        .into_iter()
        .map(|(factor, points)| {
            let (all_dates, all_pits): (Vec<NaiveDate>, Vec<f64>) = points.into_iter().unzip();
            let kept = select_nonoverlapping(&all_dates, horizon);
            HorizonSeries {
                risk_factor: factor.to_string(),
                horizon,
                dates: kept.iter().map(|&i| all_dates[i]).collect(),
                pits: kept.iter().map(|&i| all_pits[i]).collect(),
            }
        })
        .collect()
}

/// Credibility-adjusts a known p-value from a sample of size `n`.
pub fn verdict_from_pvalue(
    risk_factor: impl Into<String>,
    horizon: Horizon,
    raw_pvalue: Probability,
    n: u64,
    cfg: &BacktestConfig,
) -> Result<BacktestVerdict> {
    if n == 0 {
        return Err(Error::domain("cannot backtest an empty series"));
    }
    cfg.validate()?;
    let z = cfg.weight(n)?;
    let adjusted_pvalue = credibility::adjust_pvalue(raw_pvalue, &z);
    let decision = if adjusted_pvalue.value() >= cfg.threshold {
        Decision::Accept
    } else {
        Decision::Reject
    };
    Ok(BacktestVerdict {
        risk_factor: risk_factor.into(),
        horizon,
        n,
        test: cfg.test,
        raw_pvalue,
        criterion_n: z.criterion,
        z,
        adjusted_pvalue,
        decision,
    })
}

/// Tests one series and credibility-adjusts the result.
pub fn run_backtest(series: &HorizonSeries, cfg: &BacktestConfig) -> Result<BacktestVerdict> {
    if series.is_empty() {
        return Err(Error::domain(format!(
            "no observations for {} at horizon {}",
            series.risk_factor, series.horizon
        )));
    }
    let outcome = uniformity::run_test(cfg.test, &series.sample()?);
    verdict_from_pvalue(
        &series.risk_factor,
        series.horizon,
        outcome.pvalue,
        outcome.n,
        cfg,
    )
}

/// A pre-computed uniformity-test result.
#[derive(Debug, Clone, PartialEq)]
pub struct PvalueRow {
    pub risk_factor: String,
    pub horizon: Horizon,
    pub pvalue: Probability,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PortfolioInput {
    Observations(Vec<PitObservation>),
    Pvalues(Vec<PvalueRow>),
}

/// A record that could not be processed; the rest of the batch continues.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    /// 1-based line in the source file, header included; 0 when not from a file.
    pub line: u64,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            f.write_str(&self.message)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PortfolioReport {
    pub verdicts: Vec<BacktestVerdict>,
    pub errors: Vec<RowError>,
}

/// One verdict per (risk factor, horizon), sorted by that key.
pub fn run_portfolio(input: &PortfolioInput, cfg: &BacktestConfig) -> Result<PortfolioReport> {
    cfg.validate()?;
    let mut report = PortfolioReport::default();
    match input {
        PortfolioInput::Pvalues(rows) => {
            let mut seen = BTreeSet::new();
            for row in rows {
                if !seen.insert((row.risk_factor.clone(), row.horizon)) {
                    report.errors.push(RowError {
                        line: 0,
                        message: format!("duplicate row for {} {}", row.risk_factor, row.horizon),
                    });
                    continue;
                }
                match verdict_from_pvalue(&row.risk_factor, row.horizon, row.pvalue, row.n, cfg) {
                    Ok(v) => report.verdicts.push(v),
                    Err(e) => report.errors.push(RowError {
                        line: 0,
                        message: format!("{} {}: {e}", row.risk_factor, row.horizon),
                    }),
                }
            }
        }
        PortfolioInput::Observations(obs) => {
            let horizons: BTreeSet<Horizon> = obs.iter().map(|o| o.horizon).collect();
            for horizon in horizons {
                for series in bucket_nonoverlapping(obs, horizon) {
                    if series.is_empty() {
                        continue;
                    }
                    report.verdicts.push(run_backtest(&series, cfg)?);
                }
            }
        }
    }
    report
        .verdicts
        .sort_by(|a, b| (&a.risk_factor, a.horizon).cmp(&(&b.risk_factor, b.horizon)));
    Ok(report)
}

// ---------------------------------------------------------------------------
// CSV

#[derive(Debug, Deserialize)]
struct PitRecord {
    risk_factor: String,
    init_date: String,
    horizon: String,
    pit: String,
}

#[derive(Debug, Deserialize)]
struct PvalueRecord {
    risk_factor: String,
    horizon: String,
    pvalue: String,
    n: String,
}

/// Which of the two input layouts a CSV header describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputLayout {
    Pit,
    Pvalue,
}

fn header_matches(headers: &csv::StringRecord, expected: &[&str]) -> bool {
    headers.len() == expected.len() && headers.iter().zip(expected).all(|(h, e)| h.trim() == *e)
}

fn detect_layout(headers: &csv::StringRecord) -> Result<InputLayout> {
    if header_matches(headers, &PIT_HEADER) {
        Ok(InputLayout::Pit)
    } else if header_matches(headers, &PVALUE_HEADER) {
        Ok(InputLayout::Pvalue)
    } else {
        Err(Error::Row {
            line: 1,
            message: format!(
                "unrecognized header `{}`; expected `{}` or `{}`",
                headers.iter().collect::<Vec<_>>().join(","),
                PIT_HEADER.join(","),
                PVALUE_HEADER.join(",")
            ),
        })
    }
}

fn parse_pit_record(rec: PitRecord) -> Result<PitObservation, String> {
    let date = NaiveDate::parse_from_str(rec.init_date.trim(), "%Y-%m-%d")
        .map_err(|e| format!("bad init_date `{}`: {e}", rec.init_date))?;
    let horizon: Horizon = rec.horizon.parse().map_err(|e: Error| e.to_string())?;
    let pit: f64 = rec
        .pit
        .trim()
        .parse()
        .map_err(|_| format!("bad pit `{}`", rec.pit))?;
    PitObservation::new(rec.risk_factor.trim(), date, horizon, pit).map_err(|e| e.to_string())
}

fn parse_pvalue_record(rec: PvalueRecord) -> Result<PvalueRow, String> {
    let horizon: Horizon = rec.horizon.parse().map_err(|e: Error| e.to_string())?;
    let p: f64 = rec
        .pvalue
        .trim()
        .parse()
        .map_err(|_| format!("bad pvalue `{}`", rec.pvalue))?;
    let pvalue = Probability::new(p).map_err(|e| e.to_string())?;
    let n: u64 = rec
        .n
        .trim()
        .parse()
        .map_err(|_| format!("bad sample size `{}`", rec.n))?;
    if n == 0 {
        return Err("sample size must be at least 1".into());
    }
    Ok(PvalueRow {
        risk_factor: rec.risk_factor.trim().to_string(),
        horizon,
        pvalue,
        n,
    })
}

fn read_records<R, Rec, T>(
    rdr: &mut csv::Reader<R>,
    parse: impl Fn(Rec) -> Result<T, String>,
) -> (Vec<T>, Vec<RowError>)
where
    R: Read,
    Rec: for<'de> Deserialize<'de>,
{
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (i, result) in rdr.deserialize::<Rec>().enumerate() {
        let line = result
            .as_ref()
            .err()
            .and_then(|e| e.position().map(|p| p.line()))
            .unwrap_or(i as u64 + 2);
        match result.map_err(|e| e.to_string()).and_then(&parse) {
            Ok(row) => rows.push(row),
            Err(message) => errors.push(RowError { line, message }),
        }
    }
    (rows, errors)
}

/// Reads either input layout, detected from the header. Malformed rows are
/// returned as errors alongside the parsed input.
pub fn read_input_csv<R: Read>(reader: R) -> Result<(PortfolioInput, Vec<RowError>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let layout = detect_layout(rdr.headers()?)?;
    Ok(match layout {
        InputLayout::Pit => {
            let (rows, errors) = read_records(&mut rdr, parse_pit_record);
            (PortfolioInput::Observations(rows), errors)
        }
        InputLayout::Pvalue => {
            let (rows, errors) = read_records(&mut rdr, parse_pvalue_record);
            (PortfolioInput::Pvalues(rows), errors)
        }
    })
}

pub fn read_pit_csv<R: Read>(reader: R) -> Result<(Vec<PitObservation>, Vec<RowError>)> {
    match read_input_csv(reader)? {
        (PortfolioInput::Observations(rows), errors) => Ok((rows, errors)),
        _ => Err(Error::Row {
            line: 1,
            message: format!("expected header `{}`", PIT_HEADER.join(",")),
        }),
    }
}

pub fn read_pvalue_csv<R: Read>(reader: R) -> Result<(Vec<PvalueRow>, Vec<RowError>)> {
    match read_input_csv(reader)? {
        (PortfolioInput::Pvalues(rows), errors) => Ok((rows, errors)),
        _ => Err(Error::Row {
            line: 1,
            message: format!("expected header `{}`", PVALUE_HEADER.join(",")),
        }),
    }
}

pub fn write_pit_csv<W: Write>(writer: W, observations: &[PitObservation]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(PIT_HEADER)?;
    for o in observations {
        wtr.write_record([
            o.risk_factor.clone(),
            o.init_date.format("%Y-%m-%d").to_string(),
            o.horizon.to_string(),
            o.pit.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes verdicts; probabilities and weights use shortest round-trip decimals.
pub fn write_verdict_csv<W: Write>(writer: W, verdicts: &[BacktestVerdict]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(VERDICT_HEADER)?;
    for v in verdicts {
        wtr.write_record([
            v.risk_factor.clone(),
            v.horizon.to_string(),
            v.n.to_string(),
            v.test.to_string(),
            v.raw_pvalue.to_string(),
            v.criterion_n.to_string(),
            v.z.value.to_string(),
            v.adjusted_pvalue.to_string(),
            v.decision.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
