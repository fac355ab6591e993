//! Command-line front end.
//!
//! Every subcommand writes CSV by default so results can be piped into the
//! next one; `--format text` gives aligned tables for reading. Exit status is
//! 0 on success, 1 on a usage error and 2 on a data error (unreadable file,
//! bad header, or rows that had to be skipped).

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::backtest::{self, BacktestConfig, Horizon, PortfolioInput, RowError};
use crate::credibility::{self, CredibilityQuery, WeightMethod};
use crate::error::{Error, Result};
use crate::report::{self, Distribution, TableRequest};
use crate::synthetic::{self, Model, ScenarioSpec};
use crate::uniformity::TestKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "credback",
    version,
    about = "Credibility-weighted backtesting of risk-model forecasts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coverage, criterion and weight tables.
    #[command(subcommand)]
    Tables(TablesCommand),
    /// Credibility weight for one sample size.
    Weight(WeightArgs),
    /// Adjust precomputed p-values (risk_factor,horizon,pvalue,n).
    Adjust(BacktestArgs),
    /// Test PIT series for uniformity and adjust the p-values. Also accepts
    /// precomputed p-values.
    Backtest(BacktestArgs),
    /// Generate a synthetic PIT series (risk_factor,init_date,horizon,pit).
    Synth(SynthArgs),
}

#[derive(Debug, Subcommand)]
enum TablesCommand {
    /// Probability that the sample mean falls within ±k.
    Coverage(CoverageArgs),
    /// Full-credibility sample size.
    Criterion(CriterionArgs),
    /// Credibility weights for a fixed sample size.
    Weights(WeightsTableArgs),
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistArg {
    Normal,
    Uniform,
}

impl From<DistArg> for Distribution {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::Normal => Distribution::Normal,
            DistArg::Uniform => Distribution::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Linear,
    LongleyCook,
}

impl From<MethodArg> for WeightMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Linear => WeightMethod::Linear,
            MethodArg::LongleyCook => WeightMethod::LongleyCook,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TestArg {
    Ad,
    Ks,
    Cvm,
}

impl From<TestArg> for TestKind {
    fn from(t: TestArg) -> Self {
        match t {
            TestArg::Ad => TestKind::AndersonDarling,
            TestArg::Ks => TestKind::KolmogorovSmirnov,
            TestArg::Cvm => TestKind::CramerVonMises,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    GaussRw,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CoverageArgs {
    #[arg(long, value_enum)]
    dist: DistArg,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    /// Half-widths, comma separated (0.05 or 5%).
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction)]
    k: Option<Vec<f64>>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CriterionArgs {
    #[arg(long, value_enum)]
    dist: DistArg,
    /// Coverage probabilities, comma separated (0.9 or 90%).
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction)]
    p: Option<Vec<f64>>,
    /// Half-widths, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction)]
    k: Option<Vec<f64>>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct WeightsTableArgs {
    /// Backtest sample size.
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, default_value_t = credibility::DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    dist: DistArg,
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction)]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction)]
    k: Option<Vec<f64>>,
    /// Label small-sample linear blocks with the k values originally printed
    /// over them.
    #[arg(long)]
    paper_headers: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct WeightArgs {
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, default_value_t = credibility::DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = credibility::DEFAULT_COVERAGE, value_parser = parse_fraction)]
    p: f64,
    #[arg(long, default_value_t = credibility::DEFAULT_HALF_WIDTH, value_parser = parse_fraction)]
    k: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BacktestArgs {
    #[arg(long)]
    input: PathBuf,
    /// Uniformity test for PIT input.
    #[arg(long, value_enum, default_value = "ad")]
    test: TestArg,
    #[arg(long, default_value_t = credibility::DEFAULT_COVERAGE, value_parser = parse_fraction)]
    p: f64,
    #[arg(long, default_value_t = credibility::DEFAULT_HALF_WIDTH, value_parser = parse_fraction)]
    k: f64,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, default_value_t = credibility::DEFAULT_GAMMA)]
    gamma: f64,
    /// Accept when the adjusted p-value is at least this.
    #[arg(long, default_value_t = backtest::DEFAULT_THRESHOLD, value_parser = parse_fraction)]
    threshold: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    seed: u64,
    /// Forecast paths per (date, horizon).
    #[arg(long)]
    paths: usize,
    /// Horizons, comma separated (2w, 1m, 3m, 6m, 1y, 18m, 2y or days).
    #[arg(long, value_delimiter = ',', required = true)]
    horizons: Vec<Horizon>,
    #[arg(long)]
    start: NaiveDate,
    #[arg(long)]
    end: NaiveDate,
    /// Days between initialization dates.
    #[arg(long)]
    freq: u32,
    /// Realized volatility as a multiple of the model's.
    #[arg(long, default_value_t = 1.0)]
    misspec: f64,
    /// Daily drift.
    #[arg(long, default_value_t = 0.0)]
    drift: f64,
    /// Daily volatility.
    #[arg(long, default_value_t = 0.01)]
    vol: f64,
    #[arg(long, default_value = "SYNTH")]
    risk_factor: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// `0.9`, `90%` and ` 90 %` all give 0.9.
fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let (num, scale) = match t.strip_suffix('%') {
        Some(rest) => (rest.trim(), 100.0),
        None => (t, 1.0),
    };
    num.parse::<f64>()
        .map(|v| v / scale)
        .map_err(|_| format!("`{s}` is not a number"))
}

/// Command output plus any rows that were skipped along the way.
struct Outcome {
    body: Vec<u8>,
    row_errors: Vec<RowError>,
}

impl From<Vec<u8>> for Outcome {
    fn from(body: Vec<u8>) -> Self {
        Outcome {
            body,
            row_errors: Vec::new(),
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn cli_main<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };

    let output = output_path(&cli.command).map(Path::to_path_buf);
    let outcome = match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };

    let written = match &output {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(&outcome.body)),
        None => stdout.write_all(&outcome.body),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_DATA;
    }
    for row in &outcome.row_errors {
        let _ = writeln!(stderr, "skipped {row}");
    }
    if outcome.row_errors.is_empty() {
        EXIT_OK
    } else {
        EXIT_DATA
    }
}

fn output_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Tables(TablesCommand::Coverage(a)) => a.out.output.as_deref(),
        Command::Tables(TablesCommand::Criterion(a)) => a.out.output.as_deref(),
        Command::Tables(TablesCommand::Weights(a)) => a.out.output.as_deref(),
        Command::Weight(a) => a.out.output.as_deref(),
        Command::Adjust(a) | Command::Backtest(a) => a.out.output.as_deref(),
        Command::Synth(a) => a.output.as_deref(),
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Tables(TablesCommand::Coverage(a)) => {
            let mut req = TableRequest::coverage(a.dist.into());
            if let Some(n) = a.n {
                req.n_grid = n;
            }
            if let Some(k) = a.k {
                req.k_grid = k;
            }
            render(&req, a.out.format)
        }
        Command::Tables(TablesCommand::Criterion(a)) => {
            let mut req = TableRequest::criterion(a.dist.into());
            if let Some(p) = a.p {
                req.p_grid = p;
            }
            if let Some(k) = a.k {
                req.k_grid = k;
            }
            render(&req, a.out.format)
        }
        Command::Tables(TablesCommand::Weights(a)) => {
            let mut req = TableRequest::weights(a.n, a.method.into());
            req.distribution = a.dist.into();
            req.gamma = a.gamma;
            req.paper_headers = a.paper_headers;
            if let Some(p) = a.p {
                req.p_grid = p;
            }
            if let Some(k) = a.k {
                req.k_grid = k;
            }
            render(&req, a.out.format)
        }
        Command::Weight(a) => weight(&a),
        Command::Adjust(a) => run_backtest(&a, true),
        Command::Backtest(a) => run_backtest(&a, false),
        Command::Synth(a) => synth(&a),
    }
}

fn render(req: &TableRequest, format: Format) -> Result<Outcome> {
    let table = report::render_table(req)?;
    let body = match format {
        Format::Csv => table.to_csv_string().into_bytes(),
        Format::Text => table.to_text().into_bytes(),
    };
    Ok(body.into())
}

fn weight(a: &WeightArgs) -> Result<Outcome> {
    let query = CredibilityQuery::new(a.p, a.k)?;
    let criterion = credibility::full_credibility_uniform(&query);
    let z = credibility::credibility_weight(a.method.into(), a.n, criterion.rounded, a.gamma)?;
    let fields: [(&str, String); 8] = [
        ("method", z.method.to_string()),
        ("gamma", z.gamma.to_string()),
        ("n", a.n.to_string()),
        ("p", a.p.to_string()),
        ("k", a.k.to_string()),
        ("criterion_N", criterion.rounded.to_string()),
        ("z", z.value.to_string()),
        ("z_unclamped", z.unclamped.to_string()),
    ];
    let mut body = Vec::new();
    match a.out.format {
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(&mut body);
            wtr.write_record(fields.iter().map(|(k, _)| *k))?;
            wtr.write_record(fields.iter().map(|(_, v)| v.as_str()))?;
            wtr.flush()?;
        }
        Format::Text => {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &fields {
                writeln!(body, "{k:<width$}  {v}")?;
            }
        }
    }
    Ok(body.into())
}

fn run_backtest(a: &BacktestArgs, pvalues_only: bool) -> Result<Outcome> {
    let cfg = BacktestConfig {
        query: CredibilityQuery::new(a.p, a.k)?,
        method: a.method.into(),
        gamma: a.gamma,
        test: a.test.into(),
        threshold: a.threshold,
    };
    cfg.validate()?;

    let file = File::open(&a.input)
        .map_err(|e| Error::Domain(format!("cannot open {}: {e}", a.input.display())))?;
    let (input, mut row_errors) = backtest::read_input_csv(BufReader::new(file))?;
    if pvalues_only && matches!(input, PortfolioInput::Observations(_)) {
        return Err(Error::Domain(format!(
            "{} holds PIT values; `adjust` expects {} (use `backtest` for PIT input)",
            a.input.display(),
            backtest::PVALUE_HEADER.join(",")
        )));
    }
    let report = backtest::run_portfolio(&input, &cfg)?;
    row_errors.extend(report.errors);

    let mut body = Vec::new();
    match a.out.format {
        Format::Csv => backtest::write_verdict_csv(&mut body, &report.verdicts)?,
        Format::Text => body.extend(
            report::render_verdict_matrix(&report.verdicts)
                .to_text()
                .into_bytes(),
        ),
    }
    Ok(Outcome { body, row_errors })
}

fn synth(a: &SynthArgs) -> Result<Outcome> {
    let calendar = synthetic::regular_calendar(a.start, a.end, a.freq)?;
    let mut spec = ScenarioSpec::new(calendar, a.horizons.clone());
    spec.model = match a.model {
        ModelArg::GaussRw => Model::GaussianRandomWalk,
    };
    spec.seed = a.seed;
    spec.forecast_paths = a.paths;
    spec.misspecification = a.misspec;
    spec.drift = a.drift;
    spec.volatility = a.vol;
    spec.risk_factor = a.risk_factor.clone();
    let obs = synthetic::generate(&spec)?;
    let mut body = Vec::new();
    backtest::write_pit_csv(&mut body, &obs)?;
    Ok(body.into())
}

/// Runs the CLI against the process's arguments and standard streams.
pub fn run_from_env() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    cli_main(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
