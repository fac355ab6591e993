//! Credibility tables and verdict matrices, rendered as CSV or aligned text.
//!
//! Criteria print as integers; probabilities and weights print as
//! percentages with two decimals. Weight tables show the uncapped formula
//! value, the way published credibility tables do (a weight of 367% reads
//! as "full credibility with room to spare").

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use crate::backtest::{BacktestVerdict, Horizon};
use crate::credibility::{self, CredibilityQuery, WeightMethod};
use crate::error::{Error, Result};

/// Sample sizes for coverage tables.
pub const COVERAGE_N_GRID: [u64; 7] = [10, 50, 100, 500, 1000, 5000, 10_000];
/// Half-widths for coverage tables.
pub const COVERAGE_K_GRID: [f64; 5] = [0.10, 0.05, 0.025, 0.01, 0.005];
/// Coverage probabilities for the normal criterion table.
pub const NORMAL_P_GRID: [f64; 7] = [0.80, 0.90, 0.95, 0.975, 0.99, 0.995, 0.9999];
/// Coverage probabilities for the uniform criterion and weight tables.
pub const UNIFORM_P_GRID: [f64; 7] = [0.80, 0.85, 0.90, 0.95, 0.975, 0.99, 0.9999];
/// Half-widths for criterion and weight tables.
pub const CRITERION_K_GRID: [f64; 5] = [0.30, 0.20, 0.10, 0.05, 0.01];

/// Column labels printed over the 18-month and 2-year linear weight blocks in
/// the original publication. The values beneath them belong to
/// [`CRITERION_K_GRID`].
const MISPRINTED_SMALL_N_K_LABELS: [&str; 5] = ["k=50%", "k=40%", "k=30%", "k=10%", "k=5%"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Coverage,
    Criterion,
    Weights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distribution {
    Normal,
    #[default]
    Uniform,
}

impl std::str::FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" | "poisson" => Ok(Distribution::Normal),
            "uniform" => Ok(Distribution::Uniform),
            _ => Err(Error::invalid(format!("unknown distribution `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRequest {
    pub kind: TableKind,
    pub distribution: Distribution,
    /// Row grid for criterion and weight tables.
    pub p_grid: Vec<f64>,
    /// Row grid for coverage tables.
    pub n_grid: Vec<u64>,
    pub k_grid: Vec<f64>,
    /// Backtest sample size, weight tables only.
    pub n: u64,
    pub method: WeightMethod,
    pub gamma: f64,
    /// Relabel small-sample linear weight columns as originally printed.
    pub paper_headers: bool,
}

impl TableRequest {
    pub fn coverage(distribution: Distribution) -> Self {
        TableRequest {
            kind: TableKind::Coverage,
            distribution,
            p_grid: Vec::new(),
            n_grid: COVERAGE_N_GRID.to_vec(),
            k_grid: COVERAGE_K_GRID.to_vec(),
            n: 0,
            method: WeightMethod::Linear,
            gamma: credibility::DEFAULT_GAMMA,
            paper_headers: false,
        }
    }

    pub fn criterion(distribution: Distribution) -> Self {
        let p_grid = match distribution {
            Distribution::Normal => NORMAL_P_GRID.to_vec(),
            Distribution::Uniform => UNIFORM_P_GRID.to_vec(),
        };
        TableRequest {
            kind: TableKind::Criterion,
            p_grid,
            n_grid: Vec::new(),
            k_grid: CRITERION_K_GRID.to_vec(),
            ..TableRequest::coverage(distribution)
        }
    }

    pub fn weights(n: u64, method: WeightMethod) -> Self {
        TableRequest {
            kind: TableKind::Weights,
            n,
            method,
            ..TableRequest::criterion(Distribution::Uniform)
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: String| Err(Error::invalid(format!("invalid {what} value {v}")));
        if self.k_grid.is_empty() {
            return Err(Error::invalid("k grid is empty"));
        }
        if let Some(k) = self.k_grid.iter().find(|k| !(**k > 0.0 && **k <= 1.0)) {
            return bad("k", k.to_string());
        }
        match self.kind {
            TableKind::Coverage => {
                if self.n_grid.is_empty() {
                    return Err(Error::invalid("n grid is empty"));
                }
                if self.n_grid.contains(&0) {
                    return bad("n", "0".into());
                }
            }
            TableKind::Criterion | TableKind::Weights => {
                if self.p_grid.is_empty() {
                    return Err(Error::invalid("P grid is empty"));
                }
                if let Some(p) = self.p_grid.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
                    return bad("P", p.to_string());
                }
            }
        }
        if self.kind == TableKind::Weights && !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return bad("gamma", self.gamma.to_string());
        }
        if self.kind == TableKind::Weights
            && self.method == WeightMethod::LongleyCook
            && self.n == 0
            && self.gamma == 0.0
        {
            return Err(Error::invalid(
                "Longley-Cook weight undefined for n = 0 and gamma = 0",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Count(u64),
    /// A fraction, printed as a percentage.
    Percent(f64),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Count(v) => v.to_string(),
            Cell::Percent(v) => format!("{:.2}", v * 100.0),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec![self.corner.clone()];
        header.extend(self.columns.iter().cloned());
        wtr.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.label.clone()];
            rec.extend(row.cells.iter().map(Cell::render));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Right-aligned columns under a title line, notes at the bottom.
    pub fn to_text(&self) -> String {
        let mut grid: Vec<Vec<String>> = Vec::with_capacity(self.rows.len() + 1);
        let mut header = vec![self.corner.clone()];
        header.extend(self.columns.iter().cloned());
        grid.push(header);
        for row in &self.rows {
            let mut line = vec![row.label.clone()];
            line.extend(row.cells.iter().map(Cell::render));
            grid.push(line);
        }
        let ncols = grid.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..ncols)
            .map(|c| {
                grid.iter()
                    .filter_map(|r| r.get(c))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();

        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        for line in &grid {
            let cells: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    if c == 0 {
                        format!("{:<w$}", s, w = widths[c])
                    } else {
                        format!("{:>w$}", s, w = widths[c])
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        for note in &self.notes {
            let _ = writeln!(out, "{note}");
        }
        out
    }
}

/// `0.025` → `2.5`, `0.9999` → `99.99`.
fn percent_label(x: f64) -> String {
    let v = (x * 100.0 * 1e6).round() / 1e6;
    format!("{v}")
}

fn k_labels(k_grid: &[f64]) -> Vec<String> {
    k_grid
        .iter()
        .map(|k| format!("k={}%", percent_label(*k)))
        .collect()
}

fn criterion_for(dist: Distribution, q: &CredibilityQuery) -> u64 {
    match dist {
        Distribution::Normal => credibility::full_credibility_poisson(q).rounded,
        Distribution::Uniform => credibility::full_credibility_uniform(q).rounded,
    }
}

fn dist_name(dist: Distribution) -> &'static str {
    match dist {
        Distribution::Normal => "normal",
        Distribution::Uniform => "uniform",
    }
}

pub fn render_table(req: &TableRequest) -> Result<Table> {
    req.validate()?;
    match req.kind {
        TableKind::Coverage => {
            let rows = req
                .n_grid
                .iter()
                .map(|&n| {
                    let cells = req
                        .k_grid
                        .iter()
                        .map(|&k| {
                            let p = match req.distribution {
                                Distribution::Normal => {
                                    credibility::coverage_probability_poisson(n, k)?
                                }
                                Distribution::Uniform => {
                                    credibility::coverage_probability_uniform(n, k)?
                                }
                            };
                            Ok(Cell::Percent(p.value()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(TableRow {
                        label: n.to_string(),
                        cells,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Table {
                title: format!(
                    "Probability (%) of the mean falling within ±k ({} distribution)",
                    dist_name(req.distribution)
                ),
                corner: "n".into(),
                columns: k_labels(&req.k_grid),
                rows,
                notes: Vec::new(),
            })
        }
        TableKind::Criterion => {
            let rows = req
                .p_grid
                .iter()
                .map(|&p| {
                    let cells = req
                        .k_grid
                        .iter()
                        .map(|&k| {
                            Ok(Cell::Count(criterion_for(
                                req.distribution,
                                &CredibilityQuery::new(p, k)?,
                            )))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(TableRow {
                        label: format!("{}%", percent_label(p)),
                        cells,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Table {
                title: format!(
                    "Full credibility criterion ({} distribution)",
                    dist_name(req.distribution)
                ),
                corner: "P".into(),
                columns: k_labels(&req.k_grid),
                rows,
                notes: Vec::new(),
            })
        }
        TableKind::Weights => {
            let rows = req
                .p_grid
                .iter()
                .map(|&p| {
                    let cells = req
                        .k_grid
                        .iter()
                        .map(|&k| {
                            let crit =
                                criterion_for(req.distribution, &CredibilityQuery::new(p, k)?);
                            let z = credibility::credibility_weight(
                                req.method, req.n, crit, req.gamma,
                            )?;
                            Ok(Cell::Percent(z.unclamped))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(TableRow {
                        label: format!("{}%", percent_label(p)),
                        cells,
                    })
                })
                .collect::<Result<Vec<_>>>()?;

            let mut columns = k_labels(&req.k_grid);
            let mut notes = vec!["weights above 100% mean full credibility".to_string()];
            if req.paper_headers
                && req.method == WeightMethod::Linear
                && req.n <= 6
                && req.k_grid == CRITERION_K_GRID
            {
                columns = MISPRINTED_SMALL_N_K_LABELS
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                notes.push(
                    "column labels as originally printed; values are for k=30%,20%,10%,5%,1%"
                        .into(),
                );
            }
            let method = match req.method {
                WeightMethod::Linear => "linear".to_string(),
                WeightMethod::LongleyCook => format!("Longley-Cook, gamma={}", req.gamma),
            };
            Ok(Table {
                title: format!("Credibility weights (%) for n={} ({method})", req.n),
                corner: "P".into(),
                columns,
                rows,
                notes,
            })
        }
    }
}

/// Adjusted p-values as a risk factor × horizon matrix, with the weight `Z`
/// and sample size of each horizon in the two top rows. A top-row cell is
/// left empty when risk factors disagree at that horizon.
pub fn render_verdict_matrix(verdicts: &[BacktestVerdict]) -> Table {
    let horizons: Vec<Horizon> = {
        let mut h: Vec<Horizon> = verdicts.iter().map(|v| v.horizon).collect();
        h.sort();
        h.dedup();
        h
    };
    let col = |h: Horizon| horizons.binary_search(&h).expect("collected above");

    let mut by_factor: BTreeMap<&str, Vec<Cell>> = BTreeMap::new();
    let mut z_row: Vec<Option<f64>> = vec![None; horizons.len()];
    let mut n_row: Vec<Option<u64>> = vec![None; horizons.len()];
    let mut z_conflict = vec![false; horizons.len()];
    let mut n_conflict = vec![false; horizons.len()];
    for v in verdicts {
        let c = col(v.horizon);
        by_factor
            .entry(v.risk_factor.as_str())
            .or_insert_with(|| vec![Cell::Empty; horizons.len()])[c] =
            Cell::Percent(v.adjusted_pvalue.value());
        match z_row[c] {
            None => z_row[c] = Some(v.z.value),
            Some(z) if z != v.z.value => z_conflict[c] = true,
            _ => {}
        }
        match n_row[c] {
            None => n_row[c] = Some(v.n),
            Some(n) if n != v.n => n_conflict[c] = true,
            _ => {}
        }
    }

    let mut rows = vec![
        TableRow {
            label: "Z".into(),
            cells: z_row
                .iter()
                .zip(&z_conflict)
                .map(|(z, bad)| match (z, bad) {
                    (Some(z), false) => Cell::Percent(*z),
                    _ => Cell::Empty,
                })
                .collect(),
        },
        TableRow {
            label: "n".into(),
            cells: n_row
                .iter()
                .zip(&n_conflict)
                .map(|(n, bad)| match (n, bad) {
                    (Some(n), false) => Cell::Count(*n),
                    _ => Cell::Empty,
                })
                .collect(),
        },
    ];
    rows.extend(by_factor.into_iter().map(|(f, cells)| TableRow {
        label: f.to_string(),
        cells,
    }));

    let title = match verdicts.first() {
        Some(v) => format!(
            "Credibility-adjusted {} p-values (%), {} weights",
            v.test.short_name().to_uppercase(),
            v.z.method
        ),
        None => "Credibility-adjusted p-values (%)".to_string(),
    };
    Table {
        title,
        corner: "risk_factor".into(),
        columns: horizons.iter().map(|h| h.to_string()).collect(),
        rows,
        notes: Vec::new(),
    }
}
