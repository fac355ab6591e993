//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test --release --test acceptance`.

mod published;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use chrono::{Days, NaiveDate};
use credback::backtest::{self, Horizon};
use credback::cli::cli_main;
use credback::credibility::{self, CredibilityQuery, CredibilityWeight, WeightMethod};
use credback::report::{self, Distribution, TableRequest, CRITERION_K_GRID, UNIFORM_P_GRID};
use credback::statdist::{std_normal_cdf, std_normal_quantile};
use credback::synthetic::{replicate_pvalues, Replication};
use credback::uniformity::{self, Sample01};
use credback::Probability;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type PvalueFn = fn(f64, u64) -> Probability;
type Criterion = (&'static str, fn() -> Check);

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/eur_curve_ad_pvalues.csv")
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli_main(
        std::iter::once("credback").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    String::from_utf8(out).map_err(|e| e.to_string())
}

fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(String::from)
        .collect();
    let rows = rdr
        .records()
        .map(|r| {
            r.map(|r| r.iter().map(String::from).collect())
                .map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    Ok((header, rows))
}

fn criterion_table_matches(dist: &str, expected: &[[u64; 5]; 7]) -> Check {
    let started = Instant::now();
    let csv = run_cli(&["tables", "criterion", "--dist", dist])?;
    let elapsed = started.elapsed();
    let (_, rows) = parse_csv(&csv)?;
    if rows.len() != 7 {
        return Err(format!("{} rows", rows.len()));
    }
    for (r, (row, want)) in rows.iter().zip(expected).enumerate() {
        for (c, (cell, want)) in row[1..].iter().zip(want).enumerate() {
            if cell.parse::<u64>().ok() != Some(*want) {
                return Err(format!("row {r} col {c}: got {cell}, want {want}"));
            }
        }
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("35/35 exact in {elapsed:?}"))
}

fn coverage_matches() -> Check {
    let mut worst: f64 = 0.0;
    for (dist, expected) in [
        (Distribution::Normal, &published::COVERAGE_NORMAL),
        (Distribution::Uniform, &published::COVERAGE_UNIFORM),
    ] {
        let req = TableRequest::coverage(dist);
        for (r, &n) in req.n_grid.iter().enumerate() {
            for (c, &k) in req.k_grid.iter().enumerate() {
                let p = match dist {
                    Distribution::Normal => credibility::coverage_probability_poisson(n, k),
                    Distribution::Uniform => credibility::coverage_probability_uniform(n, k),
                }
                .map_err(|e| e.to_string())?;
                let diff = (100.0 * p.value() - expected[r][c]).abs();
                worst = worst.max(diff);
                if diff > 0.01 + 1e-9 {
                    return Err(format!(
                        "{dist:?} n={n} k={k}: {} vs {}",
                        100.0 * p.value(),
                        expected[r][c]
                    ));
                }
            }
        }
    }
    Ok(format!("70 cells, max |diff| {worst:.4}pp"))
}

fn weight_pct(method: WeightMethod, n: u64, p: f64, k: f64) -> f64 {
    let crit = credibility::full_credibility_uniform(&CredibilityQuery::new(p, k).unwrap()).rounded;
    100.0
        * credibility::credibility_weight(method, n, crit, credibility::DEFAULT_GAMMA)
            .unwrap()
            .unclamped
}

fn weights_match() -> Check {
    use published::*;
    use WeightMethod::{Linear, LongleyCook};
    let blocks: [(WeightMethod, u64, &[[f64; 5]; 7]); 10] = [
        (Linear, 22, &LINEAR_N22),
        (Linear, 11, &LINEAR_N11),
        (Linear, 6, &LINEAR_N6),
        (Linear, 5, &LINEAR_N5),
        (LongleyCook, 136, &LONGLEY_COOK_N136),
        (LongleyCook, 45, &LONGLEY_COOK_N45),
        (LongleyCook, 22, &LONGLEY_COOK_N22),
        (LongleyCook, 11, &LONGLEY_COOK_N11),
        (LongleyCook, 6, &LONGLEY_COOK_N6),
        (LongleyCook, 5, &LONGLEY_COOK_N5),
    ];
    let mut worst: f64 = 0.0;
    for (method, n, expected) in blocks {
        // through the table renderer, so the emitted grid is what gets checked
        let table =
            report::render_table(&TableRequest::weights(n, method)).map_err(|e| e.to_string())?;
        for (r, row) in table.rows.iter().enumerate() {
            for (c, cell) in row.cells.iter().enumerate() {
                let report::Cell::Percent(z) = cell else {
                    return Err("non-percent cell".into());
                };
                let diff = (100.0 * z - expected[r][c]).abs();
                worst = worst.max(diff);
                if diff > 1.0 + 1e-9 {
                    return Err(format!(
                        "{method} n={n} P={} k={}: {:.2} vs {}",
                        UNIFORM_P_GRID[r],
                        CRITERION_K_GRID[c],
                        100.0 * z,
                        expected[r][c]
                    ));
                }
            }
        }
    }
    let spots = [
        (Linear, 22, 24.0),
        (LongleyCook, 22, 58.0),
        (LongleyCook, 11, 38.0),
        (LongleyCook, 45, 81.0),
    ];
    for (method, n, want) in spots {
        let got = weight_pct(method, n, 0.90, 0.10);
        if (got - want).abs() > 1.0 {
            return Err(format!("spot {method} n={n}: {got:.2} vs {want}"));
        }
    }
    Ok(format!(
        "350 cells + 4 spot checks, max |diff| {worst:.3}pp"
    ))
}

fn adjusted_matrix_matches(method: &str, expected: &[[f64; 7]; 11], z_row: &[f64; 7]) -> Check {
    let path = fixture();
    let csv = run_cli(&[
        "backtest",
        "--input",
        path.to_str().ok_or("non-utf8 path")?,
        "--p",
        "0.90",
        "--k",
        "0.10",
        "--threshold",
        "0.01",
        "--method",
        method,
    ])?;
    let (header, rows) = parse_csv(&csv)?;
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or(format!("no column {name}"))
    };
    let (rf, hz, z, adj) = (
        col("risk_factor")?,
        col("horizon")?,
        col("z")?,
        col("adjusted_pvalue")?,
    );
    if rows.len() != 77 {
        return Err(format!("{} verdicts, want 77", rows.len()));
    }
    let mut worst: f64 = 0.0;
    for row in &rows {
        let r = published::RISK_FACTORS
            .iter()
            .position(|f| *f == row[rf])
            .ok_or(format!("unexpected risk factor {}", row[rf]))?;
        let c = published::HORIZONS
            .iter()
            .position(|h| *h == row[hz])
            .ok_or(format!("unexpected horizon {}", row[hz]))?;
        let got: f64 = row[adj].parse::<f64>().map_err(|e| e.to_string())? * 100.0;
        let diff = (got - expected[r][c]).abs();
        worst = worst.max(diff);
        if diff > 0.1 + 1e-9 {
            return Err(format!(
                "{} {}: {got:.3} vs {}",
                row[rf], row[hz], expected[r][c]
            ));
        }
        let zpct: f64 = row[z].parse::<f64>().map_err(|e| e.to_string())? * 100.0;
        if zpct.round() != z_row[c] {
            return Err(format!("Z at {}: {zpct:.2} vs {}", row[hz], z_row[c]));
        }
    }
    Ok(format!(
        "77 cells, max |diff| {worst:.3}pp, Z row {z_row:?}"
    ))
}

/// DKW band at confidence 0.999 for `r` draws.
fn mc_noise(r: usize) -> f64 {
    ((2.0f64 / 0.001).ln() / (2.0 * r as f64)).sqrt()
}

fn sup_deviation_from_uniform(mut p: Vec<f64>) -> f64 {
    p.sort_by(f64::total_cmp);
    let r = p.len() as f64;
    p.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / r).abs().max(((i + 1) as f64 / r - x).abs()))
        .fold(0.0, f64::max)
}

fn synthetic_calibration() -> Check {
    const REPS: usize = 100_000;
    let started = Instant::now();
    let bound = 0.01 + mc_noise(REPS);
    let mut details = Vec::new();
    for n in [5, 11, 22, 45] {
        let mut run = Replication::new(n, REPS);
        run.seed = 1_000_000 * n as u64;
        let p = replicate_pvalues(&run).map_err(|e| e.to_string())?;
        let dev = sup_deviation_from_uniform(p);
        details.push(format!("n={n}: {dev:.4}"));
        if dev > bound {
            return Err(format!(
                "null calibration n={n}: sup|F-U| {dev:.4} > {bound:.4}"
            ));
        }
    }
    for n in [45, 90] {
        let mut run = Replication::new(n, 1_000);
        run.misspecification = 3.0;
        run.seed = 7_000_000 + n as u64;
        let p = replicate_pvalues(&run).map_err(|e| e.to_string())?;
        let power = p.iter().filter(|&&x| x < 0.05).count() as f64 / p.len() as f64;
        details.push(format!("power n={n}: {power:.3}"));
        if power < 0.90 {
            return Err(format!("power at n={n} is {power:.3}"));
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(300) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{} (bound {bound:.4}) in {elapsed:.1?}",
        details.join(", ")
    ))
}

/// Seeded null statistics for AD, KS and CvM on `reps` uniform samples of size `n`.
fn null_statistics(n: usize, reps: usize, seed: u64) -> [Vec<f64>; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = [
        Vec::with_capacity(reps),
        Vec::with_capacity(reps),
        Vec::with_capacity(reps),
    ];
    let mut buf = vec![0.0; n];
    for _ in 0..reps {
        for x in buf.iter_mut() {
            *x = rng.random::<f64>();
        }
        let s = Sample01::new(buf.clone()).expect("values in [0, 1)");
        stats[0].push(uniformity::ad_statistic(&s));
        stats[1].push(uniformity::ks_statistic(&s));
        stats[2].push(uniformity::cvm_statistic(&s));
    }
    stats
}

fn pvalue_oracles() -> Check {
    let mut worst: f64 = 0.0;
    let pvalue_fns: [(&str, PvalueFn); 3] = [
        ("AD", uniformity::ad_pvalue),
        ("KS", uniformity::ks_pvalue),
        ("CvM", uniformity::cvm_pvalue),
    ];
    for (n, reps) in [(5, 100_000), (11, 100_000), (22, 100_000), (200, 1_000_000)] {
        let stats = null_statistics(n, reps, 42 + n as u64);
        for ((name, pvalue), mut s) in pvalue_fns.iter().zip(stats) {
            s.sort_by(f64::total_cmp);
            for alpha in [0.10, 0.05, 0.01] {
                let idx = ((1.0 - alpha) * reps as f64).ceil() as usize - 1;
                let p = pvalue(s[idx], n as u64).value();
                let diff = (p - alpha).abs();
                worst = worst.max(diff);
                if diff > 0.005 {
                    return Err(format!(
                        "{name} n={n} alpha={alpha}: p at MC quantile = {p:.4}"
                    ));
                }
            }
        }
    }
    Ok(format!(
        "3 tests x 4 sizes x 3 levels, max |p - alpha| {worst:.4}"
    ))
}

fn brute_force_max(dates: &[NaiveDate], h: Horizon) -> usize {
    let n = dates.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let count = mask.count_ones() as usize;
        if count <= best {
            continue;
        }
        let mut last: Option<NaiveDate> = None;
        let mut ok = true;
        for (i, d) in dates.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if let Some(l) = last {
                    if *d < h.after(l).unwrap() {
                        ok = false;
                        break;
                    }
                }
                last = Some(*d);
            }
        }
        if ok {
            best = count;
        }
    }
    best
}

fn invariants() -> Check {
    // n0 monotone in P and k
    let ps: Vec<f64> = (1..1000)
        .map(|i| 0.5 + 0.4999 * i as f64 / 1000.0)
        .collect();
    let ks: Vec<f64> = (1..200).map(|i| i as f64 / 400.0).collect();
    for &k in &[0.01, 0.05, 0.1, 0.3] {
        let n0: Vec<f64> = ps
            .iter()
            .map(|&p| {
                credibility::full_credibility_poisson(&CredibilityQuery::new(p, k).unwrap()).raw
            })
            .collect();
        if n0.windows(2).any(|w| w[1] <= w[0]) {
            return Err(format!("n0 not increasing in P at k={k}"));
        }
    }
    for &p in &[0.8, 0.9, 0.99] {
        let n0: Vec<f64> = ks
            .iter()
            .map(|&k| {
                credibility::full_credibility_poisson(&CredibilityQuery::new(p, k).unwrap()).raw
            })
            .collect();
        if n0.windows(2).any(|w| w[1] >= w[0]) {
            return Err(format!("n0 not decreasing in k at P={p}"));
        }
    }
    // N_uniform = n0 / 3
    for &p in ps.iter().step_by(37) {
        for &k in ks.iter().step_by(11) {
            let q = CredibilityQuery::new(p, k).unwrap();
            let n0 = credibility::full_credibility_poisson(&q).raw;
            let nu = credibility::full_credibility_uniform(&q).raw;
            if (nu - n0 / 3.0).abs() > 1e-12 * n0 {
                return Err(format!(
                    "N_uniform {nu} != n0/3 {} at P={p} k={k}",
                    n0 / 3.0
                ));
            }
        }
    }
    // Longley-Cook >= linear for n <= N; weights clamp; adjusted <= raw
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for big_n in 1..=400u64 {
        for n in 0..=big_n + 50 {
            let lin = credibility::linear_credibility(n, big_n).unwrap();
            let lc = credibility::longley_cook_credibility(n, big_n, credibility::DEFAULT_GAMMA)
                .unwrap();
            if n <= big_n && lc.value < lin.value - 1e-15 {
                return Err(format!("LC < linear at n={n} N={big_n}"));
            }
            for z in [lin, lc] {
                if !(0.0..=1.0).contains(&z.value) {
                    return Err(format!("weight {} outside [0, 1]", z.value));
                }
            }
            let p = Probability::new(rng.random::<f64>()).unwrap();
            if credibility::adjust_pvalue(p, &lc).value() > p.value() {
                return Err(format!("adjusted > raw at n={n} N={big_n}"));
            }
        }
    }
    if credibility::adjust_pvalue(Probability::ONE, &CredibilityWeight::full(10, 10)).value() > 1.0
    {
        return Err("adjusted above 1".into());
    }
    // bucketing: non-overlap and greedy optimality against brute force
    let base = NaiveDate::from_ymd_opt(2010, 1, 1).unwrap();
    for trial in 0..60 {
        let len = 1 + trial % 20;
        let mut offsets: Vec<u64> = (0..len).map(|_| rng.random_range(0..400)).collect();
        offsets.sort_unstable();
        offsets.dedup();
        let dates: Vec<NaiveDate> = offsets.iter().map(|&o| base + Days::new(o)).collect();
        let h = Horizon::from_days(rng.random_range(1..90)).unwrap();
        let kept = backtest::select_nonoverlapping(&dates, h);
        if kept
            .windows(2)
            .any(|w| dates[w[1]] < h.after(dates[w[0]]).unwrap())
        {
            return Err(format!("overlap in trial {trial}"));
        }
        let best = brute_force_max(&dates, h);
        if kept.len() != best {
            return Err(format!(
                "trial {trial}: greedy kept {} of optimal {best}",
                kept.len()
            ));
        }
    }
    // normal CDF / quantile round trip
    let mut worst: f64 = 0.0;
    for i in 1..100_000 {
        let p = i as f64 / 100_000.0;
        let x = std_normal_quantile(Probability::new(p).unwrap()).unwrap();
        let back = std_normal_cdf(x).unwrap().value();
        worst = worst.max((back - p).abs());
    }
    for e in 3..=15 {
        let p = 10f64.powi(-e);
        let x = std_normal_quantile(Probability::new(p).unwrap()).unwrap();
        worst = worst.max((std_normal_cdf(x).unwrap().value() - p).abs());
    }
    if worst > 1e-10 {
        return Err(format!("round trip error {worst:e}"));
    }
    Ok(format!(
        "all invariant sweeps hold, round trip max error {worst:.1e}"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 normal criterion table", || {
            criterion_table_matches("normal", &published::CRITERION_NORMAL)
        }),
        ("2 uniform criterion table", || {
            criterion_table_matches("uniform", &published::CRITERION_UNIFORM)
        }),
        ("3 coverage tables", coverage_matches),
        ("4 credibility weight tables", weights_match),
        ("5a adjusted p-values, linear", || {
            adjusted_matrix_matches(
                "linear",
                &published::ADJUSTED_LINEAR,
                &published::Z_ROW_LINEAR,
            )
        }),
        ("5b adjusted p-values, Longley-Cook", || {
            adjusted_matrix_matches(
                "longley-cook",
                &published::ADJUSTED_LONGLEY_COOK,
                &published::Z_ROW_LONGLEY_COOK,
            )
        }),
        ("6 synthetic calibration and power", synthetic_calibration),
        ("7 p-value Monte-Carlo oracles", pvalue_oracles),
        ("8 invariant suites", invariants),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {name}: {detail} [{:.1?}]", started.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{:.1?}]", started.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
