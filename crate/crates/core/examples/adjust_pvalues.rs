//! Credibility-adjusts the shipped EUR curve Anderson-Darling p-values and
//! prints the verdict matrix for both weight methods.
//!
//! ```text
//! cargo run --example adjust_pvalues
//! ```

use std::fs::File;

use credback::backtest::{read_input_csv, run_portfolio, BacktestConfig, Decision};
use credback::credibility::WeightMethod;
use credback::report::render_verdict_matrix;

fn main() -> credback::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/eur_curve_ad_pvalues.csv");
    let (input, skipped) = read_input_csv(File::open(path)?)?;
    assert!(skipped.is_empty());

    for method in [WeightMethod::Linear, WeightMethod::LongleyCook] {
        let cfg = BacktestConfig::default().with_method(method);
        let report = run_portfolio(&input, &cfg)?;
        println!("{}", render_verdict_matrix(&report.verdicts).to_text());
        let accepted = report
            .verdicts
            .iter()
            .filter(|v| v.decision == Decision::Accept)
            .count();
        println!(
            "{accepted} of {} accepted at threshold {}\n",
            report.verdicts.len(),
            cfg.threshold
        );
    }
    Ok(())
}
