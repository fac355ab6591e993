//! How much a uniformity test on `n` observations can be trusted, under the
//! linear and Longley-Cook weights.
//!
//! ```text
//! cargo run --example credibility_weights
//! ```

use credback::credibility::{
    self, credibility_weight, full_credibility_uniform, pvalue_band, CredibilityQuery, WeightMethod,
};
use credback::report::{render_table, TableRequest};
use credback::Probability;

fn main() -> credback::Result<()> {
    let query = CredibilityQuery::new(0.90, 0.10)?;
    let criterion = full_credibility_uniform(&query);
    println!(
        "full credibility at P=90%, k=10%: N = {} (raw {:.3})",
        criterion.rounded, criterion.raw
    );

    let pvalue = Probability::new(0.046)?;
    println!("\n  n   method        Z      band for p = {pvalue}");
    for n in [137, 45, 22, 11, 6, 5] {
        for method in [WeightMethod::Linear, WeightMethod::LongleyCook] {
            let z = credibility_weight(method, n, criterion.rounded, credibility::DEFAULT_GAMMA)?;
            let band = pvalue_band(pvalue, &z);
            println!(
                "{n:>4}   {:<12} {:>5.1}%  [{:.4}, {:.4}]",
                method.as_str(),
                100.0 * z.value,
                band.lower.value(),
                band.upper.value()
            );
        }
    }

    println!();
    print!(
        "{}",
        render_table(&TableRequest::weights(22, WeightMethod::LongleyCook))?.to_text()
    );
    Ok(())
}
