//! Coverage probabilities and full-credibility criteria for the normal and
//! uniform cases.
//!
//! ```text
//! cargo run --example credibility_tables
//! ```

use credback::report::{render_table, Distribution, TableRequest};

fn main() -> credback::Result<()> {
    for dist in [Distribution::Normal, Distribution::Uniform] {
        println!("{}", render_table(&TableRequest::coverage(dist))?.to_text());
        println!(
            "{}",
            render_table(&TableRequest::criterion(dist))?.to_text()
        );
    }

    // custom grids work the same way
    let mut req = TableRequest::criterion(Distribution::Uniform);
    req.p_grid = vec![0.90, 0.95];
    req.k_grid = vec![0.15, 0.10, 0.075];
    print!("{}", render_table(&req)?.to_csv_string());
    Ok(())
}
