// Writes the bound comparison table as CSV and reports how far the
// simplified Bentkus bound sits above the n-free envelope.
//
// ```bash
// cargo run -p tailbound --example comparison_table
// ```

use std::f64::consts::E;

use tailbound::cli::{comparison_rows, COMPARE_HEADER};

pub fn run_example() -> tailbound::Result<()> {
    let n = 12;
    println!("{COMPARE_HEADER}");
    for row in comparison_rows(0.0, 6.0, 0.5, n, false)? {
        println!("{}", row.to_csv(6));
    }

    // Raw (pre-clamp) values: from lambda = e - 1 on, the ratio is at least e.
    let raw = comparison_rows(2.0, 6.0, 1.0, n, true)?;
    for row in raw {
        let ratio = row.bentkus_simple.expect("lambda < n") / row.theorem1_limit;
        println!("lambda = {:.1}: bentkus_simple / limit = {ratio:.4} (e = {E:.4})", row.lambda);
        assert!(ratio >= E - 1e-12);
    }
    Ok(())
}

fn main() -> tailbound::Result<()> {
    run_example()
}
