// Grid-searches the Bernoulli mean vectors with a fixed sum for the largest
// P(B_1 + ... + B_n <= 1), and classifies where the maximiser sits.
//
// ```bash
// cargo run -p tailbound --example bernoulli_simplex_search
// ```

use tailbound::oracles::{classify_argmax, maximize_ln, Argmax};

pub fn run_example() -> tailbound::Result<()> {
    let resolution = 0.05;
    for (n, lambda) in [(2, 1.5), (3, 2.0), (4, 1.3), (4, 2.9), (5, 3.7)] {
        let report = maximize_ln(n, lambda, resolution)?;
        let Argmax::Simplex(point) = &report.argmax else {
            unreachable!()
        };
        println!(
            "n {n}, lambda {lambda}: max {:.6} <= bound {:.6} (slack {:.1e}), argmax {:?} [{:?}], {} points",
            report.max_value,
            report.bound_value,
            report.slack,
            point.coords().iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
            classify_argmax(point, resolution),
            report.points_evaluated
        );
    }
    Ok(())
}

fn main() -> tailbound::Result<()> {
    run_example()
}
