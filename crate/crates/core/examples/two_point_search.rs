// Brute-forces sums of two-point variables on a grid and checks that none
// beats the finite-n envelope at a slightly smaller mean.
//
// ```bash
// cargo run -p tailbound --example two_point_search
// ```

use tailbound::oracles::{maximize_two_point, two_point_mean, Argmax};

pub fn run_example() -> tailbound::Result<()> {
    for (n, lambda, resolution) in [(2, 1.2, 0.05), (2, 1.5, 0.05), (3, 1.8, 0.1)] {
        let report = maximize_two_point(n, lambda, resolution)?;
        let Argmax::TwoPoint(spec) = &report.argmax else {
            unreachable!()
        };
        println!(
            "n {n}, lambda {lambda}: max P(T <= 1) = {:.6} at mean {:.3}, bound {:.6}, {} specs",
            report.max_value,
            two_point_mean(spec),
            report.bound_value,
            report.points_evaluated
        );
        for s in spec.summands() {
            if s.prob_high == 0.0 || s.low == s.high {
                println!("    constant {}", if s.prob_high == 0.0 { s.low } else { s.high });
            } else {
                println!("    {} w.p. {:.3}, else {}", s.high, s.prob_high, s.low);
            }
        }
        assert!(report.passes(1e-12));
    }
    Ok(())
}

fn main() -> tailbound::Result<()> {
    run_example()
}
