// Shows that each term of the finite-n bound is attained by a binomial or a
// shifted binomial, and that the binomial term approaches the Poisson tail.
//
// ```bash
// cargo run -p tailbound --example extremal_tightness
// ```

use tailbound::bounds::BoundQuery;
use tailbound::extremal::{
    extremal_for_branch, poisson_limit_gap, poisson_tail_at_most_one, verify_tightness,
};

pub fn run_example() -> tailbound::Result<()> {
    for (lambda, n) in [(1.5, 2), (2.0, 4), (3.5, 8)] {
        let q = BoundQuery::new(lambda, n)?;
        for report in verify_tightness(q)? {
            let spec = extremal_for_branch(q, report.branch)?;
            println!(
                "lambda {lambda}, n {n}, {}: {} + binomial({:.4}, {}) has P(V <= 1) = {:.6}, bound {:.6}, gap {:.1e}",
                report.branch,
                spec.shift(),
                spec.p(),
                spec.trials(),
                report.extremal_tail,
                report.bound_value,
                report.gap
            );
        }
    }

    let lambda = 2.0;
    println!("Poisson tail at lambda = {lambda}: {:.6}", poisson_tail_at_most_one(lambda)?);
    for n in [10, 100, 1_000, 10_000, 100_000] {
        println!("  n = {n:>6}: |F_n - Poisson| = {:.3e}", poisson_limit_gap(lambda, n)?);
    }
    Ok(())
}

fn main() -> tailbound::Result<()> {
    run_example()
}
