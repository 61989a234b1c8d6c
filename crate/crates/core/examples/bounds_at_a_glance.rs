// Evaluates every bound on P(S <= 1) at a handful of (lambda, n) points.
//
// ```bash
// cargo run -p tailbound --example bounds_at_a_glance
// ```

use tailbound::bounds::{
    bentkus_bound, corollary1_bound, hoeffding_bound, solve_corollary_constants, theorem1_finite,
    theorem1_limit, BoundQuery,
};

pub fn run_example() -> tailbound::Result<()> {
    let constants = solve_corollary_constants(1e-12)?;
    println!("{:>6} {:>4}  {:>10} {:>10} {:>10} {:>10} {:>10}", "lambda", "n", "finite", "limit", "hoeffding", "bentkus", "corollary");
    for (lambda, n) in [(1.5, 2), (2.0, 4), (3.0, 10), (5.0, 50), (8.0, 1000)] {
        let q = BoundQuery::new(lambda, n)?;
        let finite = theorem1_finite(q)?;
        let limit = theorem1_limit(lambda)?;
        let hoeffding = hoeffding_bound(q)?;
        let bentkus = bentkus_bound(q, false)?;
        let corollary = corollary1_bound(lambda, &constants)?;
        println!(
            "{lambda:>6.2} {n:>4}  {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}   ({})",
            finite.value, limit.value, hoeffding.value, bentkus.value, corollary.value, finite.branch
        );
        assert!(finite.value <= limit.value + 1e-12);
    }
    Ok(())
}

fn main() -> tailbound::Result<()> {
    run_example()
}
