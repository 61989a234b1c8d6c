// Solves a0 = exp(a0 - 2) by fixed-point iteration and compares the
// resulting decay rate r = 1 - a0 with the Hoeffding-derived rate 1 - 1/e.
//
// ```bash
// cargo run -p tailbound --example corollary_constant
// ```

use tailbound::bounds::{corollary1_bound, hoeffding_exponential, solve_corollary_constants, theorem1_limit};

pub fn run_example() -> tailbound::Result<()> {
    for tol in [1e-4, 1e-8, 1e-12] {
        let c = solve_corollary_constants(tol)?;
        println!(
            "tol {tol:e}: a0 = {:.12}, r = {:.12}, {} iterations, residual {:.2e}",
            c.a0, c.r, c.iterations, c.residual
        );
    }

    let c = solve_corollary_constants(1e-12)?;
    println!("rate r = {:.6} vs Hoeffding rate {:.6}", c.r, 1.0 - (-1.0f64).exp());
    for lambda in [1.0, 2.0, 5.0, 10.0, 20.0] {
        let limit = theorem1_limit(lambda)?.value;
        let corollary = corollary1_bound(lambda, &c)?.value;
        let hoeffding = hoeffding_exponential(lambda)?;
        println!("lambda {lambda:>4}: limit {limit:.3e} <= e^(1 - r lambda) {corollary:.3e} <= Hoeffding {hoeffding:.3e}");
    }
    Ok(())
}

fn main() -> tailbound::Result<()> {
    run_example()
}
