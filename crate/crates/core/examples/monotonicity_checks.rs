// Runs the grid checks for every inequality behind the monotonicity of the
// envelope, plus the exact identity G_2 - F_2 = (lambda - 2)^2 / 4.
//
// ```bash
// cargo run -p tailbound --example monotonicity_checks
// ```

use std::f64::consts::E;

use tailbound::inequalities::{fg_crossover, g2_minus_f2_identity, quadratic_threshold, run_all_grid_checks};

pub fn run_example() -> tailbound::Result<()> {
    for r in run_all_grid_checks(40, 0.02)? {
        println!(
            "{:>22}: {} (worst {:.1e} over {} points)",
            r.claim.tag(),
            if r.passed { "pass" } else { "FAIL" },
            r.worst_violation,
            r.points_checked
        );
    }
    let id = g2_minus_f2_identity(0.01)?;
    println!("G_2 - F_2 identity residual: {:.1e}", id.worst_residual);

    println!("2/sqrt(3) = {:.6}, e - 3/2 = {:.6}", quadratic_threshold(), E - 1.5);
    for n in [2, 3, 5, 10, 100, 10_000] {
        println!("  crossover(n = {n}) = {:.6}", fg_crossover(n)?);
    }
    Ok(())
}

fn main() -> tailbound::Result<()> {
    run_example()
}
