// Seeded Monte Carlo estimates of P(S <= 1) next to the finite-n bound.
//
// ```bash
// cargo run -p tailbound --example monte_carlo_check
// ```

use tailbound::bounds::{theorem1_finite, BoundQuery};
use tailbound::oracles::{monte_carlo_tail, BoundedDistSpec};

pub fn run_example() -> tailbound::Result<()> {
    let cases: Vec<(&str, Vec<BoundedDistSpec>)> = vec![
        (
            "4 fair coins",
            vec![BoundedDistSpec::TwoPoint { low: 0.0, high: 1.0, prob_high: 0.5 }; 4],
        ),
        ("3 uniforms", vec![BoundedDistSpec::Uniform { lo: 0.0, hi: 1.0 }; 3]),
        (
            "mixed",
            vec![
                BoundedDistSpec::Uniform { lo: 0.0, hi: 0.5 },
                BoundedDistSpec::Discrete { points: vec![0.0, 0.3, 1.0], probs: vec![0.5, 0.3, 0.2] },
                BoundedDistSpec::TwoPoint { low: 0.1, high: 0.9, prob_high: 0.4 },
            ],
        ),
    ];
    for (name, specs) in cases {
        let mean: f64 = specs.iter().map(BoundedDistSpec::mean).sum();
        let bound = theorem1_finite(BoundQuery::new(mean, specs.len() as u64)?)?.value;
        let mc = monte_carlo_tail(&specs, 200_000, 42)?;
        println!(
            "{name:>12}: estimate {:.4} +/- {:.4}, bound {:.4} at mean {mean:.3}",
            mc.estimate, mc.ci_halfwidth, bound
        );
        assert!(mc.estimate - mc.ci_halfwidth <= bound);
    }
    Ok(())
}

fn main() -> tailbound::Result<()> {
    run_example()
}
