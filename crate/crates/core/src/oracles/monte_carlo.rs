//! Seeded Monte Carlo estimate of `P(S <= 1)` for sums of bounded variables.
//!
//! Trials are split into fixed-size chunks; chunk `c` draws from a ChaCha8
//! stream seeded with `seed` and stream id `c`. The estimate therefore does not
//! depend on how chunks are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SUM_TOLERANCE;
use crate::error::{domain, Error, Result};

pub const MIN_TRIALS: u64 = 1000;
const CHUNK_TRIALS: u64 = 1 << 16;
const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// The law of one summand, supported in `[0, 1]`.
///
/// Serialised with a `type` tag: `{"type": "two-point", "low", "high", "p"}`,
/// `{"type": "uniform", "lo", "hi"}` or `{"type": "discrete", "points", "probs"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundedDistSpec {
    TwoPoint {
        low: f64,
        high: f64,
        #[serde(rename = "p")]
        prob_high: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Discrete {
        points: Vec<f64>,
        probs: Vec<f64>,
    },
}

fn in_unit(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

impl BoundedDistSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            BoundedDistSpec::TwoPoint {
                low,
                high,
                prob_high,
            } => {
                if !(in_unit(*low) && in_unit(*high) && low <= high) {
                    return Err(domain(format!(
                        "two-point needs 0 <= low <= high <= 1, got {low}, {high}"
                    )));
                }
                if !in_unit(*prob_high) {
                    return Err(domain(format!("two-point p = {prob_high} lies outside [0,1]")));
                }
            }
            BoundedDistSpec::Uniform { lo, hi } => {
                if !(in_unit(*lo) && in_unit(*hi) && lo <= hi) {
                    return Err(domain(format!("uniform needs 0 <= lo <= hi <= 1, got {lo}, {hi}")));
                }
            }
            BoundedDistSpec::Discrete { points, probs } => {
                if points.is_empty() || points.len() != probs.len() {
                    return Err(domain(format!(
                        "discrete needs matching non-empty points and probs, got {} and {}",
                        points.len(),
                        probs.len()
                    )));
                }
                if let Some(p) = points.iter().find(|p| !in_unit(**p)) {
                    return Err(domain(format!("discrete support point {p} lies outside [0,1]")));
                }
                if let Some(p) = probs.iter().find(|p| !in_unit(**p)) {
                    return Err(domain(format!("discrete probability {p} lies outside [0,1]")));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > PROB_SUM_TOLERANCE {
                    return Err(domain(format!("discrete probabilities sum to {total}, not 1")));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match self {
            BoundedDistSpec::TwoPoint {
                low,
                high,
                prob_high,
            } => low + prob_high * (high - low),
            BoundedDistSpec::Uniform { lo, hi } => 0.5 * (lo + hi),
            BoundedDistSpec::Discrete { points, probs } => {
                points.iter().zip(probs).map(|(x, p)| x * p).sum()
            }
        }
    }

    /// Inverse-transform sample from a uniform `u` in `[0, 1)`.
    pub fn sample(&self, u: f64) -> f64 {
        match self {
            BoundedDistSpec::TwoPoint {
                low,
                high,
                prob_high,
            } => {
                if u < *prob_high {
                    *high
                } else {
                    *low
                }
            }
            BoundedDistSpec::Uniform { lo, hi } => lo + u * (hi - lo),
            BoundedDistSpec::Discrete { points, probs } => {
                let mut cumulative = 0.0;
                for (x, p) in points.iter().zip(probs) {
                    cumulative += p;
                    if u < cumulative {
                        return *x;
                    }
                }
                // rounding left u above the final cumulative mass
                *points.last().expect("validated non-empty")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    /// Fraction of trials with sum `<= 1`.
    pub estimate: f64,
    /// Three binomial standard errors, `3 sqrt(est (1 - est) / trials)`.
    pub ci_halfwidth: f64,
    pub trials: u64,
}

fn count_chunk(specs: &[BoundedDistSpec], seed: u64, chunk: u64, len: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut hits = 0;
    for _ in 0..len {
        let sum: f64 = specs.iter().map(|s| s.sample(rng.random::<f64>())).sum();
        if sum <= 1.0 + SUM_TOLERANCE {
            hits += 1;
        }
    }
    hits
}

/// Estimates `P(X_1 + ... + X_n <= 1)` from `trials` independent draws.
pub fn monte_carlo_tail(
    specs: &[BoundedDistSpec],
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if specs.is_empty() {
        return Err(Error::Argument("no distributions given".into()));
    }
    if trials < MIN_TRIALS {
        return Err(Error::Argument(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    for spec in specs {
        spec.validate()?;
    }
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            count_chunk(specs, seed, c, len)
        })
        .sum();
    let estimate = hits as f64 / trials as f64;
    Ok(MonteCarloEstimate {
        estimate,
        ci_halfwidth: 3.0 * (estimate * (1.0 - estimate) / trials as f64).sqrt(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_tight_case() {
        let specs = vec![
            BoundedDistSpec::TwoPoint {
                low: 0.0,
                high: 1.0,
                prob_high: 0.5
            };
            4
        ];
        let mc = monte_carlo_tail(&specs, 200_000, 7).unwrap();
        assert!((mc.estimate - 0.3125).abs() <= mc.ci_halfwidth);
    }

    #[test]
    fn uniform_simplex_volume() {
        let specs = vec![BoundedDistSpec::Uniform { lo: 0.0, hi: 1.0 }; 3];
        let mc = monte_carlo_tail(&specs, 200_000, 11).unwrap();
        assert!((mc.estimate - 1.0 / 6.0).abs() <= mc.ci_halfwidth);
    }

    #[test]
    fn point_mass_at_zero() {
        let specs = vec![BoundedDistSpec::Discrete {
            points: vec![0.0],
            probs: vec![1.0],
        }];
        let mc = monte_carlo_tail(&specs, 1000, 0).unwrap();
        assert_eq!((mc.estimate, mc.ci_halfwidth), (1.0, 0.0));
    }

    #[test]
    fn same_seed_same_estimate() {
        let specs = vec![
            BoundedDistSpec::Uniform { lo: 0.1, hi: 0.6 },
            BoundedDistSpec::Discrete {
                points: vec![0.0, 0.5, 1.0],
                probs: vec![0.25, 0.5, 0.25],
            },
        ];
        let a = monte_carlo_tail(&specs, 150_000, 3).unwrap();
        let b = monte_carlo_tail(&specs, 150_000, 3).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        let c = monte_carlo_tail(&specs, 150_000, 4).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(monte_carlo_tail(&[], 1000, 0), Err(Error::Argument(_))));
        let specs = vec![BoundedDistSpec::Uniform { lo: 0.0, hi: 1.0 }];
        assert!(matches!(monte_carlo_tail(&specs, 999, 0), Err(Error::Argument(_))));
        let bad = vec![BoundedDistSpec::Uniform { lo: 0.5, hi: 1.5 }];
        assert!(matches!(monte_carlo_tail(&bad, 1000, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn validation_rules() {
        let bad = [
            BoundedDistSpec::TwoPoint {
                low: 0.7,
                high: 0.2,
                prob_high: 0.5,
            },
            BoundedDistSpec::TwoPoint {
                low: 0.0,
                high: 1.0,
                prob_high: 1.2,
            },
            BoundedDistSpec::Discrete {
                points: vec![0.0, 1.0],
                probs: vec![0.5],
            },
            BoundedDistSpec::Discrete {
                points: vec![0.0, 1.0],
                probs: vec![0.5, 0.6],
            },
            BoundedDistSpec::Discrete {
                points: vec![],
                probs: vec![],
            },
        ];
        for spec in bad {
            assert!(spec.validate().is_err(), "{spec:?}");
        }
    }

    #[test]
    fn json_schema() {
        let json = r#"[
            {"type": "two-point", "low": 0, "high": 1, "p": 0.5},
            {"type": "uniform", "lo": 0.0, "hi": 1.0},
            {"type": "discrete", "points": [0.0, 0.5], "probs": [0.5, 0.5]}
        ]"#;
        let specs: Vec<BoundedDistSpec> = serde_json::from_str(json).unwrap();
        assert_eq!(
            specs[0],
            BoundedDistSpec::TwoPoint {
                low: 0.0,
                high: 1.0,
                prob_high: 0.5
            }
        );
        assert!((specs.iter().map(BoundedDistSpec::mean).sum::<f64>() - 1.25).abs() < 1e-15);
        assert!(serde_json::from_str::<Vec<BoundedDistSpec>>(r#"[{"type": "beta"}]"#).is_err());
        assert!(
            serde_json::from_str::<Vec<BoundedDistSpec>>(r#"[{"type": "uniform", "lo": 0}]"#)
                .is_err()
        );
    }
}
