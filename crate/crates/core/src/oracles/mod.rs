//! Brute-force and Monte Carlo oracles for the reduction chain behind the
//! finite-`n` bound: general bounded sums are dominated by two-point sums,
//! two-point sums by Bernoulli sums, and Bernoulli sums by (shifted) binomials.

mod monte_carlo;
mod simplex;
mod two_point;

pub use monte_carlo::{monte_carlo_tail, BoundedDistSpec, MonteCarloEstimate, MIN_TRIALS};
pub use simplex::{classify_argmax, l_n, maximize_ln, structural_distance, ArgmaxShape, SimplexPoint};
pub use two_point::{maximize_two_point, two_point_mean, two_point_tail, TwoPoint, TwoPointSpec};

/// Sums within this distance above 1 still count as `<= 1`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Searches refuse to enumerate more points than this.
pub const MAX_GRID_POINTS: f64 = 1e9;

/// The maximiser found by a search.
#[derive(Debug, Clone, PartialEq)]
pub enum Argmax {
    Simplex(SimplexPoint),
    TwoPoint(TwoPointSpec),
}

/// Outcome of a grid search for the largest `P(sum <= 1)` at a fixed mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub max_value: f64,
    pub argmax: Argmax,
    /// The finite-`n` envelope the maximum is compared against.
    pub bound_value: f64,
    /// `bound_value - max_value`.
    pub slack: f64,
    pub resolution: f64,
    pub points_evaluated: u64,
}

impl SearchReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.slack >= -tolerance
    }
}

/// Multiples of `resolution` in `[0, 1]`, with 1 appended when it is not a multiple.
pub(crate) fn unit_grid(resolution: f64) -> Vec<f64> {
    let mut values: Vec<f64> = crate::numeric::grid(0.0, 1.0, resolution)
        .map(|v| v.min(1.0))
        .collect();
    if values.last().is_some_and(|&v| v < 1.0 - 1e-12) {
        values.push(1.0);
    } else if let Some(last) = values.last_mut() {
        *last = 1.0;
    }
    values
}

/// Multisets of size `k` drawn from `m` items, `C(m + k - 1, k)`, as a float.
pub(crate) fn multiset_count(m: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m + i) as f64 / (i + 1) as f64)
}

/// `P(B_1 + ... + B_n <= 1)` for independent Bernoullis with the given means,
/// tracking the masses at 0 and 1.
pub(crate) fn bernoulli_tail(means: &[f64]) -> f64 {
    let (mut p0, mut p1) = (1.0, 0.0);
    for &q in means {
        p1 = p1 * (1.0 - q) + p0 * q;
        p0 *= 1.0 - q;
    }
    p0 + p1
}
