//! Exhaustive search over Bernoulli mean vectors `q` in `[0,1]^n` with
//! `sum(q) = lambda`, maximising `L_n(q) = P(B_1 + ... + B_n <= 1)`.

use rayon::prelude::*;

use super::{bernoulli_tail, multiset_count, unit_grid, Argmax, SearchReport, MAX_GRID_POINTS};
use crate::bounds::{theorem1_finite, BoundQuery};
use crate::error::{domain, Error, Result};

const SUM_SLACK: f64 = 1e-9;
const GOLDEN_ITERATIONS: usize = 80;
const REFINE_MIN_GAIN: f64 = 1e-10;
const REFINE_MAX_PASSES: usize = 200;

/// A vector of Bernoulli means with a fixed total.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    q: Vec<f64>,
    target_sum: f64,
}

impl SimplexPoint {
    pub fn new(q: Vec<f64>, target_sum: f64) -> Result<Self> {
        if q.is_empty() {
            return Err(domain("a simplex point needs at least one coordinate"));
        }
        if let Some(bad) = q.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(domain(format!("coordinate {bad} lies outside [0,1]")));
        }
        let sum: f64 = q.iter().sum();
        if (sum - target_sum).abs() > SUM_SLACK {
            return Err(domain(format!(
                "coordinates sum to {sum}, expected {target_sum}"
            )));
        }
        Ok(Self { q, target_sum })
    }

    /// Uses the coordinates' own sum as the target.
    pub fn from_means(q: Vec<f64>) -> Result<Self> {
        let sum = q.iter().sum();
        Self::new(q, sum)
    }

    pub fn coords(&self) -> &[f64] {
        &self.q
    }

    pub fn target_sum(&self) -> f64 {
        self.target_sum
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

/// `L_n(q) = prod(1 - q_i) + sum_j q_j prod_{i != j} (1 - q_i)`.
pub fn l_n(point: &SimplexPoint) -> f64 {
    bernoulli_tail(&point.q)
}

/// Where a maximiser sits relative to the structural candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgmaxShape {
    /// All coordinates close to `lambda / n`.
    Symmetric,
    /// Some coordinate close to 0 or 1.
    Boundary,
    Other,
}

/// Distance from `point` to the nearest structural candidate: the symmetric
/// point `(lambda/n, ..., lambda/n)` in the max norm, or the faces
/// `q_i in {0, 1}`.
pub fn structural_distance(point: &SimplexPoint) -> f64 {
    let centre = point.target_sum / point.len() as f64;
    let to_centre = point.q.iter().map(|v| (v - centre).abs()).fold(0.0, f64::max);
    let to_face = point
        .q
        .iter()
        .map(|v| v.min(1.0 - v))
        .fold(f64::INFINITY, f64::min);
    to_centre.min(to_face)
}

pub fn classify_argmax(point: &SimplexPoint, resolution: f64) -> ArgmaxShape {
    let centre = point.target_sum / point.len() as f64;
    if point.q.iter().all(|v| (v - centre).abs() <= resolution) {
        ArgmaxShape::Symmetric
    } else if point.q.iter().any(|&v| v <= resolution || v >= 1.0 - resolution) {
        ArgmaxShape::Boundary
    } else {
        ArgmaxShape::Other
    }
}

#[derive(Debug, Clone)]
struct Best {
    value: f64,
    q: Vec<f64>,
    evaluated: u64,
}

impl Best {
    fn empty() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            q: Vec::new(),
            evaluated: 0,
        }
    }

    /// Keeps `self` on ties, so merging shards left to right is deterministic.
    fn merge(mut self, other: Best) -> Best {
        self.evaluated += other.evaluated;
        if other.value > self.value {
            self.value = other.value;
            self.q = other.q;
        }
        self
    }
}

struct Enumerator<'a> {
    grid: &'a [f64],
    lambda: f64,
    free_slots: usize,
}

impl Enumerator<'_> {
    /// Fills `prefix` with non-decreasing grid indices and sets the last
    /// coordinate to whatever makes the sum exact.
    fn walk(&self, prefix: &mut Vec<f64>, start: usize, partial: f64, best: &mut Best) {
        let remaining = self.free_slots - prefix.len();
        if remaining == 0 {
            let last = self.lambda - partial;
            if !(-SUM_SLACK..=1.0 + SUM_SLACK).contains(&last) {
                return;
            }
            prefix.push(last.clamp(0.0, 1.0));
            let value = bernoulli_tail(prefix);
            best.evaluated += 1;
            if value > best.value {
                best.value = value;
                best.q.clone_from(prefix);
            }
            prefix.pop();
            return;
        }
        for idx in start..self.grid.len() {
            let v = self.grid[idx];
            // every later coordinate is at least v
            if partial + remaining as f64 * v > self.lambda + SUM_SLACK {
                break;
            }
            // the rest can add at most 1 each, plus the free coordinate
            if partial + v + (remaining as f64) < self.lambda - SUM_SLACK {
                continue;
            }
            prefix.push(v);
            self.walk(prefix, idx, partial + v, best);
            prefix.pop();
        }
    }
}

/// Maximises `L_n` over the slice `{q in [0,1]^n : sum q = lambda}`.
///
/// The first `n - 1` coordinates range over non-decreasing sequences of grid
/// multiples of `resolution` (`L_n` is symmetric in its arguments), the last
/// closes the sum. The best grid point is then polished by golden-section line
/// searches along `q_i + t, q_j - t` for every pair. `bound_value` is the
/// finite-`n` envelope at `(lambda, n)`.
pub fn maximize_ln(n: usize, lambda: f64, resolution: f64) -> Result<SearchReport> {
    if !(2..=6).contains(&n) {
        return Err(domain(format!("simplex search supports 2 <= n <= 6, got {n}")));
    }
    if !(1e-3..=0.1).contains(&resolution) {
        return Err(domain(format!(
            "resolution must lie in [1e-3, 0.1], got {resolution}"
        )));
    }
    let query = BoundQuery::new(lambda, n as u64)?;
    let grid = unit_grid(resolution);
    let size = multiset_count(grid.len(), n - 1);
    if size > MAX_GRID_POINTS {
        return Err(Error::Resource(format!(
            "simplex grid has {size:.3e} points (limit {MAX_GRID_POINTS:e})"
        )));
    }

    let walker = Enumerator {
        grid: &grid,
        lambda,
        free_slots: n - 1,
    };
    let best = (0..grid.len())
        .into_par_iter()
        .map(|first| {
            let mut best = Best::empty();
            let v = grid[first];
            if (n - 1) as f64 * v <= lambda + SUM_SLACK {
                let mut prefix = vec![v];
                walker.walk(&mut prefix, first, v, &mut best);
            }
            best
        })
        .reduce(Best::empty, Best::merge);

    if best.q.is_empty() {
        return Err(domain(format!("no grid point sums to lambda = {lambda}")));
    }

    let mut q = best.q;
    let (refined, refine_evals) = refine(&mut q, best.value);
    q.sort_by(f64::total_cmp);
    let bound_value = theorem1_finite(query)?.value;
    Ok(SearchReport {
        max_value: refined,
        argmax: Argmax::Simplex(SimplexPoint {
            q,
            target_sum: lambda,
        }),
        bound_value,
        slack: bound_value - refined,
        resolution,
        points_evaluated: best.evaluated + refine_evals,
    })
}

/// Pairwise line searches. Along `q_i + t, q_j - t` the objective is a
/// quadratic in `t`, so the endpoints are checked alongside the golden-section
/// interior estimate.
fn refine(q: &mut [f64], start: f64) -> (f64, u64) {
    let n = q.len();
    let mut value = start;
    let mut evals = 0u64;
    let mut trial = q.to_vec();
    for _ in 0..REFINE_MAX_PASSES {
        let before = value;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let lo = (-q[i]).max(q[j] - 1.0);
                let hi = (1.0 - q[i]).min(q[j]);
                if hi - lo <= 0.0 {
                    continue;
                }
                let mut eval = |t: f64| {
                    trial.copy_from_slice(q);
                    trial[i] = (q[i] + t).clamp(0.0, 1.0);
                    trial[j] = (q[j] - t).clamp(0.0, 1.0);
                    evals += 1;
                    bernoulli_tail(&trial)
                };
                let mut best_t = 0.0;
                let mut best_v = value;
                for (t, v) in [lo, hi, golden_max(&mut eval, lo, hi)]
                    .map(|t| (t, eval(t)))
                {
                    if v > best_v {
                        best_t = t;
                        best_v = v;
                    }
                }
                if best_v > value {
                    q[i] = (q[i] + best_t).clamp(0.0, 1.0);
                    q[j] = (q[j] - best_t).clamp(0.0, 1.0);
                    value = best_v;
                }
            }
        }
        if value - before < REFINE_MIN_GAIN {
            break;
        }
    }
    (value, evals)
}

fn golden_max(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
