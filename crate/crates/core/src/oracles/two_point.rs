//! Sums of independent two-point variables, each equal to `low` or `high`.

use rayon::prelude::*;

use super::{multiset_count, unit_grid, Argmax, SearchReport, MAX_GRID_POINTS, SUM_TOLERANCE};
use crate::bounds::{theorem1_finite, BoundQuery};
use crate::error::{domain, Error, Result};

/// Longest sum [`two_point_tail`] will enumerate (`2^20` outcomes).
pub const MAX_ENUMERATED_SUMMANDS: usize = 20;

/// A variable equal to `high` with probability `prob_high` and to `low` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPoint {
    pub low: f64,
    pub high: f64,
    pub prob_high: f64,
}

impl TwoPoint {
    pub fn new(low: f64, high: f64, prob_high: f64) -> Result<Self> {
        if !(0.0 <= low && low <= high && high <= 1.0) {
            return Err(domain(format!(
                "two-point values need 0 <= low <= high <= 1, got low = {low}, high = {high}"
            )));
        }
        if !(0.0..=1.0).contains(&prob_high) {
            return Err(domain(format!("probability {prob_high} lies outside [0,1]")));
        }
        Ok(Self {
            low,
            high,
            prob_high,
        })
    }

    pub fn mean(&self) -> f64 {
        self.low + self.prob_high * (self.high - self.low)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPointSpec {
    summands: Vec<TwoPoint>,
}

impl TwoPointSpec {
    pub fn new(summands: Vec<TwoPoint>) -> Self {
        Self { summands }
    }

    pub fn summands(&self) -> &[TwoPoint] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }
}

fn tail(summands: &[TwoPoint]) -> f64 {
    let n = summands.len();
    let mut total = 0.0;
    for mask in 0u32..1 << n {
        let mut sum = 0.0;
        let mut prob = 1.0;
        for (i, s) in summands.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum += s.high;
                prob *= s.prob_high;
            } else {
                sum += s.low;
                prob *= 1.0 - s.prob_high;
            }
        }
        if sum <= 1.0 + SUM_TOLERANCE {
            total += prob;
        }
    }
    total
}

/// Exact `P(T <= 1)` by enumerating all `2^n` value combinations. A total of
/// exactly 1 counts as `<= 1`.
pub fn two_point_tail(spec: &TwoPointSpec) -> Result<f64> {
    if spec.len() > MAX_ENUMERATED_SUMMANDS {
        return Err(Error::Resource(format!(
            "enumerating {} two-point summands needs 2^{} outcomes (limit 2^{MAX_ENUMERATED_SUMMANDS})",
            spec.len(),
            spec.len()
        )));
    }
    Ok(tail(&spec.summands))
}

pub fn two_point_mean(spec: &TwoPointSpec) -> f64 {
    spec.summands.iter().map(TwoPoint::mean).sum()
}

struct Catalogue {
    summands: Vec<TwoPoint>,
    means: Vec<f64>,
}

impl Catalogue {
    /// Distinct two-point laws on the grid: point masses, plus `low < high`
    /// with `prob_high` strictly inside `(0, 1)`. Sorted by mean.
    fn build(resolution: f64) -> Self {
        let grid = unit_grid(resolution);
        let mut summands: Vec<TwoPoint> = grid
            .iter()
            .map(|&v| TwoPoint {
                low: v,
                high: v,
                prob_high: 0.0,
            })
            .collect();
        let interior = &grid[1..grid.len() - 1];
        for (i, &low) in grid.iter().enumerate() {
            for &high in &grid[i + 1..] {
                summands.extend(interior.iter().map(|&prob_high| TwoPoint {
                    low,
                    high,
                    prob_high,
                }));
            }
        }
        summands.sort_by(|a, b| a.mean().total_cmp(&b.mean()));
        let means = summands.iter().map(TwoPoint::mean).collect();
        Self { summands, means }
    }

    /// Index range `start..` whose means fall in `[lo, hi]`.
    fn mean_range(&self, start: usize, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let tail = &self.means[start..];
        let a = tail.partition_point(|&m| m < lo);
        let b = tail.partition_point(|&m| m <= hi);
        start + a..start + b.max(a)
    }
}

struct Walk<'a> {
    cat: &'a Catalogue,
    n: usize,
    lo: f64,
    hi: f64,
    max_mean: f64,
}

#[derive(Debug, Clone)]
struct Best {
    value: f64,
    picks: Vec<usize>,
    evaluated: u64,
}

impl Best {
    fn empty() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            picks: Vec::new(),
            evaluated: 0,
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.evaluated += other.evaluated;
        if other.value > self.value {
            self.value = other.value;
            self.picks = other.picks;
        }
        self
    }
}

impl Walk<'_> {
    /// Visits non-decreasing index tuples whose total mean lies in `[lo, hi]`.
    /// With `evaluate == false` only counts them.
    fn visit(
        &self,
        picks: &mut Vec<usize>,
        scratch: &mut Vec<TwoPoint>,
        start: usize,
        partial: f64,
        best: &mut Best,
        evaluate: bool,
    ) {
        let remaining = self.n - picks.len();
        if remaining == 1 {
            let range = self
                .cat
                .mean_range(start, self.lo - partial, self.hi - partial);
            if !evaluate {
                best.evaluated += range.len() as u64;
                return;
            }
            for idx in range {
                picks.push(idx);
                scratch.clear();
                scratch.extend(picks.iter().map(|&i| self.cat.summands[i]));
                let value = tail(scratch);
                best.evaluated += 1;
                if value > best.value {
                    best.value = value;
                    best.picks.clone_from(picks);
                }
                picks.pop();
            }
            return;
        }
        for idx in start..self.cat.means.len() {
            let m = self.cat.means[idx];
            if partial + remaining as f64 * m > self.hi {
                break;
            }
            if partial + m + (remaining - 1) as f64 * self.max_mean < self.lo {
                continue;
            }
            picks.push(idx);
            self.visit(picks, scratch, idx, partial + m, best, evaluate);
            picks.pop();
        }
    }

    fn run(&self, evaluate: bool) -> Best {
        (0..self.cat.means.len())
            .into_par_iter()
            .map(|first| {
                let mut best = Best::empty();
                let m = self.cat.means[first];
                if self.n as f64 * m > self.hi
                    || m + (self.n - 1) as f64 * self.max_mean < self.lo
                {
                    return best;
                }
                let mut picks = vec![first];
                let mut scratch = Vec::with_capacity(self.n);
                self.visit(&mut picks, &mut scratch, first, m, &mut best, evaluate);
                best
            })
            .reduce(Best::empty, Best::merge)
    }
}

/// Maximises `P(T <= 1)` over sums of `n` two-point variables whose values and
/// probabilities lie on a grid of spacing `resolution`, keeping those with
/// `|E T - lambda| <= resolution`.
///
/// Because the envelope is non-increasing in `lambda`, every kept sum is
/// dominated by the envelope at `lambda - resolution`, which is the reported
/// `bound_value`.
pub fn maximize_two_point(n: usize, lambda: f64, resolution: f64) -> Result<SearchReport> {
    if !(2..=3).contains(&n) {
        return Err(domain(format!("two-point search supports n in {{2, 3}}, got {n}")));
    }
    if !(0.05..=0.5).contains(&resolution) {
        return Err(domain(format!(
            "resolution must lie in [0.05, 0.5], got {resolution}"
        )));
    }
    BoundQuery::new(lambda, n as u64)?;

    let cat = Catalogue::build(resolution);
    let walk = Walk {
        cat: &cat,
        n,
        lo: lambda - resolution,
        hi: lambda + resolution,
        max_mean: *cat.means.last().expect("catalogue is never empty"),
    };
    let upper = multiset_count(cat.summands.len(), n);
    if upper > MAX_GRID_POINTS {
        let feasible = walk.run(false).evaluated as f64;
        if feasible > MAX_GRID_POINTS {
            return Err(Error::Resource(format!(
                "two-point search has {feasible:.3e} mean-feasible specs (limit {MAX_GRID_POINTS:e})"
            )));
        }
    }
    let best = walk.run(true);
    if best.picks.is_empty() {
        return Err(domain(format!(
            "no grid spec has mean within {resolution} of {lambda}"
        )));
    }

    let spec = TwoPointSpec::new(best.picks.iter().map(|&i| cat.summands[i]).collect());
    let adjusted = BoundQuery::new((lambda - resolution).max(0.0), n as u64)?;
    let bound_value = theorem1_finite(adjusted)?.value;
    Ok(SearchReport {
        max_value: best.value,
        argmax: Argmax::TwoPoint(spec),
        bound_value,
        slack: bound_value - best.value,
        resolution,
        points_evaluated: best.evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tp(low: f64, high: f64, p: f64) -> TwoPoint {
        TwoPoint::new(low, high, p).unwrap()
    }

    #[test]
    fn tail_examples() {
        let spec = TwoPointSpec::new(vec![tp(0.6, 0.6, 0.3); 2]);
        assert_eq!(two_point_tail(&spec).unwrap(), 0.0);

        let spec = TwoPointSpec::new(vec![tp(0.0, 1.0, 0.5); 2]);
        assert_abs_diff_eq!(two_point_tail(&spec).unwrap(), 0.75, epsilon = 1e-15);

        for s in [tp(0.0, 1.0, 0.9), tp(1.0, 1.0, 0.0), tp(0.3, 0.8, 0.4)] {
            assert_eq!(two_point_tail(&TwoPointSpec::new(vec![s])).unwrap(), 1.0);
        }
    }

    #[test]
    fn sum_exactly_one_counts() {
        let spec = TwoPointSpec::new(vec![tp(0.1, 0.1, 0.0), tp(0.2, 0.2, 0.0), tp(0.7, 0.7, 0.0)]);
        assert_eq!(two_point_tail(&spec).unwrap(), 1.0);
    }

    #[test]
    fn mean_examples() {
        let spec = TwoPointSpec::new(vec![tp(0.1, 0.5, 0.0), tp(0.3, 0.9, 0.0)]);
        assert_abs_diff_eq!(two_point_mean(&spec), 0.4, epsilon = 1e-15);
        let spec = TwoPointSpec::new(vec![tp(0.0, 1.0, 0.5); 2]);
        assert_eq!(two_point_mean(&spec), 1.0);
        let spec = TwoPointSpec::new(vec![tp(0.2, 0.8, 0.25)]);
        assert_abs_diff_eq!(two_point_mean(&spec), 0.35, epsilon = 1e-15);
    }

    #[test]
    fn validation() {
        assert!(TwoPoint::new(0.5, 0.4, 0.5).is_err());
        assert!(TwoPoint::new(-0.1, 0.4, 0.5).is_err());
        assert!(TwoPoint::new(0.1, 1.4, 0.5).is_err());
        assert!(TwoPoint::new(0.1, 0.4, 1.5).is_err());
        let long = TwoPointSpec::new(vec![tp(0.0, 0.1, 0.5); 21]);
        assert!(matches!(two_point_tail(&long), Err(Error::Resource(_))));
    }

    #[test]
    fn catalogue_is_sorted_and_distinct() {
        let cat = Catalogue::build(0.1);
        assert_eq!(cat.summands.len(), 11 + 55 * 9);
        assert!(cat.means.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn n2_search_respects_bound() {
        let r = maximize_two_point(2, 1.5, 0.05).unwrap();
        assert!(r.passes(1e-12), "{r:?}");
        assert!(r.max_value <= 0.5 + 0.05);
    }

    #[test]
    fn degenerate_full_mean() {
        let r = maximize_two_point(2, 2.0, 0.05).unwrap();
        assert!(r.passes(1e-12));
        // the band admits means down to 1.95, whose envelope is 0.05
        assert!(r.max_value <= 0.05 + 1e-12);
    }

    #[test]
    fn small_lambda_is_vacuous() {
        let r = maximize_two_point(3, 1.0, 0.1).unwrap();
        assert_abs_diff_eq!(r.max_value, 1.0, epsilon = 1e-12);
        assert_eq!(r.bound_value, 1.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(maximize_two_point(4, 1.0, 0.1).is_err());
        assert!(maximize_two_point(2, 1.0, 0.01).is_err());
        assert!(maximize_two_point(2, 2.5, 0.1).is_err());
    }
}
