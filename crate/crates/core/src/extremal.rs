//! The binomial and shifted-binomial distributions that attain each term of
//! the finite-`n` bound, and the Poisson tail they converge to.

use statrs::function::gamma::ln_gamma;

use crate::bounds::{f_branch, g_branch, BoundQuery, Branch};
use crate::error::{domain, Result};
use crate::numeric::pow_one_minus;

/// Trial counts above this use log-gamma coefficients; below, exact integers.
/// `C(60, 30)` is about `1.2e17`, well inside `u64`.
pub const EXACT_COEFFICIENT_LIMIT: u64 = 60;

/// `shift + binomial(p, trials)`, with `p` the success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialSpec {
    p: f64,
    trials: u64,
    shift: u8,
}

impl BinomialSpec {
    pub fn new(p: f64, trials: u64, shift: u8) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("success probability must lie in [0,1], got {p}")));
        }
        if shift > 1 {
            return Err(domain(format!("shift must be 0 or 1, got {shift}")));
        }
        Ok(Self { p, trials, shift })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn shift(&self) -> u8 {
        self.shift
    }

    pub fn mean(&self) -> f64 {
        self.shift as f64 + self.trials as f64 * self.p
    }
}

fn exact_binomial_coefficient(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c as f64
}

fn ln_binomial_coefficient(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `P(V = k)` for `V = shift + binomial(p, trials)`; 0 outside the support.
pub fn binomial_pmf(spec: &BinomialSpec, k: i64) -> f64 {
    let j = k - spec.shift as i64;
    if j < 0 || j as u64 > spec.trials {
        return 0.0;
    }
    let j = j as u64;
    let n = spec.trials;
    // point masses, avoiding 0 * ln 0
    if spec.p == 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    if spec.p == 1.0 {
        return if j == n { 1.0 } else { 0.0 };
    }
    if n <= EXACT_COEFFICIENT_LIMIT {
        exact_binomial_coefficient(n, j) * spec.p.powi(j as i32) * pow_one_minus(spec.p, n - j)
    } else {
        (ln_binomial_coefficient(n, j) + j as f64 * spec.p.ln() + (n - j) as f64 * (-spec.p).ln_1p())
            .exp()
    }
}

/// `P(V <= 1)`. For the shifted family the support starts at 1, so only the
/// atom at 1 contributes.
pub fn tail_at_most_one(spec: &BinomialSpec) -> f64 {
    (0..=1).map(|k| binomial_pmf(spec, k)).sum()
}

/// The extremal distribution attaining the given branch at mean `lambda`:
/// `binomial(lambda/n, n)` for the first term and
/// `1 + binomial((lambda-1)/(n-1), n-1)` for the second.
pub fn extremal_for_branch(q: BoundQuery, branch: Branch) -> Result<BinomialSpec> {
    let (lambda, n) = (q.lambda(), q.n());
    match branch {
        Branch::FirstMaxTerm => BinomialSpec::new(lambda / n as f64, n, 0),
        Branch::SecondMaxTerm => {
            if n < 2 || lambda < 1.0 {
                return Err(domain(format!(
                    "the shifted extremal needs n >= 2 and lambda >= 1, got n = {n}, lambda = {lambda}"
                )));
            }
            BinomialSpec::new((lambda - 1.0) / (n - 1) as f64, n - 1, 1)
        }
        other => Err(domain(format!("no extremal distribution for branch {other}"))),
    }
}

/// The bound term for one branch next to the tail of the distribution attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessReport {
    pub query: BoundQuery,
    pub branch: Branch,
    pub bound_value: f64,
    pub extremal_tail: f64,
    pub gap: f64,
}

/// Compares `F_n` and `G_n` against `P(V <= 1)` of their extremal distributions.
/// Returns one report per branch, first term first.
pub fn verify_tightness(q: BoundQuery) -> Result<[TightnessReport; 2]> {
    if q.lambda() < 1.0 || q.n() < 2 {
        return Err(domain(format!(
            "tightness is checked for 1 <= lambda <= n with n >= 2, got lambda = {}, n = {}",
            q.lambda(),
            q.n()
        )));
    }
    let report = |branch: Branch, bound_value: f64| -> Result<TightnessReport> {
        let extremal_tail = tail_at_most_one(&extremal_for_branch(q, branch)?);
        Ok(TightnessReport {
            query: q,
            branch,
            bound_value,
            extremal_tail,
            gap: (bound_value - extremal_tail).abs(),
        })
    };
    Ok([
        report(Branch::FirstMaxTerm, f_branch(q))?,
        report(Branch::SecondMaxTerm, g_branch(q)?)?,
    ])
}

/// `P(Poisson(lambda) <= 1) = (1 + lambda) e^-lambda`.
pub fn poisson_tail_at_most_one(lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(domain(format!("lambda must be non-negative, got {lambda}")));
    }
    Ok((1.0 + lambda) * (-lambda).exp())
}

/// `|F_n(lambda) - (1 + lambda) e^-lambda|`, the distance from the binomial
/// tail to its Poisson limit.
pub fn poisson_limit_gap(lambda: f64, n: u64) -> Result<f64> {
    let q = BoundQuery::new(lambda, n)?;
    Ok((f_branch(q) - poisson_tail_at_most_one(lambda)?).abs())
}
