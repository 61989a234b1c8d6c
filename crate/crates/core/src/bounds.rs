//! Closed-form upper bounds on `P(S <= 1)`.
//!
//! Every bound takes the mean `lambda = E S` and, where it depends on it, the
//! number of summands `n`. Results are probabilities: a raw value above 1 is
//! clamped and flagged, and the raw value is kept for ratio comparisons.

use std::f64::consts::E;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::numeric::pow_one_minus;

/// Iteration cap for [`solve_corollary_constants`].
pub const MAX_FIXED_POINT_ITERATIONS: usize = 10_000;

/// Starting point of the fixed-point iteration for `a0`.
pub const FIXED_POINT_START: f64 = 0.5;

/// The mean `lambda = E S` together with the number of summands `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    lambda: f64,
    n: u64,
}

impl BoundQuery {
    /// Fails unless `n >= 1` and `0 <= lambda <= n`.
    pub fn new(lambda: f64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(domain("n must be at least 1"));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(domain(format!("lambda must be non-negative, got {lambda}")));
        }
        if lambda > n as f64 {
            return Err(domain(format!(
                "lambda = {lambda} exceeds n = {n}; a sum of n values in [0,1] has mean at most n"
            )));
        }
        Ok(Self { lambda, n })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// Which bound produced a [`BoundResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Theorem1,
    Theorem1Limit,
    Hoeffding,
    Bentkus,
    BentkusSimple,
    Corollary1,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Theorem1,
        Method::Theorem1Limit,
        Method::Hoeffding,
        Method::Bentkus,
        Method::BentkusSimple,
        Method::Corollary1,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Theorem1 => "theorem1",
            Method::Theorem1Limit => "theorem1-limit",
            Method::Hoeffding => "hoeffding",
            Method::Bentkus => "bentkus",
            Method::BentkusSimple => "bentkus-simple",
            Method::Corollary1 => "corollary1",
        }
    }

    /// Whether the bound is a maximum of two terms.
    pub fn has_two_term_max(&self) -> bool {
        matches!(self, Method::Theorem1 | Method::Theorem1Limit)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Argument(format!("unknown method `{s}`")))
    }
}

/// Which term or regime of a bound is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// The binomial term `F_n` (or `(1 + lambda) e^-lambda` in the limit).
    FirstMaxTerm,
    /// The shifted-binomial term `G_n` (or `e^(1 - lambda)` in the limit).
    SecondMaxTerm,
    /// `lambda <= 1`, where the envelope is identically 1.
    PiecewiseOne,
    /// `lambda >= n`, where the envelope is identically 0.
    PiecewiseZero,
    NotApplicable,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::FirstMaxTerm => "first-max-term",
            Branch::SecondMaxTerm => "second-max-term",
            Branch::PiecewiseOne => "piecewise-one",
            Branch::PiecewiseZero => "piecewise-zero",
            Branch::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A bound value in `[0, 1]`, its pre-clamp value, and which term produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub value: f64,
    pub raw: f64,
    pub method: Method,
    pub branch: Branch,
    pub clamped: bool,
}

impl BoundResult {
    fn new(raw: f64, method: Method, branch: Branch) -> Self {
        debug_assert!(
            method.has_two_term_max()
                || !matches!(branch, Branch::FirstMaxTerm | Branch::SecondMaxTerm)
        );
        let clamped = raw > 1.0;
        Self {
            value: raw.min(1.0),
            raw,
            method,
            branch,
            clamped,
        }
    }
}

/// `F_n(lambda) = (1 - lambda/n)^n + lambda (1 - lambda/n)^(n-1)`, the
/// probability that `binomial(lambda/n, n)` is at most 1.
///
/// Evaluated as `(1 + lambda - lambda/n) * (1 - lambda/n)^(n-1)` in log space.
pub fn f_branch(q: BoundQuery) -> f64 {
    let n = q.n as f64;
    let x = q.lambda / n;
    (1.0 + q.lambda - x) * pow_one_minus(x, q.n - 1)
}

/// `G_n(lambda) = (1 - (lambda - 1)/(n - 1))^(n-1)`, the probability that
/// `1 + binomial((lambda-1)/(n-1), n-1)` is at most 1.
///
/// Requires `n >= 2` and `1 <= lambda <= n`.
pub fn g_branch(q: BoundQuery) -> Result<f64> {
    if q.n < 2 {
        return Err(domain("the shifted-binomial branch needs n >= 2"));
    }
    if q.lambda < 1.0 {
        return Err(domain(format!(
            "the shifted-binomial branch needs lambda >= 1, got {}",
            q.lambda
        )));
    }
    let m = q.n - 1;
    Ok(pow_one_minus((q.lambda - 1.0) / m as f64, m))
}

/// The finite-`n` envelope `H_n(lambda)`: 1 on `lambda <= 1`, 0 at
/// `lambda = n`, and `max{F_n, G_n}` in between. Ties go to the first term.
pub fn theorem1_finite(q: BoundQuery) -> Result<BoundResult> {
    let method = Method::Theorem1;
    if q.lambda <= 1.0 {
        return Ok(BoundResult::new(1.0, method, Branch::PiecewiseOne));
    }
    if q.lambda >= q.n as f64 {
        return Ok(BoundResult::new(0.0, method, Branch::PiecewiseZero));
    }
    // 1 < lambda < n forces n >= 2, so G is defined.
    let f = f_branch(q);
    let g = g_branch(q)?;
    Ok(if f >= g {
        BoundResult::new(f, method, Branch::FirstMaxTerm)
    } else {
        BoundResult::new(g, method, Branch::SecondMaxTerm)
    })
}

/// The `n`-free envelope `max{1 + lambda, e} e^-lambda`.
pub fn theorem1_limit(lambda: f64) -> Result<BoundResult> {
    check_non_negative(lambda)?;
    let first = 1.0 + lambda;
    let (term, branch) = if first >= E {
        (first, Branch::FirstMaxTerm)
    } else {
        (E, Branch::SecondMaxTerm)
    };
    Ok(BoundResult::new(
        term * (-lambda).exp(),
        Method::Theorem1Limit,
        branch,
    ))
}

/// Hoeffding's `lambda (1 + (1 - lambda)/n)^(n-1)`, stated for `lambda >= 1` only.
pub fn hoeffding_bound(q: BoundQuery) -> Result<BoundResult> {
    if q.lambda < 1.0 {
        return Err(domain(format!(
            "the Hoeffding comparator is only stated for lambda >= 1, got {}",
            q.lambda
        )));
    }
    let raw = q.lambda * pow_one_minus((q.lambda - 1.0) / q.n as f64, q.n - 1);
    Ok(BoundResult::new(raw, Method::Hoeffding, Branch::NotApplicable))
}

/// The strongest exponential-rate bound obtainable from Hoeffding:
/// `min(1, exp(1 - (1 - 1/e) lambda))`.
pub fn hoeffding_exponential(lambda: f64) -> Result<f64> {
    check_non_negative(lambda)?;
    let rate = 1.0 - (-1.0f64).exp();
    Ok((1.0 - rate * lambda).exp().min(1.0))
}

/// Bentkus' comparator, `e P(B_n >= n - 1)` with `B_n ~ binomial(p, n)` and
/// `p = 1 - lambda/n`.
///
/// The exact mode is `e (p^n + n (1 - p) p^(n-1))`; the simplified mode is
/// `(e/p)(1 + lambda) e^-lambda`, which needs `p > 0`.
pub fn bentkus_bound(q: BoundQuery, simplified: bool) -> Result<BoundResult> {
    let n = q.n as f64;
    let one_minus_p = q.lambda / n;
    let p = 1.0 - one_minus_p;
    if simplified {
        if p <= 0.0 {
            return Err(domain("the simplified Bentkus form needs lambda < n"));
        }
        let raw = E / p * (1.0 + q.lambda) * (-q.lambda).exp();
        Ok(BoundResult::new(raw, Method::BentkusSimple, Branch::NotApplicable))
    } else {
        // p^n + n(1-p)p^(n-1) = p^(n-1) (p + lambda)
        let raw = E * pow_one_minus(one_minus_p, q.n - 1) * (p + q.lambda);
        Ok(BoundResult::new(raw, Method::Bentkus, Branch::NotApplicable))
    }
}

/// The fixed point `a0 = exp(a0 - 2)` in `(0, 1)` and the decay rate `r = 1 - a0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryConstants {
    pub a0: f64,
    pub r: f64,
    pub iterations: usize,
    /// `|a0 - exp(a0 - 2)|` at the returned `a0`.
    pub residual: f64,
}

/// Iterates `a <- exp(a - 2)` from `a = 0.5` until successive iterates differ
/// by at most `tol`.
///
/// The map has derivative `exp(a - 2) < 1` on `(0, 1)`, so it contracts and
/// the iterates decrease monotonically to `a0` from above.
pub fn solve_corollary_constants(tol: f64) -> Result<CorollaryConstants> {
    if !(tol > 0.0 && tol < 1e-3) {
        return Err(domain(format!("tolerance must lie in (0, 1e-3), got {tol}")));
    }
    let mut a = FIXED_POINT_START;
    let mut last_step = f64::INFINITY;
    for iteration in 1..=MAX_FIXED_POINT_ITERATIONS {
        let next = (a - 2.0).exp();
        last_step = (next - a).abs();
        a = next;
        if last_step <= tol {
            return Ok(CorollaryConstants {
                a0: a,
                r: 1.0 - a,
                iterations: iteration,
                residual: (a - (a - 2.0).exp()).abs(),
            });
        }
    }
    Err(Error::IterationLimit {
        iterations: MAX_FIXED_POINT_ITERATIONS,
        last_step,
    })
}

/// `min(1, exp(1 - r lambda))`.
pub fn corollary1_bound(lambda: f64, constants: &CorollaryConstants) -> Result<BoundResult> {
    check_non_negative(lambda)?;
    Ok(BoundResult::new(
        (1.0 - constants.r * lambda).exp(),
        Method::Corollary1,
        Branch::NotApplicable,
    ))
}

fn check_non_negative(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("lambda must be non-negative, got {lambda}")))
    }
}
