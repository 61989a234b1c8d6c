//! Grid checks for the analytic facts that make the envelope `H_n(lambda)`
//! non-decreasing in `n` and non-increasing in `lambda`.
//!
//! With `x = 1 - lambda/n`, `ln F_n(lambda)` becomes a function `g(x)` of one
//! variable; its derivative has the sign of `u(x)`, and `u'` has the sign of
//! `-(x^2 + (lambda - 2) x + lambda^2 - lambda)` on `(0, 1)`. The quadratic's
//! minimum `(3 lambda^2 - 4)/4` is non-negative once `lambda >= 2/sqrt(3)`,
//! which pins down where `F_n` increases in `n`. Below that threshold the
//! crossover `(n/(n-1))^n - n/(n-1)` shows `G_n` dominates instead.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::{f_branch, g_branch, theorem1_finite, BoundQuery};
use crate::error::{domain, Error, Result};
use crate::numeric::grid;

/// Closed-form comparisons pass when no violation exceeds this.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-12;

/// Spacing of the `x` grid for the `u-nonneg` claim.
pub const X_STEP: f64 = 1e-3;

/// `u` diverges as `x -> 0`, so its grid starts here.
pub const X_MIN: f64 = 1e-3;

pub const MAX_N: u64 = 500;
pub const MIN_LAMBDA_STEP: f64 = 1e-3;

/// `2 / sqrt(3)`, where the quadratic factor's minimum reaches zero.
pub fn quadratic_threshold() -> f64 {
    2.0 / 3f64.sqrt()
}

/// `g(x) = lambda ln(x) / (1 - x) + ln(1 + lambda/x)`, equal to
/// `ln F_n(lambda)` at `x = 1 - lambda/n`.
pub fn g_of_x(x: f64, lambda: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!("g is defined for 0 < x < 1, got {x}")));
    }
    check_positive(lambda)?;
    Ok(lambda * x.ln() / (1.0 - x) + (lambda / x).ln_1p())
}

/// `u(x) = ln x + (1 - x)/x - (1 - x)^2 / (x (x + lambda))`, proportional to `g'(x)`.
pub fn u_of_x(x: f64, lambda: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(domain(format!("u is defined for 0 < x <= 1, got {x}")));
    }
    check_positive(lambda)?;
    let w = 1.0 - x;
    Ok(x.ln() + w / x - w * w / (x * (x + lambda)))
}

/// Closed form of `u'(x) = (x - 1) / (x^2 (x + lambda)^2) * quadratic(x)`.
pub fn u_derivative(x: f64, lambda: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(domain(format!("u is defined for 0 < x <= 1, got {x}")));
    }
    check_positive(lambda)?;
    let s = x + lambda;
    Ok((x - 1.0) / (x * x * s * s) * u_quadratic_factor(x, lambda))
}

/// `x^2 + (lambda - 2) x + lambda^2 - lambda`.
pub fn u_quadratic_factor(x: f64, lambda: f64) -> f64 {
    x * x + (lambda - 2.0) * x + lambda * lambda - lambda
}

/// `(3 lambda^2 - 4) / 4`, the quadratic factor at its vertex `x = (2 - lambda)/2`.
pub fn u_quadratic_minimum(lambda: f64) -> f64 {
    (3.0 * lambda * lambda - 4.0) / 4.0
}

/// `(n/(n-1))^n - n/(n-1)`: for `1 < lambda < n`, `F_n(lambda) <= G_n(lambda)`
/// exactly when `lambda` is at most this value.
pub fn fg_crossover(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("the crossover needs n >= 2, got {n}")));
    }
    let ratio = n as f64 / (n - 1) as f64;
    // (n/(n-1))^n = exp(-n ln(1 - 1/n))
    let power = (-(n as f64) * (-1.0 / n as f64).ln_1p()).exp();
    Ok(power - ratio)
}

fn check_positive(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("lambda must be positive, got {lambda}")))
    }
}

/// `H_n(lambda)`, extended by 0 beyond `lambda = n`.
fn envelope(lambda: f64, n: u64) -> f64 {
    if lambda >= n as f64 {
        return 0.0;
    }
    let q = BoundQuery::new(lambda, n).expect("0 <= lambda < n");
    theorem1_finite(q).expect("valid query").value
}

fn f(lambda: f64, n: u64) -> f64 {
    f_branch(BoundQuery::new(lambda, n).expect("0 <= lambda <= n"))
}

fn g(lambda: f64, n: u64) -> f64 {
    g_branch(BoundQuery::new(lambda, n).expect("0 <= lambda <= n")).expect("1 <= lambda, n >= 2")
}

/// The inequalities checked by [`run_grid_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    /// `F_n <= F_{n+1}` for `2/sqrt(3) <= lambda < n`.
    FMonoN,
    /// `G_n <= G_{n+1}` for `1 <= lambda < n`.
    GMonoN,
    /// `F_n <= G_n` for `1 < lambda < 2/sqrt(3)`, `n >= 2`.
    FgOrder,
    /// `H_n <= H_{n+1}` for all `lambda >= 0`.
    HMonoN,
    /// `H_n` is non-increasing in `lambda`.
    HMonoLambda,
    /// `u(x) >= 0` on `(0, 1]` for `lambda >= 2/sqrt(3)`.
    UNonneg,
    /// `F_n <= G_n` exactly when `lambda <= fg_crossover(n)`.
    CrossoverConsistency,
}

impl Claim {
    pub const ALL: [Claim; 7] = [
        Claim::FMonoN,
        Claim::GMonoN,
        Claim::FgOrder,
        Claim::HMonoN,
        Claim::HMonoLambda,
        Claim::UNonneg,
        Claim::CrossoverConsistency,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Claim::FMonoN => "F-mono-n",
            Claim::GMonoN => "G-mono-n",
            Claim::FgOrder => "FG-order",
            Claim::HMonoN => "H-mono-n",
            Claim::HMonoLambda => "H-mono-lambda",
            Claim::UNonneg => "u-nonneg",
            Claim::CrossoverConsistency => "crossover-consistency",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::Argument(format!("unknown claim `{s}`")))
    }
}

/// Grid location of the worst violation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridPoint {
    LambdaN { lambda: f64, n: u64 },
    XLambda { x: f64, lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCheckResult {
    pub claim: Claim,
    pub passed: bool,
    /// Largest amount by which the claim fails on the grid; 0 when it never does.
    pub worst_violation: f64,
    pub worst_point: Option<GridPoint>,
    pub points_checked: u64,
}

#[derive(Debug, Clone, Copy)]
struct Worst {
    violation: f64,
    point: Option<GridPoint>,
    checked: u64,
}

impl Worst {
    fn empty() -> Self {
        Self {
            violation: 0.0,
            point: None,
            checked: 0,
        }
    }

    fn record(&mut self, violation: f64, point: GridPoint) {
        self.checked += 1;
        if self.point.is_none() || violation > self.violation {
            self.violation = violation;
            self.point = Some(point);
        }
    }

    fn merge(self, other: Worst) -> Worst {
        let mut out = if other.violation > self.violation || self.point.is_none() {
            other
        } else {
            self
        };
        out.checked = self.checked + other.checked;
        out
    }
}

fn lambda_n(lambda: f64, n: u64) -> GridPoint {
    GridPoint::LambdaN { lambda, n }
}

/// Evaluates one claim over `n <= n_max` and a `lambda` grid of spacing
/// `lambda_step`, restricted to the claim's stated domain.
pub fn run_grid_check(claim: Claim, n_max: u64, lambda_step: f64) -> Result<GridCheckResult> {
    if !(2..=MAX_N).contains(&n_max) {
        return Err(Error::Argument(format!(
            "n_max must lie in [2, {MAX_N}], got {n_max}"
        )));
    }
    if !(lambda_step >= MIN_LAMBDA_STEP && lambda_step.is_finite()) {
        return Err(Error::Argument(format!(
            "lambda step must be at least {MIN_LAMBDA_STEP}, got {lambda_step}"
        )));
    }
    let threshold = quadratic_threshold();
    let top = n_max as f64;
    let step = lambda_step;

    let per_n = |ns: std::ops::Range<u64>, check: &(dyn Fn(u64, &mut Worst) + Sync)| -> Worst {
        ns.into_par_iter()
            .map(|n| {
                let mut w = Worst::empty();
                check(n, &mut w);
                w
            })
            .reduce(Worst::empty, Worst::merge)
    };

    let worst = match claim {
        Claim::FMonoN => per_n(1..n_max, &|n, w| {
            for lambda in grid(0.0, n as f64, step).filter(|&l| l >= threshold && l < n as f64) {
                w.record((f(lambda, n) - f(lambda, n + 1)).max(0.0), lambda_n(lambda, n));
            }
        }),
        Claim::GMonoN => per_n(2..n_max, &|n, w| {
            for lambda in grid(1.0, n as f64, step).filter(|&l| l < n as f64) {
                w.record((g(lambda, n) - g(lambda, n + 1)).max(0.0), lambda_n(lambda, n));
            }
        }),
        Claim::FgOrder => per_n(2..n_max + 1, &|n, w| {
            for lambda in grid(0.0, threshold, step).filter(|&l| l > 1.0 && l < threshold) {
                w.record((f(lambda, n) - g(lambda, n)).max(0.0), lambda_n(lambda, n));
            }
        }),
        Claim::HMonoN => per_n(1..n_max, &|n, w| {
            for lambda in grid(0.0, top + 1.0, step) {
                let v = envelope(lambda, n) - envelope(lambda, n + 1);
                w.record(v.max(0.0), lambda_n(lambda, n));
            }
        }),
        Claim::HMonoLambda => per_n(1..n_max + 1, &|n, w| {
            let mut prev: Option<f64> = None;
            for lambda in grid(0.0, n as f64 + 1.0, step) {
                let h = envelope(lambda, n);
                if let Some(p) = prev {
                    w.record((h - p).max(0.0), lambda_n(lambda, n));
                }
                prev = Some(h);
            }
        }),
        Claim::UNonneg => {
            let lambdas: Vec<f64> = grid(threshold, top, step).collect();
            lambdas
                .into_par_iter()
                .map(|lambda| {
                    let mut w = Worst::empty();
                    for x in grid(X_MIN, 1.0, X_STEP).map(|x| x.min(1.0)) {
                        let u = u_of_x(x, lambda).expect("x in (0,1], lambda > 0");
                        w.record((-u).max(0.0), GridPoint::XLambda { x, lambda });
                    }
                    w
                })
                .reduce(Worst::empty, Worst::merge)
        }
        Claim::CrossoverConsistency => per_n(2..n_max + 1, &|n, w| {
            let cross = fg_crossover(n).expect("n >= 2");
            for lambda in grid(1.0, n as f64, step).filter(|&l| l > 1.0 && l < n as f64) {
                let diff = g(lambda, n) - f(lambda, n);
                let predicted_g_wins = lambda <= cross;
                let observed_g_wins = diff >= 0.0;
                let v = if predicted_g_wins == observed_g_wins {
                    0.0
                } else {
                    diff.abs()
                };
                w.record(v, lambda_n(lambda, n));
            }
        }),
    };

    Ok(GridCheckResult {
        claim,
        passed: worst.violation <= CLOSED_FORM_TOLERANCE,
        worst_violation: worst.violation,
        worst_point: worst.point,
        points_checked: worst.checked,
    })
}

/// Runs every claim with the same grid.
pub fn run_all_grid_checks(n_max: u64, lambda_step: f64) -> Result<Vec<GridCheckResult>> {
    Claim::ALL
        .into_iter()
        .map(|c| run_grid_check(c, n_max, lambda_step))
        .collect()
}

/// Worst residual of `G_2(lambda) - F_2(lambda) = (lambda - 2)^2 / 4` over `[1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub worst_residual: f64,
    pub worst_lambda: f64,
    pub points_checked: u64,
}

pub fn g2_minus_f2_identity(lambda_step: f64) -> Result<IdentityCheck> {
    if !(lambda_step >= MIN_LAMBDA_STEP && lambda_step.is_finite()) {
        return Err(Error::Argument(format!(
            "lambda step must be at least {MIN_LAMBDA_STEP}, got {lambda_step}"
        )));
    }
    let mut out = IdentityCheck {
        worst_residual: 0.0,
        worst_lambda: 1.0,
        points_checked: 0,
    };
    for lambda in grid(1.0, 2.0, lambda_step).map(|l| l.min(2.0)) {
        let residual = ((g(lambda, 2) - f(lambda, 2)) - (lambda - 2.0).powi(2) / 4.0).abs();
        out.points_checked += 1;
        if residual > out.worst_residual {
            out.worst_residual = residual;
            out.worst_lambda = lambda;
        }
    }
    Ok(out)
}
