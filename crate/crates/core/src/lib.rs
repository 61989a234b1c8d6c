//! Tail bounds for `P(S <= 1)` where `S` is a sum of `n` independent random
//! variables taking values in `[0, 1]` with mean `E S = lambda`.
//!
//! The crate is organised around five pieces:
//!
//! - [`bounds`]: closed-form bounds (the two-branch finite-`n` envelope, its
//!   `n`-free limit, Hoeffding, Bentkus and the exponential-rate corollary),
//!   plus the fixed-point solve for the decay constant `r`.
//! - [`extremal`]: the binomial and shifted-binomial distributions that attain
//!   each branch of the bound, and their Poisson limits.
//! - [`oracles`]: brute-force searches over Bernoulli mean vectors and
//!   two-point sums, and a seeded Monte Carlo harness.
//! - [`inequalities`]: grid checks for each analytic inequality used to show
//!   the envelope is monotone.
//! - [`cli`]: the `tailbound` command-line front end.
//!
//! ```
//! use tailbound::bounds::{theorem1_finite, BoundQuery, Branch};
//!
//! let q = BoundQuery::new(2.0, 4).unwrap();
//! let b = theorem1_finite(q).unwrap();
//! assert!((b.value - 0.3125).abs() < 1e-12);
//! assert_eq!(b.branch, Branch::FirstMaxTerm);
//! ```

pub mod bounds;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod inequalities;
pub mod oracles;

mod numeric;

pub use error::{Error, Result};
