//! The `tailbound` command line.
//!
//! Every command writes CSV to standard output and diagnostics to standard
//! error. Exit codes: 0 when all checks pass, 1 when a mathematical check
//! fails, 2 for usage or domain errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::bounds::{
    bentkus_bound, corollary1_bound, hoeffding_bound, solve_corollary_constants, theorem1_finite,
    theorem1_limit, BoundQuery, BoundResult, CorollaryConstants, Method,
};
use crate::error::{Error, Result};
use crate::extremal::verify_tightness;
use crate::inequalities::{run_all_grid_checks, GridCheckResult};
use crate::numeric::grid;
use crate::oracles::{
    maximize_ln, maximize_two_point, monte_carlo_tail, structural_distance, Argmax,
    BoundedDistSpec, SearchReport,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Tolerance on `max L_n - H_n` in the simplex search.
pub const LEMMA4_TOLERANCE: f64 = 1e-9;
/// Tolerance on the two-point search, whose bound is already shifted down in `lambda`.
pub const TWO_POINT_TOLERANCE: f64 = 1e-12;
pub const TIGHTNESS_TOLERANCE: f64 = 1e-12;

/// Tolerance used when solving for the corollary constant in `bound` and `compare`.
const CONSTANT_TOLERANCE: f64 = 1e-12;
/// `solve-r` prints the constants with at least this many decimals.
const CONSTANT_DECIMALS: usize = 12;

pub const COMPARE_HEADER: &str =
    "lambda,n,theorem1,theorem1_limit,hoeffding,bentkus,bentkus_simple,corollary1";

#[derive(Debug, Parser)]
#[command(
    name = "tailbound",
    version,
    about = "Bounds on P(S <= 1) for sums of independent [0,1]-valued variables"
)]
pub struct RunConfig {
    /// Decimal places in CSV output.
    #[arg(long, global = true, default_value_t = 6)]
    pub precision: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one bound.
    Bound {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Number of summands; not needed for theorem1-limit and corollary1.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        method: Method,
    },
    /// Tabulate every bound over a lambda grid.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        lambda_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda_max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long)]
        n: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit pre-clamp values.
        #[arg(long)]
        raw: bool,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Solve a0 = exp(a0 - 2) and report r = 1 - a0.
    SolveR {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Monte Carlo estimate of P(S <= 1) for a JSON list of distributions.
    Mc {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// Grid search for the largest P(sum of Bernoullis <= 1) at a fixed mean.
    Lemma4 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.02)]
        resolution: f64,
    },
    /// Grid search over sums of two-point variables.
    TwoPoint {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.1)]
        resolution: f64,
    },
    /// Compare each bound term with its extremal distribution.
    Tightness {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        n: u64,
    },
    /// Grid checks of the monotonicity inequalities.
    Inequalities {
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long, default_value_t = 0.01)]
        lambda_step: f64,
    },
}

/// Fixed-point decimal with trailing zeros trimmed, keeping one digit after
/// the point: `2.0`, `0.3125`, `0.406006`.
pub fn format_decimal(value: f64, precision: usize) -> String {
    let mut s = format!("{value:.precision$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').len();
        s.truncate(trimmed);
        if s.ends_with('.') {
            s.push('0');
        }
    }
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s.remove(0);
    }
    s
}

/// Scientific notation for residuals and violations; `0` stays `0`.
pub fn format_small(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else {
        format!("{value:.3e}")
    }
}

/// One line of the `compare` table. `None` marks a bound that is undefined
/// at this point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub lambda: f64,
    pub n: u64,
    pub theorem1: f64,
    pub theorem1_limit: f64,
    pub hoeffding: Option<f64>,
    pub bentkus: f64,
    pub bentkus_simple: Option<f64>,
    pub corollary1: f64,
}

impl ComparisonRow {
    pub fn compute(lambda: f64, n: u64, constants: &CorollaryConstants, raw: bool) -> Result<Self> {
        let pick = |b: BoundResult| if raw { b.raw } else { b.value };
        let q = BoundQuery::new(lambda, n)?;
        Ok(Self {
            lambda,
            n,
            theorem1: pick(theorem1_finite(q)?),
            theorem1_limit: pick(theorem1_limit(lambda)?),
            hoeffding: (lambda >= 1.0)
                .then(|| hoeffding_bound(q).map(pick))
                .transpose()?,
            bentkus: pick(bentkus_bound(q, false)?),
            bentkus_simple: (lambda < n as f64)
                .then(|| bentkus_bound(q, true).map(pick))
                .transpose()?,
            corollary1: pick(corollary1_bound(lambda, constants)?),
        })
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let num = |v: f64| format_decimal(v, precision);
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            num(self.lambda),
            self.n,
            num(self.theorem1),
            num(self.theorem1_limit),
            opt(self.hoeffding),
            num(self.bentkus),
            opt(self.bentkus_simple),
            num(self.corollary1),
        )
    }
}

/// Rows of the comparison table for `lambda` from `lambda_min` to `lambda_max`.
pub fn comparison_rows(
    lambda_min: f64,
    lambda_max: f64,
    step: f64,
    n: u64,
    raw: bool,
) -> Result<Vec<ComparisonRow>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Argument(format!("step must be positive, got {step}")));
    }
    if !(lambda_min >= 0.0 && lambda_min <= lambda_max && lambda_max <= n as f64) {
        return Err(Error::Argument(format!(
            "need 0 <= lambda-min <= lambda-max <= n, got [{lambda_min}, {lambda_max}] with n = {n}"
        )));
    }
    let constants = solve_corollary_constants(CONSTANT_TOLERANCE)?;
    grid(lambda_min, lambda_max, step)
        .map(|lambda| ComparisonRow::compute(lambda.min(lambda_max), n, &constants, raw))
        .collect()
}

enum Failure {
    Usage(Error),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(Error::Io(e))
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(&config, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Check) => EXIT_CHECK_FAILED,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::IterationLimit { .. } => EXIT_CHECK_FAILED,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let precision = config.precision;
    match &config.command {
        Command::Bound { lambda, n, method } => cmd_bound(*lambda, *n, *method, precision, out),
        Command::Compare {
            lambda_min,
            lambda_max,
            step,
            n,
            out: path,
            raw,
        } => {
            let rows = comparison_rows(*lambda_min, *lambda_max, *step, *n, *raw)?;
            match path {
                Some(p) => {
                    let mut file = BufWriter::new(File::create(p)?);
                    write_table(&rows, precision, &mut file)?;
                    file.flush()?;
                }
                None => write_table(&rows, precision, out)?,
            }
            Ok(())
        }
        Command::Verify { target } => cmd_verify(target, out, err),
        Command::SolveR { tol } => cmd_solve_r(*tol, precision, out),
        Command::Mc { spec, trials, seed } => cmd_mc(spec, *trials, *seed, precision, out),
    }
}

fn write_table(rows: &[ComparisonRow], precision: usize, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{COMPARE_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv(precision))?;
    }
    Ok(())
}

fn cmd_bound(
    lambda: f64,
    n: Option<u64>,
    method: Method,
    precision: usize,
    out: &mut dyn Write,
) -> Outcome {
    let query = || -> Result<BoundQuery> {
        let n = n.ok_or_else(|| Error::Argument(format!("--n is required for {method}")))?;
        BoundQuery::new(lambda, n)
    };
    let result = match method {
        Method::Theorem1 => theorem1_finite(query()?)?,
        Method::Theorem1Limit => theorem1_limit(lambda)?,
        Method::Hoeffding => hoeffding_bound(query()?)?,
        Method::Bentkus => bentkus_bound(query()?, false)?,
        Method::BentkusSimple => bentkus_bound(query()?, true)?,
        Method::Corollary1 => {
            corollary1_bound(lambda, &solve_corollary_constants(CONSTANT_TOLERANCE)?)?
        }
    };
    writeln!(
        out,
        "{},{},{}",
        format_decimal(result.value, precision),
        result.branch,
        result.clamped
    )?;
    Ok(())
}

fn report_line(
    out: &mut dyn Write,
    claim: &str,
    passed: bool,
    violation: f64,
    points: u64,
) -> io::Result<()> {
    writeln!(out, "{claim},{passed},{},{points}", format_small(violation))
}

fn describe_search(report: &SearchReport) -> String {
    let argmax = match &report.argmax {
        Argmax::Simplex(p) => format!("{:?}", p.coords()),
        Argmax::TwoPoint(spec) => spec
            .summands()
            .iter()
            .map(|s| format!("({}, {}, {})", s.low, s.high, s.prob_high))
            .collect::<Vec<_>>()
            .join(" "),
    };
    format!(
        "max={:.6} bound={:.6} slack={:e} argmax={argmax}",
        report.max_value, report.bound_value, report.slack
    )
}

fn cmd_verify(target: &VerifyTarget, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let mut all_passed = true;
    match target {
        VerifyTarget::Lemma4 {
            n,
            lambda,
            resolution,
        } => {
            let report = maximize_ln(*n, *lambda, *resolution)?;
            let bound_ok = report.passes(LEMMA4_TOLERANCE);
            report_line(
                out,
                "lemma4-bound",
                bound_ok,
                (-report.slack).max(0.0),
                report.points_evaluated,
            )?;
            let Argmax::Simplex(point) = &report.argmax else {
                unreachable!("simplex search returns a simplex point");
            };
            let distance = structural_distance(point);
            let shape_ok = distance <= *resolution;
            report_line(
                out,
                "lemma4-argmax",
                shape_ok,
                (distance - resolution).max(0.0),
                report.points_evaluated,
            )?;
            writeln!(err, "{}", describe_search(&report))?;
            all_passed = bound_ok && shape_ok;
        }
        VerifyTarget::TwoPoint {
            n,
            lambda,
            resolution,
        } => {
            let report = maximize_two_point(*n, *lambda, *resolution)?;
            let ok = report.passes(TWO_POINT_TOLERANCE);
            report_line(
                out,
                "two-point",
                ok,
                (-report.slack).max(0.0),
                report.points_evaluated,
            )?;
            writeln!(err, "{}", describe_search(&report))?;
            all_passed = ok;
        }
        VerifyTarget::Tightness { lambda, n } => {
            for r in verify_tightness(BoundQuery::new(*lambda, *n)?)? {
                let ok = r.gap <= TIGHTNESS_TOLERANCE;
                report_line(out, &format!("tightness-{}", r.branch), ok, r.gap, 1)?;
                all_passed &= ok;
            }
        }
        VerifyTarget::Inequalities { n_max, lambda_step } => {
            let results: Vec<GridCheckResult> = run_all_grid_checks(*n_max, *lambda_step)?;
            for r in results {
                report_line(out, r.claim.tag(), r.passed, r.worst_violation, r.points_checked)?;
                if !r.passed {
                    writeln!(err, "{}: worst violation at {:?}", r.claim, r.worst_point)?;
                }
                all_passed &= r.passed;
            }
        }
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_solve_r(tol: f64, precision: usize, out: &mut dyn Write) -> Outcome {
    let c = solve_corollary_constants(tol)?;
    let decimals = precision.max(CONSTANT_DECIMALS);
    writeln!(
        out,
        "{},{},{},{}",
        format_decimal(c.a0, decimals),
        format_decimal(c.r, decimals),
        c.iterations,
        format_small(c.residual)
    )?;
    Ok(())
}

/// Reads a JSON list of [`BoundedDistSpec`].
pub fn read_spec_file(path: &std::path::Path) -> Result<Vec<BoundedDistSpec>> {
    let text = std::fs::read_to_string(path)?;
    let specs: Vec<BoundedDistSpec> = serde_json::from_str(&text)?;
    if specs.is_empty() {
        return Err(Error::Argument("the spec file lists no distributions".into()));
    }
    for s in &specs {
        s.validate()?;
    }
    Ok(specs)
}

fn cmd_mc(
    path: &std::path::Path,
    trials: u64,
    seed: u64,
    precision: usize,
    out: &mut dyn Write,
) -> Outcome {
    let specs = read_spec_file(path)?;
    let mc = monte_carlo_tail(&specs, trials, seed)?;
    let n = specs.len() as u64;
    let mean: f64 = specs.iter().map(BoundedDistSpec::mean).sum();
    // summed means can overshoot n by an ulp
    let bound = theorem1_finite(BoundQuery::new(mean.min(n as f64), n)?)?.value;
    let pass = mc.estimate - mc.ci_halfwidth <= bound;
    writeln!(
        out,
        "{},{},{},{pass}",
        format_decimal(mc.estimate, precision),
        format_decimal(mc.ci_halfwidth, precision),
        format_decimal(bound, precision),
    )?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
