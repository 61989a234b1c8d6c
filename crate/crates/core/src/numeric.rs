//! Small log-space helpers shared by the bound and pmf code.

/// `(1 - x)^k` evaluated as `exp(k * ln(1 - x))`.
///
/// `k == 0` gives 1 (including `x == 1`), and `x == 1` gives 0 otherwise.
pub(crate) fn pow_one_minus(x: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if x == 1.0 {
        return 0.0;
    }
    (k as f64 * (-x).ln_1p()).exp()
}

/// Grid `start, start + step, ...` up to and including `end` (within a small slack).
pub(crate) fn grid(start: f64, end: f64, step: f64) -> impl Iterator<Item = f64> {
    let count = if end < start {
        0
    } else {
        ((end - start) / step + 1e-9).floor() as usize + 1
    };
    (0..count).map(move |k| start + k as f64 * step)
}
