//! Bracketed bisection for nondecreasing functions.

use crate::error::{Error, Result};

/// Solve `g(p) = target` for nondecreasing `g` on `[lo, hi]`.
///
/// The caller guarantees `g(lo) <= target <= g(hi)`. Stops once
/// `|g(p) - target| <= tol * max(1, |target|)` or the bracket can no longer
/// be split in f64; fails with [`Error::NoConvergence`] after `max_steps`.
pub fn bisect_increasing<G>(mut g: G, target: f64, mut lo: f64, mut hi: f64, tol: f64, max_steps: usize) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let scale = target.abs().max(1.0);
    for _ in 0..max_steps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let v = g(mid)?;
        if (v - target).abs() <= tol * scale {
            return Ok(mid);
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(max_steps))
}
