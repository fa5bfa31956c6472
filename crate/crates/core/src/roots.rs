//! Bracketing bisection for the decreasing defining functions.

use crate::error::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const MAX_ITER: usize = 200;

/// Finds the sign change of a non-increasing function `h` on `[lo, hi]`.
///
/// If `h(lo) <= 0` the root is `lo`; if `h(hi) >= 0` it is `hi`. `h` may be
/// discontinuous; the returned point is within `tol` of the last sign change.
pub fn bisect_decreasing<F>(mut h: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (lo, hi);
    if h(lo)? <= 0.0 {
        return Ok(lo);
    }
    if h(hi)? >= 0.0 {
        return Ok(hi);
    }
    for _ in 0..MAX_ITER {
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval is down to adjacent floats.
            return Ok(mid);
        }
        let v = h(mid)?;
        if v.is_nan() {
            return Err(Error::NoConvergence { lo, hi });
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { lo, hi })
}
