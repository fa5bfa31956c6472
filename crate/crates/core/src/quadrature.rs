//! Adaptive Simpson quadrature with caller-supplied split points.
//!
//! The integrands in this crate are piecewise smooth: products of `G(t, k)`
//! factors have a kink at every opponent threshold `k`. Splitting the range at
//! those points first means every panel handed to the adaptive rule is smooth,
//! so the Richardson error estimate is honest.

use crate::error::{Error, Result};

/// Absolute tolerance used throughout the crate.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    abs_tol: f64,
    kink_points: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: DEFAULT_ABS_TOL,
            kink_points: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::domain("abs_tol", abs_tol));
        }
        Ok(Self {
            abs_tol,
            kink_points: Vec::new(),
        })
    }

    /// Adds split points. They are kept sorted and deduplicated.
    pub fn with_kinks<I: IntoIterator<Item = f64>>(mut self, kinks: I) -> Self {
        self.kink_points
            .extend(kinks.into_iter().filter(|k| k.is_finite()));
        self.kink_points.sort_by(f64::total_cmp);
        self.kink_points.dedup();
        self
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn kink_points(&self) -> &[f64] {
        &self.kink_points
    }

    /// Integrates `f` over `[a, b]`. Returns 0 for an empty or reversed range.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        if !(b > a) {
            return Ok(0.0);
        }
        let mut edges = Vec::with_capacity(self.kink_points.len() + 2);
        edges.push(a);
        edges.extend(self.kink_points.iter().copied().filter(|&k| k > a && k < b));
        edges.push(b);

        // Tolerance is shared out in proportion to panel width.
        let width = b - a;
        let mut total = 0.0;
        let mut worst = 0.0_f64;
        let mut failed = false;
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let tol = self.abs_tol * (hi - lo) / width;
            let (v, err, ok) = simpson_panel(&f, lo, hi, tol);
            total += v;
            worst += err;
            failed |= !ok;
        }
        if failed {
            return Err(Error::Quadrature {
                requested: self.abs_tol,
                achieved: worst,
            });
        }
        Ok(total)
    }
}

/// Convenience wrapper: integrate with default tolerance and the given kinks.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, kinks: &[f64]) -> Result<f64> {
    QuadratureSpec::default()
        .with_kinks(kinks.iter().copied())
        .integrate(f, a, b)
}

fn simpson_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64, bool) {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut err = 0.0;
    let mut ok = true;
    let v = recurse(
        f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut err, &mut ok,
    );
    (v, err, ok)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    err: &mut f64,
    ok: &mut bool,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Forcing a couple of levels avoids accepting a lucky coarse estimate.
    if depth + 2 <= MAX_DEPTH && delta.abs() <= 15.0 * tol {
        *err += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    if depth == 0 || (b - a) < 4.0 * f64::EPSILON * a.abs().max(1.0) {
        *ok = false;
        *err += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err, ok)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err, ok)
}
