//! Helpers for the discretisation error bounds.

use crate::error::Result;
use crate::quadrature::QuadratureSpec;

/// `1 / ((p + 1) 2^p)`: bound on `int_0^1 |f|^p` for a 1-Lipschitz, zero-mean `f`.
pub fn lipschitz_lp_bound(p: f64) -> f64 {
    1.0 / ((p + 1.0) * 2f64.powf(p))
}

/// Exact `int |f|^p` for `f` linear between `(grid[i], values[i])` nodes, `p > 0`.
pub fn abs_power_integral(grid: &[f64], values: &[f64], p: f64) -> f64 {
    assert_eq!(grid.len(), values.len(), "one value per node");
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| segment_abs_power(x[1] - x[0], v[0], v[1], p))
        .sum()
}

fn segment_abs_power(h: f64, a: f64, b: f64, p: f64) -> f64 {
    if a * b < 0.0 {
        // Split at the zero crossing.
        let z = h * a.abs() / (a.abs() + b.abs());
        return segment_abs_power(z, a, 0.0, p) + segment_abs_power(h - z, 0.0, b, p);
    }
    let (a, b) = (a.abs(), b.abs());
    if (b - a).abs() < 1e-15 * (a + b).max(1e-300) {
        return h * a.powf(p);
    }
    h * (b.powf(p + 1.0) - a.powf(p + 1.0)) / ((p + 1.0) * (b - a))
}

/// Average of `f` over the cell of `cells` containing `a` (cells partition their span).
pub fn cell_average<F: Fn(f64) -> f64>(
    f: F,
    cells: &[f64],
    a: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let n = cells.len();
    assert!(n >= 2, "need at least one cell");
    let i = cells.partition_point(|&x| x <= a).clamp(1, n - 1) - 1;
    let (lo, hi) = (cells[i], cells[i + 1]);
    Ok(spec.integrate(f, lo, hi)? / (hi - lo))
}
