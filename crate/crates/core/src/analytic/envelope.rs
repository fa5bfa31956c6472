//! Tabulated win envelopes `L(t)` and `M(t) = prod_i L_i(t)`.
//!
//! An envelope is what a learner can actually hold in memory: values on a
//! grid over `[0, 1]`, either constant on each bucket or linear between nodes.
//! Integrals are computed exactly for the declared interpolation.

use serde::{Deserialize, Serialize};

use super::discretization::abs_power_integral;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::roots::{bisect_decreasing, DEFAULT_ROOT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// `values[i]` holds on `[grid[i], grid[i+1])`; one value per bucket.
    PiecewiseConstant,
    /// Linear between nodes; one value per grid node.
    PiecewiseLinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    interpolation: Interpolation,
    #[serde(skip)]
    uniform: bool,
}

impl EnvelopeFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::Config(
                "envelope grid needs at least two nodes".into(),
            ));
        }
        if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 {
            return Err(Error::Config("envelope grid must span [0, 1]".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config(
                "envelope grid must be strictly increasing".into(),
            ));
        }
        let expected = match interpolation {
            Interpolation::PiecewiseConstant => grid.len() - 1,
            Interpolation::PiecewiseLinear => grid.len(),
        };
        if values.len() != expected {
            return Err(Error::Config(format!(
                "envelope expects {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain("envelope value", bad));
        }
        let m = (grid.len() - 1) as f64;
        let uniform = grid
            .iter()
            .enumerate()
            .all(|(i, &x)| (x - i as f64 / m).abs() < 1e-12);
        Ok(Self {
            grid,
            values,
            interpolation,
            uniform,
        })
    }

    pub fn uniform_grid(m: usize) -> Vec<f64> {
        (0..=m).map(|i| i as f64 / m as f64).collect()
    }

    /// Piecewise-constant envelope on `values.len()` equal buckets.
    pub fn uniform_constant(values: Vec<f64>) -> Result<Self> {
        let grid = Self::uniform_grid(values.len().max(1));
        Self::new(grid, values, Interpolation::PiecewiseConstant)
    }

    pub fn constant(m: usize, c: f64) -> Result<Self> {
        Self::uniform_constant(vec![c; m])
    }

    /// Bucket averages `m int_bucket f` of a function on `m` equal buckets.
    pub fn from_fn_bucket_average<F: Fn(f64) -> f64>(
        m: usize,
        f: F,
        kinks: &[f64],
    ) -> Result<Self> {
        let grid = Self::uniform_grid(m);
        let spec = QuadratureSpec::default().with_kinks(kinks.iter().copied());
        let values = grid
            .windows(2)
            .map(|w| Ok((spec.integrate(&f, w[0], w[1])? / (w[1] - w[0])).clamp(0.0, 1.0)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, Interpolation::PiecewiseConstant)
    }

    /// Samples `f` at the nodes of a uniform grid and interpolates linearly.
    pub fn sample_linear<F: Fn(f64) -> f64>(m: usize, f: F) -> Result<Self> {
        let grid = Self::uniform_grid(m);
        let values = grid.iter().map(|&t| f(t).clamp(0.0, 1.0)).collect();
        Self::new(grid, values, Interpolation::PiecewiseLinear)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn buckets(&self) -> usize {
        self.grid.len() - 1
    }

    /// Index `i` with `grid[i] <= t < grid[i+1]`; `t = 1` maps to the last bucket.
    pub fn bucket_of(&self, t: f64) -> usize {
        let m = self.buckets();
        if t <= 0.0 {
            return 0;
        }
        if t >= 1.0 {
            return m - 1;
        }
        if self.uniform {
            return ((t * m as f64) as usize).min(m - 1);
        }
        self.grid
            .partition_point(|&x| x <= t)
            .saturating_sub(1)
            .min(m - 1)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let i = self.bucket_of(t);
        match self.interpolation {
            Interpolation::PiecewiseConstant => self.values[i],
            Interpolation::PiecewiseLinear => {
                let (x0, x1) = (self.grid[i], self.grid[i + 1]);
                let w = ((t.clamp(0.0, 1.0) - x0) / (x1 - x0)).clamp(0.0, 1.0);
                self.values[i] + w * (self.values[i + 1] - self.values[i])
            }
        }
    }

    /// Exact integral over bucket `i` from `a` (inside the bucket) to its right edge.
    fn partial_bucket(&self, i: usize, a: f64) -> f64 {
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let a = a.clamp(x0, x1);
        match self.interpolation {
            Interpolation::PiecewiseConstant => self.values[i] * (x1 - a),
            Interpolation::PiecewiseLinear => {
                let va = self.value_at_in(i, a);
                0.5 * (va + self.values[i + 1]) * (x1 - a)
            }
        }
    }

    fn value_at_in(&self, i: usize, t: f64) -> f64 {
        match self.interpolation {
            Interpolation::PiecewiseConstant => self.values[i],
            Interpolation::PiecewiseLinear => {
                let (x0, x1) = (self.grid[i], self.grid[i + 1]);
                let w = (t - x0) / (x1 - x0);
                self.values[i] + w * (self.values[i + 1] - self.values[i])
            }
        }
    }

    /// `int_a^1 M(t) dt`, exact.
    pub fn integral_from(&self, a: f64) -> f64 {
        if a >= 1.0 {
            return 0.0;
        }
        let a = a.max(0.0);
        let i = self.bucket_of(a);
        let mut total = self.partial_bucket(i, a);
        for j in i + 1..self.buckets() {
            total += self.partial_bucket(j, self.grid[j]);
        }
        total
    }

    /// Non-decreasing values (which for these interpolations means a non-decreasing function).
    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }

    /// Pointwise product. All factors must share grid and interpolation; for
    /// linear interpolation the product is re-interpolated between nodes.
    pub fn product<'a, I>(m: usize, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a EnvelopeFunction>,
    {
        let mut iter = factors.into_iter();
        let Some(first) = iter.next() else {
            return Self::constant(m, 1.0);
        };
        let mut acc = first.clone();
        for f in iter {
            if f.grid != acc.grid || f.interpolation != acc.interpolation {
                return Err(Error::Config(
                    "envelope product needs matching grids".into(),
                ));
            }
            for (a, b) in acc.values.iter_mut().zip(&f.values) {
                *a *= b;
            }
        }
        Ok(acc)
    }

    /// `||self - other||_{L1}` on `[0, 1]`, exact for matching grids.
    pub fn l1_distance(&self, other: &EnvelopeFunction) -> Result<f64> {
        if self.grid != other.grid || self.interpolation != other.interpolation {
            return Err(Error::Config("l1 distance needs matching grids".into()));
        }
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(match self.interpolation {
            Interpolation::PiecewiseConstant => self
                .grid
                .windows(2)
                .zip(&diff)
                .map(|(w, d)| (w[1] - w[0]) * d.abs())
                .sum(),
            Interpolation::PiecewiseLinear => abs_power_integral(&self.grid, &diff, 1.0),
        })
    }

    /// Global maximiser of `e^s int_s^1 M` over `s in [floor, 1]`, exact for both
    /// interpolations. Ties go to the smallest `s`. Returns `floor` when the
    /// envelope vanishes on `[floor, 1]`.
    pub fn argmax_payoff(&self, floor: f64) -> f64 {
        let floor = floor.clamp(0.0, 1.0);
        let m = self.buckets();
        let mut suffix = vec![0.0; m + 1];
        for i in (0..m).rev() {
            suffix[i] = suffix[i + 1] + self.partial_bucket(i, self.grid[i]);
        }
        let payoff = |i: usize, s: f64| s.exp() * (suffix[i + 1] + self.partial_bucket(i, s));

        let mut best_s = floor;
        let mut best_e = payoff(self.bucket_of(floor), floor);
        let start = self.bucket_of(floor);
        for i in start..m {
            let (x0, x1) = (self.grid[i], self.grid[i + 1]);
            let lo = x0.max(floor);
            if lo > x1 {
                continue;
            }
            let mut candidates = [lo, x1, f64::NAN, f64::NAN];
            match self.interpolation {
                Interpolation::PiecewiseConstant => {
                    let v = self.values[i];
                    if v > 0.0 {
                        candidates[2] = x1 - 1.0 + suffix[i + 1] / v;
                    }
                }
                Interpolation::PiecewiseLinear => {
                    // Stationary points of e^s * I(s): I(s) - M(s) = 0, quadratic in s - x0.
                    let h = x1 - x0;
                    let p = self.values[i];
                    let q = (self.values[i + 1] - p) / h;
                    let a2 = -0.5 * q;
                    let a1 = -(p + q);
                    let a0 = suffix[i + 1] + p * h + 0.5 * q * h * h - p;
                    for (k, r) in quadratic_roots(a2, a1, a0).into_iter().enumerate() {
                        candidates[2 + k] = x0 + r;
                    }
                }
            }
            for c in candidates {
                if !c.is_finite() {
                    continue;
                }
                let s = c.clamp(lo, x1);
                let e = payoff(i, s);
                if e > best_e || (e == best_e && s < best_s) {
                    best_e = e;
                    best_s = s;
                }
            }
        }
        if best_e <= 0.0 {
            floor
        } else {
            best_s
        }
    }
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-300 {
        if b.abs() < 1e-300 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // Numerically stable pair.
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = vec![q / a];
    if q != 0.0 {
        roots.push(c / q);
    }
    roots
}

/// `e^A int_A^1 M(t) dt`.
pub fn payoff_envelope(a: f64, envelope: &EnvelopeFunction) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain("A", a));
    }
    Ok(a.exp() * envelope.integral_from(a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeResponse {
    pub threshold: f64,
    /// Set when `M` vanishes on `[0, 1]` and the defining equation has no information.
    pub degenerate: bool,
}

/// Solves `int_A^1 M = M(A)` by bisection and returns `max(floor, A*)`.
pub fn best_response_envelope(envelope: &EnvelopeFunction, floor: f64) -> Result<EnvelopeResponse> {
    if !(0.0..=1.0).contains(&floor) {
        return Err(Error::domain("floor", floor));
    }
    if envelope.values().iter().all(|&v| v == 0.0) {
        return Ok(EnvelopeResponse {
            threshold: floor,
            degenerate: true,
        });
    }
    let root = bisect_decreasing(
        |a| Ok(envelope.integral_from(a) - envelope.value_at(a)),
        0.0,
        1.0,
        DEFAULT_ROOT_TOL,
    )?;
    Ok(EnvelopeResponse {
        threshold: root.max(floor),
        degenerate: false,
    })
}
