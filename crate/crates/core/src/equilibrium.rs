//! Solvers for every threshold defined by a one-dimensional equation: the
//! Nash thresholds `alpha_n`, the upper bounds `beta_n`, `gamma_n`,
//! `theta_n(c)`, and best responses to pure, mixed and adaptive opponents.
//!
//! Each defining function is non-increasing in the unknown on `[0, 1]`, so all
//! of them go through [`bisect_decreasing`].

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analytic::kernels::h_unchecked;
use crate::analytic::{survival, PureOpponentProfile};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::roots::{bisect_decreasing, DEFAULT_ROOT_TOL};

/// Tolerances for the quadrature inside each defining function and for the bisection.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub root_tol: f64,
    pub quadrature: QuadratureSpec,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            root_tol: DEFAULT_ROOT_TOL,
            quadrature: QuadratureSpec::default(),
        }
    }
}

impl SolverOptions {
    /// Tolerances tight enough to resolve finite differences of size ~1e-5.
    pub fn tight() -> Self {
        Self {
            root_tol: 1e-15,
            quadrature: QuadratureSpec::new(1e-14).expect("positive tolerance"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Nash,
    SimpleUpper,
    RationalUpper,
    StableUpper,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::Nash => "nash",
            TableKind::SimpleUpper => "simple_upper",
            TableKind::RationalUpper => "rational_upper",
            TableKind::StableUpper => "stable_upper",
        }
    }
}

impl std::str::FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nash" => Ok(TableKind::Nash),
            "simple_upper" => Ok(TableKind::SimpleUpper),
            "rational_upper" => Ok(TableKind::RationalUpper),
            "stable_upper" => Ok(TableKind::StableUpper),
            other => Err(Error::Config(format!("unknown table kind `{other}`"))),
        }
    }
}

/// Solved thresholds indexed by the number of opponents `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    kind: TableKind,
    c: Option<f64>,
    values: Vec<f64>,
    tol: f64,
}

#[derive(Serialize)]
struct TableRow<'a> {
    kind: &'a str,
    n: usize,
    c: Option<f64>,
    value: f64,
    tol: f64,
}

impl ThresholdTable {
    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn c(&self) -> Option<f64> {
        self.c
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// Values for `n = 1..=n_max`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `n`. The Nash table also answers `n = 0` with `alpha_0 = 0`.
    pub fn get(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return match self.kind {
                TableKind::Nash => Ok(0.0),
                _ => Err(Error::TableTooShort {
                    needed: 0,
                    have: self.n_max(),
                }),
            };
        }
        self.values.get(n - 1).copied().ok_or(Error::TableTooShort {
            needed: n,
            have: self.n_max(),
        })
    }

    /// CSV with columns `kind, n, c, value, tol`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for (i, &value) in self.values.iter().enumerate() {
            out.serialize(TableRow {
                kind: self.kind.as_str(),
                n: i + 1,
                c: self.c,
                value,
                tol: self.tol,
            })?;
        }
        out.flush()?;
        Ok(())
    }
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::Config("n_max must be at least 1".into()));
    }
    Ok(())
}

fn build_table<F>(
    kind: TableKind,
    c: Option<f64>,
    n_max: usize,
    opts: &SolverOptions,
    solve: F,
) -> Result<ThresholdTable>
where
    F: Fn(usize, &SolverOptions) -> Result<f64>,
{
    check_n_max(n_max)?;
    let values = (1..=n_max)
        .map(|n| solve(n, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdTable {
        kind,
        c,
        values,
        tol: opts.root_tol.max(opts.quadrature.abs_tol()),
    })
}

/// `alpha_n`: `[1 - F(a,1)]^n = int_a^1 [1 - F(t,1)]^n dt`.
pub fn nash_threshold(n: usize, opts: &SolverOptions) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let p = n as i32;
    bisect_decreasing(
        |a| Ok(opts.quadrature.integrate(|t| survival(t).powi(p), a, 1.0)? - survival(a).powi(p)),
        0.0,
        1.0,
        opts.root_tol,
    )
}

pub fn nash_thresholds(n_max: usize) -> Result<ThresholdTable> {
    build_table(
        TableKind::Nash,
        None,
        n_max,
        &SolverOptions::default(),
        nash_threshold,
    )
}

/// `beta_n`: `1 - u^{n+1} = (n+1) e^b u^n` with `u = 1 - (1-b) e^b`.
pub fn simple_threshold_bound(n: usize, opts: &SolverOptions) -> Result<f64> {
    let n = n as i32;
    bisect_decreasing(
        |b| {
            let u = survival(b);
            Ok(1.0 - u.powi(n + 1) - (n + 1) as f64 * b.exp() * u.powi(n))
        },
        0.0,
        1.0,
        opts.root_tol,
    )
}

pub fn simple_threshold_upper_bound(n_max: usize) -> Result<ThresholdTable> {
    build_table(
        TableKind::SimpleUpper,
        None,
        n_max,
        &SolverOptions::default(),
        simple_threshold_bound,
    )
}

/// `gamma_n`: `int_g^1 [1 - F(t,1)] dt = [1 - F(g,1)]^n`.
pub fn rational_bound(n: usize, opts: &SolverOptions) -> Result<f64> {
    let p = n as i32;
    bisect_decreasing(
        |a| Ok(opts.quadrature.integrate(survival, a, 1.0)? - survival(a).powi(p)),
        0.0,
        1.0,
        opts.root_tol,
    )
}

pub fn rational_upper_bound(n_max: usize) -> Result<ThresholdTable> {
    build_table(
        TableKind::RationalUpper,
        None,
        n_max,
        &SolverOptions::default(),
        rational_bound,
    )
}

/// `theta_n(c)`: `int_th^1 min(1, [1-F(th,1)] + c(t-th))^{n-1} [1-F(t,1)] dt = [1-F(th,1)]^n`.
pub fn stable_bound(n: usize, c: f64, opts: &SolverOptions) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("stable bound needs n >= 1".into()));
    }
    if !(c > 0.0) {
        return Err(Error::domain("c", c));
    }
    let p = (n - 1) as i32;
    bisect_decreasing(
        |th| {
            let base = survival(th);
            let knee = th + (1.0 - base) / c;
            let spec = opts.quadrature.clone().with_kinks([knee]);
            let lhs = spec.integrate(
                |t| (base + c * (t - th)).min(1.0).powi(p) * survival(t),
                th,
                1.0,
            )?;
            Ok(lhs - base.powi(n as i32))
        },
        0.0,
        1.0,
        opts.root_tol,
    )
}

pub fn stable_upper_bound(n: usize, c: f64) -> Result<f64> {
    stable_bound(n, c, &SolverOptions::default())
}

pub fn stable_upper_table(n_max: usize, c: f64) -> Result<ThresholdTable> {
    build_table(
        TableKind::StableUpper,
        Some(c),
        n_max,
        &SolverOptions::default(),
        |n, o| stable_bound(n, c, o),
    )
}

/// Best response to fixed-threshold opponents: `int_A^1 H = H(A)`.
pub fn best_response_pure(profile: &PureOpponentProfile) -> Result<f64> {
    best_response_pure_with(profile, &SolverOptions::default())
}

pub fn best_response_pure_with(profile: &PureOpponentProfile, opts: &SolverOptions) -> Result<f64> {
    let ks = profile.thresholds();
    let spec = opts.quadrature.clone().with_kinks(ks.iter().copied());
    bisect_decreasing(
        |a| Ok(spec.integrate(|t| h_unchecked(t, ks), a, 1.0)? - h_unchecked(a, ks)),
        0.0,
        1.0,
        opts.root_tol,
    )
}

/// Opponents drawing their fixed-threshold profile from a finite distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMixedStrategy {
    atoms: Vec<(PureOpponentProfile, f64)>,
}

impl FiniteMixedStrategy {
    pub fn new(atoms: Vec<(PureOpponentProfile, f64)>) -> Result<Self> {
        let Some((first, _)) = atoms.first() else {
            return Err(Error::Config("mixture needs at least one atom".into()));
        };
        let n = first.len();
        if atoms.iter().any(|(p, _)| p.len() != n) {
            return Err(Error::Config(
                "all atoms must have the same opponent count".into(),
            ));
        }
        if let Some(&(_, w)) = atoms.iter().find(|(_, w)| !(*w > 0.0)) {
            return Err(Error::domain("mixture weight", w));
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain("mixture weight sum", total));
        }
        Ok(Self { atoms })
    }

    /// Normalises positive weights to sum to one.
    pub fn normalized(atoms: Vec<(PureOpponentProfile, f64)>) -> Result<Self> {
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        Self::new(atoms.into_iter().map(|(p, w)| (p, w / total)).collect())
    }

    pub fn atoms(&self) -> &[(PureOpponentProfile, f64)] {
        &self.atoms
    }
}

/// Best response to a finite mixture: the weighted defining functions summed.
pub fn best_response_mixed(mix: &FiniteMixedStrategy) -> Result<f64> {
    best_response_mixed_with(mix, &SolverOptions::default())
}

pub fn best_response_mixed_with(mix: &FiniteMixedStrategy, opts: &SolverOptions) -> Result<f64> {
    let specs: Vec<QuadratureSpec> = mix
        .atoms()
        .iter()
        .map(|(p, _)| {
            opts.quadrature
                .clone()
                .with_kinks(p.thresholds().iter().copied())
        })
        .collect();
    bisect_decreasing(
        |a| {
            let mut acc = 0.0;
            for ((p, w), spec) in mix.atoms().iter().zip(&specs) {
                let ks = p.thresholds();
                acc += w * (spec.integrate(|t| h_unchecked(t, ks), a, 1.0)? - h_unchecked(a, ks));
            }
            Ok(acc)
        },
        0.0,
        1.0,
        opts.root_tol,
    )
}

#[inline]
fn adaptive_envelope(t: f64, a: &[f64]) -> f64 {
    a.iter().map(|&ai| survival(t.max(ai))).product()
}

/// Best response against opponents playing `max(t, a_i)`.
pub fn best_response_adaptive_thresholds(a: &[f64]) -> Result<f64> {
    best_response_adaptive_with(a, &SolverOptions::default())
}

pub fn best_response_adaptive_with(a: &[f64], opts: &SolverOptions) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Config("adaptive opponents list is empty".into()));
    }
    if let Some(&bad) = a.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::domain("adaptive threshold", bad));
    }
    let spec = opts.quadrature.clone().with_kinks(a.iter().copied());
    bisect_decreasing(
        |x| Ok(spec.integrate(|t| adaptive_envelope(t, a), x, 1.0)? - adaptive_envelope(x, a)),
        0.0,
        1.0,
        opts.root_tol,
    )
}

/// Curvature of the payoff at `alpha_k` for the player with `k` opponents left
/// in an `(n+1)`-player Nash game:
/// `-e^{a_k} prod_{i=k+1}^n g(a_i) [g(a_k)^k + k g(a_k)^{k-1} a_k e^{a_k}]`
/// with `g(t) = 1 - F(t,1)`.
pub fn second_derivative_at_nash(k: usize, n: usize, nash: &ThresholdTable) -> Result<f64> {
    if nash.kind() != TableKind::Nash {
        return Err(Error::Config(
            "second derivative needs the Nash table".into(),
        ));
    }
    if k == 0 || k > n {
        return Err(Error::Config(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let ak = nash.get(k)?;
    nash.get(n)?;
    let earlier: f64 = (k + 1..=n)
        .map(|i| nash.get(i).map(survival))
        .product::<Result<f64>>()?;
    let g = survival(ak);
    let dg = ak * ak.exp();
    let k = k as i32;
    Ok(-ak.exp() * earlier * (g.powi(k) + k as f64 * g.powi(k - 1) * dg))
}

/// Direction in which the best response moves when one opponent threshold increases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sensitivity {
    Positive,
    Negative,
    /// Too close to the kink `A = k_i` (or no measurable change).
    Indeterminate,
}

/// Half-width of the band around `A = k_i` where the sign is not evaluated.
pub const CRITICAL_BAND: f64 = 1e-4;
/// Finite-difference step; smaller than the band so the kink is never crossed.
pub const SENSITIVITY_STEP: f64 = 1e-5;

/// Predicted sign of the right derivative `dA/dk_i`: positive iff `A >= k_i`.
pub fn predicted_sensitivity(best_response: f64, k_i: f64) -> Sensitivity {
    if best_response >= k_i {
        Sensitivity::Positive
    } else {
        Sensitivity::Negative
    }
}

/// Right-sided finite-difference sign of `dA/dk_i`.
pub fn best_response_sensitivity(profile: &PureOpponentProfile, i: usize) -> Result<Sensitivity> {
    if i >= profile.len() {
        return Err(Error::Config(format!("opponent index {i} out of range")));
    }
    let opts = SolverOptions::tight();
    let a0 = best_response_pure_with(profile, &opts)?;
    let k = profile.thresholds()[i];
    if (a0 - k).abs() < CRITICAL_BAND {
        return Ok(Sensitivity::Indeterminate);
    }
    let (k1, flip) = if k + SENSITIVITY_STEP <= 1.0 {
        (k + SENSITIVITY_STEP, false)
    } else {
        (k - SENSITIVITY_STEP, true)
    };
    let a1 = best_response_pure_with(&profile.with_threshold(i, k1)?, &opts)?;
    let d = if flip { a0 - a1 } else { a1 - a0 };
    Ok(if d > 0.0 {
        Sensitivity::Positive
    } else if d < 0.0 {
        Sensitivity::Negative
    } else {
        Sensitivity::Indeterminate
    })
}

/// `prod_{i<k} [1 - F(max(t, alpha_i), 1)]`: win envelope of the player with `k`
/// Nash opponents still to act.
pub fn nash_stage_envelope(t: f64, k: usize, nash: &ThresholdTable) -> f64 {
    (0..k)
        .map(|i| survival(t.max(nash.get(i).unwrap_or(0.0))))
        .product()
}
