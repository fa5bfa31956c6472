use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

/// A round score in `[0, 1]`; a bust is recorded as 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Score(f64);

impl Score {
    pub const BUST: Score = Score(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Score(value))
        } else {
            Err(Error::domain("score", value))
        }
    }

    /// Score of a finished turn: the sum, or 0 if it went over 1.
    pub fn from_sum(sum: f64) -> Self {
        if sum > 1.0 {
            Score::BUST
        } else {
            Score(sum.max(0.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Fixed thresholds of the opponents acting after the player of interest.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PureOpponentProfile {
    thresholds: Vec<f64>,
}

impl PureOpponentProfile {
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = thresholds.iter().find(|k| !(0.0..=1.0).contains(*k)) {
            return Err(Error::domain("opponent threshold", bad));
        }
        Ok(Self { thresholds })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `n` opponents all playing threshold `k`.
    pub fn uniform(n: usize, k: f64) -> Result<Self> {
        Self::new(vec![k; n])
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// Copy with threshold `i` replaced.
    pub fn with_threshold(&self, i: usize, k: f64) -> Result<Self> {
        let mut t = self.thresholds.clone();
        t[i] = k;
        Self::new(t)
    }
}

fn check_unit(what: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(what, v))
    }
}

/// `F(x, y) = (y - x) e^x`, the probability that hitting past `x` lands at or below `y`.
pub fn bust_kernel_f(x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    if !(y >= x && y <= 1.0) {
        return Err(Error::domain("y", y));
    }
    Ok((y - x) * x.exp())
}

/// `1 - F(t, 1)`: probability of going bust with threshold `t`.
#[inline]
pub fn survival(t: f64) -> f64 {
    1.0 - (1.0 - t) * t.exp()
}

#[inline]
pub(crate) fn g_unchecked(t: f64, k: f64) -> f64 {
    if t < k {
        1.0 - (1.0 - k) * k.exp()
    } else {
        1.0 - (1.0 - t) * k.exp()
    }
}

/// `G(t, k)`: probability that an opponent with fixed threshold `k` ends with a
/// score of at most `t` (bust, or landing in `(k, t]`).
pub fn response_kernel_g(t: f64, k: f64) -> Result<f64> {
    check_unit("t", t)?;
    check_unit("k", k)?;
    Ok(g_unchecked(t, k))
}

#[inline]
pub(crate) fn h_unchecked(t: f64, ks: &[f64]) -> f64 {
    ks.iter().map(|&k| g_unchecked(t, k)).product()
}

/// `H(t) = prod_i G(t, k_i)`; 1 for an empty profile.
pub fn product_h(t: f64, profile: &PureOpponentProfile) -> Result<f64> {
    check_unit("t", t)?;
    Ok(h_unchecked(t, profile.thresholds()))
}

/// `int_a^1 H(t) dt`, split at every opponent threshold.
pub fn integral_h(a: f64, profile: &PureOpponentProfile, spec: &QuadratureSpec) -> Result<f64> {
    let ks = profile.thresholds();
    let spec = spec.clone().with_kinks(ks.iter().copied());
    spec.integrate(|t| h_unchecked(t, ks), a, 1.0)
}

/// Expected reward of a first player with threshold `a` against fixed-threshold opponents:
/// `e^a int_a^1 H(t) dt`.
pub fn payoff_pure(a: f64, profile: &PureOpponentProfile) -> Result<f64> {
    payoff_pure_with(a, profile, &QuadratureSpec::default())
}

pub fn payoff_pure_with(
    a: f64,
    profile: &PureOpponentProfile,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_unit("A", a)?;
    Ok(a.exp() * integral_h(a, profile, spec)?)
}

/// Expected points of the first seat under the full tie rule: the valid-score
/// win probability plus an equal share of rounds in which everybody busts.
pub fn expected_reward_pure(a: f64, profile: &PureOpponentProfile) -> Result<f64> {
    let win = payoff_pure(a, profile)?;
    let all_bust = survival(a)
        * profile
            .thresholds()
            .iter()
            .map(|&k| survival(k))
            .product::<f64>();
    Ok(win + all_bust / (profile.len() + 1) as f64)
}
