//! Strategy catalogue: static thresholds, the Nash strategy, the uniform
//! reference policy, the model-free profile learner and the contextual bandit.

mod bandit;
mod model_free;
mod schedule;

use std::any::Any;

use crate::engine::{Observation, Strategy, StrategyKind};
use crate::equilibrium::{nash_threshold, rational_bound, SolverOptions};
use crate::error::{Error, Result};
use crate::rng::RngStream;

pub use bandit::{
    Arm, ArmSet, Bandit, BanditConfig, BanditDecision, BanditExport, BanditState, ContextKey,
    EpsilonSchedule, PruneEvent, PruneSchedule, BANDIT_FORMAT_VERSION,
};
pub use model_free::{ModelFree, OpponentModel, ProfileEntry, MODEL_FORMAT_VERSION};
pub use schedule::StepSchedule;

fn check_unit(what: &'static str, v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::domain(what, v))
    }
}

/// `alpha_n` and `gamma_n` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Thresholds {
    alpha: Vec<f64>,
    gamma: Vec<f64>,
}

impl Thresholds {
    pub(crate) fn solve(n_max: usize) -> Result<Self> {
        let opts = SolverOptions::default();
        let mut alpha = vec![0.0];
        // gamma_0 is 0 as well: nobody is left to beat.
        let mut gamma = vec![0.0];
        for n in 1..=n_max {
            alpha.push(nash_threshold(n, &opts)?);
            gamma.push(rational_bound(n, &opts)?);
        }
        Ok(Self { alpha, gamma })
    }

    pub(crate) fn alpha(&self, n: usize) -> Option<f64> {
        self.alpha.get(n).copied()
    }

    pub(crate) fn gamma(&self, n: usize) -> Option<f64> {
        self.gamma.get(n).copied()
    }

    pub(crate) fn n_max(&self) -> usize {
        self.alpha.len() - 1
    }
}

/// Always returns `a`.
#[derive(Debug, Clone)]
pub struct FixedThreshold {
    a: f64,
}

impl FixedThreshold {
    pub fn new(a: f64) -> Result<Self> {
        Ok(Self {
            a: check_unit("threshold", a)?,
        })
    }
}

impl Strategy for FixedThreshold {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Fixed
    }
    fn label(&self) -> String {
        format!("fixed({})", self.a)
    }
    fn decide(&mut self, _: &Observation<'_>, _: &mut RngStream) -> f64 {
        self.a
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Returns `max(t, a)`.
#[derive(Debug, Clone)]
pub struct AdaptiveThreshold {
    a: f64,
}

impl AdaptiveThreshold {
    pub fn new(a: f64) -> Result<Self> {
        Ok(Self {
            a: check_unit("threshold", a)?,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

impl Strategy for AdaptiveThreshold {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Adaptive
    }
    fn label(&self) -> String {
        format!("adaptive({})", self.a)
    }
    fn decide(&mut self, obs: &Observation<'_>, _: &mut RngStream) -> f64 {
        obs.constraint_t.max(self.a)
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Returns `max(t, alpha_m)` with `m` opponents still to act.
#[derive(Debug, Clone)]
pub struct NashStrategy {
    thresholds: Thresholds,
}

impl NashStrategy {
    /// Supports tournaments of up to `max_players` players.
    pub fn new(max_players: usize) -> Result<Self> {
        Ok(Self {
            thresholds: Thresholds::solve(max_players.saturating_sub(1))?,
        })
    }

    pub fn check_players(&self, players: usize) -> Result<()> {
        let needed = players.saturating_sub(1);
        if needed > self.thresholds.n_max() {
            return Err(Error::TableTooShort {
                needed,
                have: self.thresholds.n_max(),
            });
        }
        Ok(())
    }
}

impl Strategy for NashStrategy {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Nash
    }
    fn label(&self) -> String {
        "nash".into()
    }
    fn decide(&mut self, obs: &Observation<'_>, _: &mut RngStream) -> f64 {
        match self.thresholds.alpha(obs.remaining()) {
            Some(a) => obs.constraint_t.max(a),
            None => {
                log::error!(
                    "nash table too short for {} remaining players",
                    obs.remaining()
                );
                f64::NAN
            }
        }
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Draws a threshold uniformly from `[t, 1)`.
#[derive(Debug, Clone, Default)]
pub struct UniformReference;

impl UniformReference {
    pub fn draw(t: f64, rng: &mut RngStream) -> f64 {
        if t >= 1.0 {
            return t;
        }
        t + (1.0 - t) * rng.uniform()
    }
}

impl Strategy for UniformReference {
    fn kind(&self) -> StrategyKind {
        StrategyKind::UniformReference
    }
    fn label(&self) -> String {
        "uniform_reference".into()
    }
    fn decide(&mut self, obs: &Observation<'_>, rng: &mut RngStream) -> f64 {
        Self::draw(obs.constraint_t, rng)
    }
    fn as_any(&self) -> &dyn Any {
        self
    }
}


#[cfg(test)]
mod tests {
    use super::test_support::ObsBuf;
    use super::*;

    #[test]
    fn static_strategies() {
        let mut rng = RngStream::from_seed(0);
        let b = ObsBuf::new(3, 1, 0.8);
        let o = b.obs(1);
        assert_eq!(FixedThreshold::new(0.5).unwrap().decide(&o, &mut rng), 0.5);
        assert_eq!(FixedThreshold::new(1.0).unwrap().decide(&o, &mut rng), 1.0);
        assert_eq!(
            AdaptiveThreshold::new(0.6).unwrap().decide(&o, &mut rng),
            0.8
        );
        let b = ObsBuf::new(3, 1, 0.3);
        assert_eq!(
            AdaptiveThreshold::new(0.6)
                .unwrap()
                .decide(&b.obs(1), &mut rng),
            0.6
        );
        assert_eq!(
            AdaptiveThreshold::new(0.0)
                .unwrap()
                .decide(&b.obs(1), &mut rng),
            0.3
        );
        assert!(FixedThreshold::new(1.2).is_err());
    }

    #[test]
    fn nash_decisions() {
        let mut rng = RngStream::from_seed(0);
        let mut s = NashStrategy::new(8).unwrap();
        let b = ObsBuf::new(2, 0, 0.0);
        assert!((s.decide(&b.obs(0), &mut rng) - 0.570557).abs() < 5e-6);
        let b = ObsBuf::new(8, 0, 0.0);
        assert!((s.decide(&b.obs(0), &mut rng) - 0.849900).abs() < 5e-6);
        let b = ObsBuf::new(8, 7, 0.42);
        assert_eq!(s.decide(&b.obs(7), &mut rng), 0.42);
        assert!(s.check_players(9).is_err());
        let b = ObsBuf::new(10, 0, 0.0);
        assert!(s.decide(&b.obs(0), &mut rng).is_nan());
    }

    #[test]
    fn uniform_reference_support_and_mean() {
        let mut rng = RngStream::from_seed(9);
        let n = 100_000;
        let draws: Vec<f64> = (0..n)
            .map(|_| UniformReference::draw(0.9, &mut rng))
            .collect();
        assert!(draws.iter().all(|&x| (0.9..1.0).contains(&x)));
        let mean = draws.iter().sum::<f64>() / n as f64;
        let se = 0.1 / (12.0 * n as f64).sqrt();
        assert!((mean - 0.95).abs() < 3.0 * se);
        assert_eq!(UniformReference::draw(1.0, &mut rng), 1.0);

        // Kolmogorov-Smirnov at t = 0 (1.36/sqrt(n) is the 5% critical value).
        let mut u: Vec<f64> = (0..n)
            .map(|_| UniformReference::draw(0.0, &mut rng))
            .collect();
        u.sort_by(f64::total_cmp);
        let d = u
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                ((i + 1) as f64 / n as f64 - x)
                    .abs()
                    .max((x - i as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        assert!(d < 1.63 / (n as f64).sqrt(), "KS distance {d}");
    }

    #[test]
    fn thresholds_cache() {
        let t = Thresholds::solve(3).unwrap();
        assert_eq!(t.alpha(0), Some(0.0));
        assert!((t.gamma(2).unwrap() - 0.726417).abs() < 5e-6);
        assert_eq!(t.alpha(4), None);
    }
}
