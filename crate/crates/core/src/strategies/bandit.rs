//! ε-greedy contextual bandit over threshold arms, with policy pruning.
//!
//! Context is the seat plus, for the first three seats, the set of opponents
//! still to act. Each context owns a sorted grid of candidate thresholds,
//! initialised optimistically and refined by periodic pruning: the worst arms
//! are dropped and the best ones split, so the grid densifies where it matters.

use std::any::Any;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{StepSchedule, Thresholds, UniformReference};
use crate::engine::{Observation, PlayerId, RoundLog, Strategy, StrategyKind};
use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const BANDIT_FORMAT_VERSION: u32 = 1;

/// Seats below this index get one bandit per set of remaining opponents.
const EXACT_CONTEXT_SEATS: usize = 3;
const MIN_ARMS_TO_PRUNE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpsilonSchedule {
    pub initial: f64,
    /// Halve ε every this many rounds.
    pub halve_every: Option<u64>,
    /// ε is zero from this round on.
    pub zero_after: Option<u64>,
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        Self {
            initial: 0.1,
            halve_every: None,
            zero_after: None,
        }
    }
}

impl EpsilonSchedule {
    pub fn constant(eps: f64) -> Self {
        Self {
            initial: eps,
            halve_every: None,
            zero_after: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.initial) {
            return Err(Error::Config(format!(
                "epsilon.initial = {} outside [0, 1]",
                self.initial
            )));
        }
        if self.halve_every == Some(0) {
            return Err(Error::Config("epsilon.halve_every must be positive".into()));
        }
        Ok(())
    }

    pub fn at(&self, round: u64) -> f64 {
        if self.zero_after.is_some_and(|z| round >= z) {
            return 0.0;
        }
        match self.halve_every {
            Some(b) => self.initial * 0.5f64.powi((round / b).min(2000) as i32),
            None => self.initial,
        }
    }
}

/// Prune events after rounds `first`, `first + interval`, `first + interval(1 + growth)`, ...
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PruneSchedule {
    /// No pruning when absent.
    pub first: Option<u64>,
    pub interval: u64,
    pub growth: f64,
    pub max_prunes: u32,
    /// Share of arms dropped (and split) per event.
    pub fraction: f64,
}

impl Default for PruneSchedule {
    fn default() -> Self {
        Self {
            first: None,
            interval: 100_000,
            growth: 2.0,
            max_prunes: 8,
            fraction: 0.1,
        }
    }
}

impl PruneSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.growth < 1.0 || !self.growth.is_finite() {
            return Err(Error::Config(format!(
                "prune.growth = {} must be >= 1",
                self.growth
            )));
        }
        if !(self.fraction > 0.0 && self.fraction <= 0.5) {
            return Err(Error::Config(format!(
                "prune.fraction = {} outside (0, 0.5]",
                self.fraction
            )));
        }
        Ok(())
    }

    /// Round after which the `k`-th (0-based) prune happens.
    pub fn event_round(&self, k: u32) -> Option<u64> {
        let first = self.first?;
        if k >= self.max_prunes {
            return None;
        }
        let mut r = first as f64;
        let mut step = self.interval as f64;
        for _ in 0..k {
            r += step;
            step *= self.growth;
        }
        Some(r.round() as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BanditConfig {
    pub arms: usize,
    pub epsilon: EpsilonSchedule,
    pub prune: PruneSchedule,
    pub step: StepSchedule,
    /// Credit the greedy arm even when the constraint overrode it.
    pub credit_when_constrained: bool,
    pub initial_value: f64,
    pub initial_count: u64,
}

impl Default for BanditConfig {
    fn default() -> Self {
        Self {
            arms: 20,
            epsilon: EpsilonSchedule::default(),
            prune: PruneSchedule::default(),
            step: StepSchedule::Harmonic,
            credit_when_constrained: true,
            initial_value: 1.0,
            initial_count: 10,
        }
    }
}

impl BanditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.arms == 0 {
            return Err(Error::Config("bandit needs at least one arm".into()));
        }
        if !self.initial_value.is_finite() || self.initial_value < 0.0 {
            return Err(Error::Config(format!(
                "initial_value = {} must be >= 0",
                self.initial_value
            )));
        }
        self.epsilon.validate()?;
        self.prune.validate()?;
        self.step.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ContextKey {
    pub seat: usize,
    /// Sorted ids of the opponents still to act; `None` for pooled seats.
    pub remaining: Option<Vec<PlayerId>>,
}

impl ContextKey {
    pub fn for_observation(obs: &Observation<'_>) -> Self {
        let remaining = (obs.seat < EXACT_CONTEXT_SEATS).then(|| {
            let mut r = obs.later_players().to_vec();
            r.sort_unstable();
            r
        });
        Self {
            seat: obs.seat,
            remaining,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arm {
    pub threshold: f64,
    #[serde(rename = "r")]
    pub reward: f64,
    #[serde(rename = "N")]
    pub pulls: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneEvent {
    pub round: u64,
    pub removed: Vec<f64>,
    pub split: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmSet {
    arms: Vec<Arm>,
    history: Vec<PruneEvent>,
}

impl ArmSet {
    /// `k` optimistic arms spread evenly over `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, k: usize, value: f64, count: u64) -> Self {
        let arms = (0..k)
            .map(|i| {
                let x = if k == 1 {
                    lo
                } else {
                    lo + (hi - lo) * i as f64 / (k - 1) as f64
                };
                Arm {
                    threshold: x,
                    reward: value,
                    pulls: count,
                }
            })
            .collect();
        Self {
            arms,
            history: Vec::new(),
        }
    }

    pub fn arms(&self) -> &[Arm] {
        &self.arms
    }

    pub fn history(&self) -> &[PruneEvent] {
        &self.history
    }

    /// Highest estimate; ties go to the lowest threshold.
    pub fn greedy(&self) -> usize {
        let mut best = 0;
        for (i, a) in self.arms.iter().enumerate() {
            if a.reward > self.arms[best].reward {
                best = i;
            }
        }
        best
    }

    /// Arm whose cell (half-way to each neighbour) contains `x`.
    pub fn cell_of(&self, x: f64) -> Option<usize> {
        let a = &self.arms;
        if a.len() < 2 {
            return None;
        }
        let lo = a[0].threshold - (a[1].threshold - a[0].threshold) / 2.0;
        let n = a.len();
        let hi = a[n - 1].threshold + (a[n - 1].threshold - a[n - 2].threshold) / 2.0;
        if x < lo || x > hi {
            return None;
        }
        let i = a.partition_point(|arm| arm.threshold < x);
        Some(match i {
            0 => 0,
            i if i == n => n - 1,
            i if x - a[i - 1].threshold <= a[i].threshold - x => i - 1,
            i => i,
        })
    }

    pub fn update(&mut self, arm: usize, reward: f64, step: StepSchedule, round: u64) {
        let a = &mut self.arms[arm];
        a.pulls += 1;
        a.reward += step.weight(a.pulls, round) * (reward - a.reward);
    }

    /// Drops the worst `fraction` of arms and splits the best `fraction`.
    /// Returns false (no-op) when there are fewer than ten arms.
    pub fn prune(&mut self, fraction: f64, reset_count: u64, round: u64) -> bool {
        let n = self.arms.len();
        if n < MIN_ARMS_TO_PRUNE {
            log::warn!("prune skipped: only {n} arms");
            return false;
        }
        let k = ((fraction * n as f64).floor() as usize).max(1);
        let mut order: Vec<usize> = (0..n).collect();
        // Bottom: lowest estimate, ties to the lowest threshold (indices are sorted by threshold).
        order.sort_by(|&i, &j| {
            self.arms[i]
                .reward
                .total_cmp(&self.arms[j].reward)
                .then(i.cmp(&j))
        });
        let bottom: Vec<usize> = order[..k].to_vec();
        // Top: highest estimate, ties to the highest threshold.
        let top: Vec<usize> = order[k..].iter().rev().take(k).copied().collect();

        let x = |i: usize| self.arms[i].threshold;
        let mut next: Vec<Arm> = (0..n)
            .filter(|i| !bottom.contains(i) && !top.contains(i))
            .map(|i| self.arms[i])
            .collect();
        for &i in &top {
            let parent = self.arms[i];
            let left = if i > 0 {
                x(i) - (x(i) - x(i - 1)) / 4.0
            } else {
                x(i)
            };
            let right = if i + 1 < n {
                x(i) + (x(i + 1) - x(i)) / 4.0
            } else {
                x(i)
            };
            for threshold in [left, right] {
                next.push(Arm {
                    threshold,
                    reward: parent.reward,
                    pulls: reset_count,
                });
            }
        }
        next.sort_by(|a, b| a.threshold.total_cmp(&b.threshold));
        self.history.push(PruneEvent {
            round,
            removed: bottom.iter().map(|&i| x(i)).collect(),
            split: top.iter().map(|&i| x(i)).collect(),
        });
        self.arms = next;
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditDecision {
    pub threshold: f64,
    pub context: ContextKey,
    /// Arm credited with the outcome, if any.
    pub arm: Option<usize>,
    pub explored: bool,
    pub constraint: f64,
}

/// All arm sets of one learner.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BanditState {
    contexts: BTreeMap<ContextKey, ArmSet>,
}

impl BanditState {
    pub fn contexts(&self) -> impl Iterator<Item = (&ContextKey, &ArmSet)> {
        self.contexts.iter()
    }

    pub fn get(&self, key: &ContextKey) -> Option<&ArmSet> {
        self.contexts.get(key)
    }

    pub fn insert(&mut self, key: ContextKey, arms: ArmSet) {
        self.contexts.insert(key, arms);
    }

    pub fn update(
        &mut self,
        key: &ContextKey,
        arm: usize,
        reward: f64,
        step: StepSchedule,
        round: u64,
    ) -> Result<()> {
        let set = self
            .contexts
            .get_mut(key)
            .filter(|s| arm < s.arms.len())
            .ok_or_else(|| Error::Config(format!("no arm {arm} in context {key:?}")))?;
        set.update(arm, reward, step, round);
        Ok(())
    }

    pub fn prune(&mut self, key: &ContextKey, fraction: f64, reset_count: u64, round: u64) -> bool {
        self.contexts
            .get_mut(key)
            .is_some_and(|s| s.prune(fraction, reset_count, round))
    }

    fn prune_all(&mut self, fraction: f64, reset_count: u64, round: u64) {
        for set in self.contexts.values_mut() {
            set.prune(fraction, reset_count, round);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextExport {
    pub context: ContextKey,
    pub arms: Vec<Arm>,
    pub prune_history: Vec<PruneEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditExport {
    pub version: u32,
    pub epsilon: EpsilonSchedule,
    pub current_epsilon: f64,
    pub prunes_done: u32,
    pub contexts: Vec<ContextExport>,
}

impl BanditExport {
    pub fn into_state(self) -> Result<BanditState> {
        if self.version != BANDIT_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported bandit state version {}",
                self.version
            )));
        }
        let contexts = self
            .contexts
            .into_iter()
            .map(|c| {
                (
                    c.context,
                    ArmSet {
                        arms: c.arms,
                        history: c.prune_history,
                    },
                )
            })
            .collect();
        Ok(BanditState { contexts })
    }
}

/// The ε-greedy learner as a tournament player.
#[derive(Debug, Clone)]
pub struct Bandit {
    config: BanditConfig,
    state: BanditState,
    thresholds: Thresholds,
    pending: Option<BanditDecision>,
    prunes_done: u32,
    last_round: u64,
}

impl Bandit {
    pub fn new(max_players: usize, config: BanditConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            state: BanditState::default(),
            thresholds: Thresholds::solve(max_players.saturating_sub(1))?,
            pending: None,
            prunes_done: 0,
            last_round: 0,
        })
    }

    pub fn config(&self) -> &BanditConfig {
        &self.config
    }

    pub fn state(&self) -> &BanditState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut BanditState {
        &mut self.state
    }

    /// Fresh arm grid for a context with `remaining` opponents still to act.
    pub fn initial_arms(&self, remaining: usize) -> Option<ArmSet> {
        let (v, c) = (self.config.initial_value, self.config.initial_count);
        if remaining == 0 {
            return Some(ArmSet::uniform(0.0, 0.0, 1, v, c));
        }
        let lo = (self.thresholds.alpha(remaining / 2)? - 0.1).max(0.0);
        let hi = self.thresholds.gamma(remaining)?;
        Some(ArmSet::uniform(lo, hi, self.config.arms, v, c))
    }

    pub fn choose(&mut self, obs: &Observation<'_>, rng: &mut RngStream) -> Option<BanditDecision> {
        let t = obs.constraint_t;
        let key = ContextKey::for_observation(obs);
        if !self.state.contexts.contains_key(&key) {
            let arms = self.initial_arms(obs.remaining())?;
            self.state.contexts.insert(key.clone(), arms);
        }
        let set = &self.state.contexts[&key];
        let eps = self.config.epsilon.at(obs.round_index);
        // ε of exactly 0 or 1 consumes no coin, so pure policies match their references draw for draw.
        let explore = match eps {
            e if e <= 0.0 => false,
            e if e >= 1.0 => true,
            e => rng.uniform() < e,
        };
        let (threshold, arm) = if explore {
            let x = UniformReference::draw(t, rng);
            (x, set.cell_of(x))
        } else {
            let i = set.greedy();
            (set.arms[i].threshold.max(t), Some(i))
        };
        Some(BanditDecision {
            threshold,
            context: key,
            arm,
            explored: explore,
            constraint: t,
        })
    }

    pub fn export(&self) -> BanditExport {
        BanditExport {
            version: BANDIT_FORMAT_VERSION,
            epsilon: self.config.epsilon,
            current_epsilon: self.config.epsilon.at(self.last_round),
            prunes_done: self.prunes_done,
            contexts: self
                .state
                .contexts
                .iter()
                .map(|(k, s)| ContextExport {
                    context: k.clone(),
                    arms: s.arms.clone(),
                    prune_history: s.history.clone(),
                })
                .collect(),
        }
    }
}

impl Strategy for Bandit {
    fn kind(&self) -> StrategyKind {
        StrategyKind::Bandit
    }

    fn label(&self) -> String {
        format!("bandit(arms={})", self.config.arms)
    }

    fn decide(&mut self, obs: &Observation<'_>, rng: &mut RngStream) -> f64 {
        match self.choose(obs, rng) {
            Some(d) => {
                let x = d.threshold;
                self.pending = Some(d);
                x
            }
            None => {
                log::error!("bandit built for fewer players than seated");
                f64::NAN
            }
        }
    }

    fn end_round(&mut self, me: PlayerId, log: &RoundLog) {
        let played = log.round_index + 1;
        self.last_round = played;
        if let Some(d) = self.pending.take() {
            if let Some(arm) = d.arm {
                let set = &self.state.contexts[&d.context];
                let overridden = set.arms[arm].threshold < d.constraint;
                if d.explored || self.config.credit_when_constrained || !overridden {
                    let reward = log.reward_of(me);
                    self.state
                        .contexts
                        .get_mut(&d.context)
                        .expect("context exists")
                        .update(arm, reward, self.config.step, played);
                }
            }
        }
        while let Some(r) = self.config.prune.event_round(self.prunes_done) {
            if r > played {
                break;
            }
            log::debug!("prune event {} after round {played}", self.prunes_done);
            self.state.prune_all(
                self.config.prune.fraction,
                self.config.initial_count,
                played,
            );
            self.prunes_done += 1;
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
