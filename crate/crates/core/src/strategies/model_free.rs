//! Model-free profile learner.
//!
//! For every opponent and seat the learner keeps `L̂(t)`, the estimated
//! probability that the opponent finishes below a constraint `t`, as a
//! piecewise-constant function on `m` buckets. Its own threshold maximises
//! `e^s ∫_s^1 M` where `M` is the product of the `L̂` of everyone still to act.

use std::any::Any;
use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::{StepSchedule, Thresholds};
use crate::analytic::EnvelopeFunction;
use crate::engine::{Observation, PlayerId, RoundLog, Strategy, StrategyKind};
use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const MODEL_FORMAT_VERSION: u32 = 1;
const MODEL_HEADER: &str = "# contjack opponent-model v";

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEntry {
    values: Vec<f64>,
    visits: Vec<u64>,
}

impl ProfileEntry {
    pub fn new(values: Vec<f64>, visits: Vec<u64>) -> Result<Self> {
        if values.len() != visits.len() || values.len() < 2 {
            return Err(Error::Config(
                "profile entry needs >= 2 buckets and one count per bucket".into(),
            ));
        }
        if let Some(&v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain("profile value", v));
        }
        Ok(Self { values, visits })
    }

    fn empty(m: usize) -> Self {
        Self {
            values: vec![0.0; m],
            visits: vec![0; m],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn visits(&self) -> &[u64] {
        &self.visits
    }

    /// Visit-weighted non-decreasing fit; unvisited buckets copy their left neighbour.
    pub fn isotonic(&self) -> Vec<f64> {
        // Pool-adjacent-violators over visited buckets: (value, weight, width).
        let mut blocks: Vec<(f64, f64, usize)> = Vec::new();
        let visited: Vec<usize> = (0..self.values.len())
            .filter(|&i| self.visits[i] > 0)
            .collect();
        for &i in &visited {
            blocks.push((self.values[i], self.visits[i] as f64, 1));
            while blocks.len() > 1 {
                let (v2, w2, c2) = blocks[blocks.len() - 1];
                let (v1, w1, c1) = blocks[blocks.len() - 2];
                if v1 <= v2 {
                    break;
                }
                blocks.pop();
                let last = blocks.last_mut().expect("two blocks");
                *last = ((v1 * w1 + v2 * w2) / (w1 + w2), w1 + w2, c1 + c2);
            }
        }
        let fitted: Vec<f64> = blocks
            .iter()
            .flat_map(|&(v, _, c)| std::iter::repeat_n(v, c))
            .collect();
        let mut out = vec![0.0; self.values.len()];
        let mut current = 0.0;
        let mut next = visited.iter().zip(&fitted).peekable();
        for (i, slot) in out.iter_mut().enumerate() {
            if let Some(&(&j, &v)) = next.peek() {
                if j == i {
                    current = v;
                    next.next();
                }
            }
            *slot = current;
        }
        out
    }
}

/// Profiles `L̂` keyed by (player, seat).
#[derive(Debug, Clone, PartialEq)]
pub struct OpponentModel {
    buckets: usize,
    schedule: StepSchedule,
    entries: BTreeMap<(PlayerId, usize), ProfileEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelRow {
    player: PlayerId,
    seat: usize,
    bucket_lo: f64,
    bucket_hi: f64,
    #[serde(rename = "L_hat")]
    l_hat: f64,
    visits: u64,
}

impl OpponentModel {
    pub fn new(buckets: usize, schedule: StepSchedule) -> Result<Self> {
        if buckets < 2 {
            return Err(Error::Config(format!(
                "buckets = {buckets} must be at least 2"
            )));
        }
        schedule.validate()?;
        Ok(Self {
            buckets,
            schedule,
            entries: BTreeMap::new(),
        })
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    pub fn schedule(&self) -> StepSchedule {
        self.schedule
    }

    pub fn bucket_of(&self, t: f64) -> usize {
        ((t * self.buckets as f64) as usize).min(self.buckets - 1)
    }

    pub fn entry(&self, player: PlayerId, seat: usize) -> Option<&ProfileEntry> {
        self.entries.get(&(player, seat))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(PlayerId, usize), &ProfileEntry)> {
        self.entries.iter()
    }

    pub fn insert(&mut self, player: PlayerId, seat: usize, entry: ProfileEntry) -> Result<()> {
        if entry.values.len() != self.buckets {
            return Err(Error::Config(format!(
                "profile has {} buckets, model uses {}",
                entry.values.len(),
                self.buckets
            )));
        }
        self.entries.insert((player, seat), entry);
        Ok(())
    }

    /// Records that `player` in `seat`, facing constraint `t`, scored `score`.
    /// `round` is the learner's 1-based round counter (used by the global schedule).
    pub fn observe(&mut self, player: PlayerId, seat: usize, t: f64, score: f64, round: u64) {
        let b = self.bucket_of(t);
        let m = self.buckets;
        let e = self
            .entries
            .entry((player, seat))
            .or_insert_with(|| ProfileEntry::empty(m));
        let r = if score < t { 1.0 } else { 0.0 };
        e.visits[b] += 1;
        let w = self.schedule.weight(e.visits[b], round);
        e.values[b] += w * (r - e.values[b]);
    }

    pub fn envelope(
        &self,
        player: PlayerId,
        seat: usize,
        isotonic: bool,
    ) -> Option<EnvelopeFunction> {
        let e = self.entry(player, seat)?;
        let values = if isotonic {
            e.isotonic()
        } else {
            e.values.clone()
        };
        EnvelopeFunction::uniform_constant(values).ok()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{MODEL_HEADER}{MODEL_FORMAT_VERSION}")?;
        let mut out = csv::Writer::from_writer(w);
        let m = self.buckets as f64;
        for (&(player, seat), e) in &self.entries {
            for (b, (&l_hat, &visits)) in e.values.iter().zip(&e.visits).enumerate() {
                out.serialize(ModelRow {
                    player,
                    seat,
                    bucket_lo: b as f64 / m,
                    bucket_hi: (b + 1) as f64 / m,
                    l_hat,
                    visits,
                })?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R, schedule: StepSchedule) -> Result<Self> {
        let mut r = BufReader::new(r);
        let mut first = String::new();
        r.read_line(&mut first)?;
        let version = first
            .trim_end()
            .strip_prefix(MODEL_HEADER)
            .and_then(|v| v.parse::<u32>().ok())
            .ok_or_else(|| Error::Config("missing opponent-model version line".into()))?;
        if version != MODEL_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported opponent-model version {version}"
            )));
        }
        let mut grouped: BTreeMap<(PlayerId, usize), Vec<ModelRow>> = BTreeMap::new();
        for row in csv::Reader::from_reader(r).deserialize() {
            let row: ModelRow = row?;
            grouped.entry((row.player, row.seat)).or_default().push(row);
        }
        let buckets = match grouped.values().next() {
            Some(rows) => rows.len(),
            None => return Err(Error::Config("opponent model file has no rows".into())),
        };
        let mut model = Self::new(buckets, schedule)?;
        for ((player, seat), mut rows) in grouped {
            rows.sort_by(|a, b| a.bucket_lo.total_cmp(&b.bucket_lo));
            let values = rows.iter().map(|r| r.l_hat).collect();
            let visits = rows.iter().map(|r| r.visits).collect();
            model.insert(player, seat, ProfileEntry::new(values, visits)?)?;
        }
        Ok(model)
    }
}

/// Learner that best-responds to its estimated opponent profiles.
#[derive(Debug, Clone)]
pub struct ModelFree {
    model: OpponentModel,
    thresholds: Thresholds,
    isotonic: bool,
    rounds: u64,
    product: Vec<f64>,
}

impl ModelFree {
    pub fn new(
        max_players: usize,
        buckets: usize,
        schedule: StepSchedule,
        isotonic: bool,
    ) -> Result<Self> {
        Self::with_model(
            max_players,
            OpponentModel::new(buckets, schedule)?,
            isotonic,
        )
    }

    pub fn with_model(max_players: usize, model: OpponentModel, isotonic: bool) -> Result<Self> {
        Ok(Self {
            thresholds: Thresholds::solve(max_players.saturating_sub(1))?,
            product: vec![1.0; model.buckets()],
            model,
            isotonic,
            rounds: 0,
        })
    }

    pub fn model(&self) -> &OpponentModel {
        &self.model
    }

    pub fn model_mut(&mut self) -> &mut OpponentModel {
        &mut self.model
    }

    /// `M(s)` for the opponents after `seat`, or `None` if any of them is unmodelled.
    fn build_product(&mut self, seat: usize, later: &[PlayerId]) -> bool {
        self.product.iter_mut().for_each(|v| *v = 1.0);
        for (k, &p) in later.iter().enumerate() {
            let Some(e) = self.model.entry(p, seat + 1 + k) else {
                return false;
            };
            let fitted;
            let vals: &[f64] = if self.isotonic {
                fitted = e.isotonic();
                &fitted
            } else {
                &e.values
            };
            for (acc, v) in self.product.iter_mut().zip(vals) {
                *acc *= v;
            }
        }
        true
    }
}

impl Strategy for ModelFree {
    fn kind(&self) -> StrategyKind {
        StrategyKind::ModelFree
    }

    fn label(&self) -> String {
        format!("model_free(m={})", self.model.buckets())
    }

    fn decide(&mut self, obs: &Observation<'_>, _: &mut RngStream) -> f64 {
        let t = obs.constraint_t;
        let later = obs.later_players();
        if later.is_empty() {
            return t;
        }
        let Some(cap) = self.thresholds.gamma(later.len()) else {
            log::error!("model-free learner built for fewer players than seated");
            return f64::NAN;
        };
        if !self.build_product(obs.seat, later) {
            // An unmodelled opponent counts as unbeatable: M = 0, so stay at the floor.
            return t;
        }
        let a = match EnvelopeFunction::uniform_constant(self.product.clone()) {
            Ok(m) => m.argmax_payoff(t),
            Err(e) => {
                log::error!("invalid opponent product: {e}");
                return f64::NAN;
            }
        };
        a.min(cap).max(t)
    }

    fn end_round(&mut self, me: PlayerId, log: &RoundLog) {
        self.rounds += 1;
        for (seat, rec) in log.seats.iter().enumerate() {
            if rec.player != me {
                self.model.observe(
                    rec.player,
                    seat,
                    rec.constraint,
                    rec.outcome.score.value(),
                    self.rounds,
                );
            }
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
