//! Round and tournament simulator.
//!
//! A round: seats are drawn (or fixed), then each seat in order observes the
//! scores already posted, picks a threshold, and draws uniforms while its sum
//! is at most that threshold. Sums above 1 score 0. The highest score takes
//! the point; equal top scores, including an all-bust round, split it.

use std::any::Any;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::analytic::Score;
use crate::error::{Error, Result};
use crate::rng::{RngStream, StreamFactory, StreamPurpose};

pub type PlayerId = usize;

/// What a strategy sees when its turn comes.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub round_index: u64,
    pub seat: usize,
    pub total_players: usize,
    /// Player ids by seat for the whole round.
    pub seating: &'a [PlayerId],
    /// Scores of seats `0..seat`.
    pub prior_scores: &'a [Score],
    /// Largest prior score (0 when nobody has a valid score yet).
    pub constraint_t: f64,
}

impl Observation<'_> {
    pub fn player(&self) -> PlayerId {
        self.seating[self.seat]
    }

    /// Opponents still to act after this seat.
    pub fn remaining(&self) -> usize {
        self.total_players - self.seat - 1
    }

    pub fn later_players(&self) -> &[PlayerId] {
        &self.seating[self.seat + 1..]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    Fixed,
    Adaptive,
    Nash,
    UniformReference,
    ModelFree,
    Bandit,
    Other,
}

/// A player. Learners mutate their state in [`Strategy::end_round`].
pub trait Strategy: Send {
    fn kind(&self) -> StrategyKind;

    fn label(&self) -> String;

    /// Threshold in `[0, 1]` for this turn.
    fn decide(&mut self, obs: &Observation<'_>, rng: &mut RngStream) -> f64;

    /// Called for every player once the round is settled.
    fn end_round(&mut self, _me: PlayerId, _log: &RoundLog) {}

    fn as_any(&self) -> &dyn Any;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnOutcome {
    pub draws: Vec<f64>,
    pub sum: f64,
    pub score: Score,
    pub busted: bool,
}

/// Hits while the sum is at most `threshold`, i.e. stops at the first sum above it.
pub fn play_turn(rng: &mut RngStream, threshold: f64) -> TurnOutcome {
    let mut draws = Vec::with_capacity(4);
    let mut sum = 0.0;
    while sum <= threshold {
        let x = rng.uniform();
        draws.push(x);
        sum += x;
    }
    let busted = sum > 1.0;
    TurnOutcome {
        draws,
        sum,
        score: Score::from_sum(sum),
        busted,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatRecord {
    pub player: PlayerId,
    /// Constraint this seat faced.
    pub constraint: f64,
    pub threshold: f64,
    pub outcome: TurnOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round_index: u64,
    pub seating: Vec<PlayerId>,
    pub seats: Vec<SeatRecord>,
    pub winners: Vec<PlayerId>,
    pub point_share: f64,
}

impl RoundLog {
    pub fn reward_of(&self, player: PlayerId) -> f64 {
        if self.winners.contains(&player) {
            self.point_share
        } else {
            0.0
        }
    }

    /// Rewards indexed by player id (`n` players).
    pub fn rewards(&self, n: usize) -> Vec<f64> {
        let mut r = vec![0.0; n];
        for &w in &self.winners {
            r[w] = self.point_share;
        }
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Seating {
    /// Fresh uniform permutation every round.
    #[default]
    Shuffled,
    /// Player `i` always sits in seat `i`.
    Fixed,
}

fn seating_for(streams: &StreamFactory, round: u64, n: usize, mode: Seating) -> Vec<PlayerId> {
    let mut seating: Vec<PlayerId> = (0..n).collect();
    if mode == Seating::Shuffled {
        streams
            .stream(round, 0, StreamPurpose::Seating)
            .shuffle(&mut seating);
    }
    seating
}

/// Plays one round. Does not call [`Strategy::end_round`].
pub fn play_round(
    streams: &StreamFactory,
    players: &mut [Box<dyn Strategy>],
    round_index: u64,
    seating_mode: Seating,
) -> Result<RoundLog> {
    let n = players.len();
    if n == 0 {
        return Err(Error::Config("a round needs at least one player".into()));
    }
    let seating = seating_for(streams, round_index, n, seating_mode);
    let mut prior: Vec<Score> = Vec::with_capacity(n);
    let mut seats = Vec::with_capacity(n);
    let mut t = 0.0_f64;
    for seat in 0..n {
        let player = seating[seat];
        let obs = Observation {
            round_index,
            seat,
            total_players: n,
            seating: &seating,
            prior_scores: &prior,
            constraint_t: t,
        };
        let mut srng = streams.stream(round_index, seat, StreamPurpose::Strategy);
        let threshold = players[player].decide(&obs, &mut srng);
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidThreshold {
                player,
                round: round_index,
                value: threshold,
            });
        }
        let mut trng = streams.stream(round_index, seat, StreamPurpose::Turn);
        let outcome = play_turn(&mut trng, threshold);
        prior.push(outcome.score);
        seats.push(SeatRecord {
            player,
            constraint: t,
            threshold,
            outcome,
        });
        t = t.max(prior[seat].value());
    }
    let best = seats
        .iter()
        .map(|s| s.outcome.score.value())
        .fold(0.0, f64::max);
    let winners: Vec<PlayerId> = seats
        .iter()
        .filter(|s| s.outcome.score.value() == best)
        .map(|s| s.player)
        .collect();
    let point_share = 1.0 / winners.len() as f64;
    Ok(RoundLog {
        round_index,
        seating,
        seats,
        winners,
        point_share,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TournamentOptions {
    pub rounds: u64,
    pub seed: u64,
    pub seating: Seating,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerTotals {
    pub id: PlayerId,
    pub label: String,
    pub points: f64,
    pub mean_reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentResult {
    pub seed: u64,
    pub rounds_requested: u64,
    pub rounds_played: u64,
    pub players: Vec<PlayerTotals>,
    /// Set when a round was aborted; totals then cover `rounds_played` only.
    pub aborted: Option<String>,
}

impl TournamentResult {
    pub fn is_partial(&self) -> bool {
        self.aborted.is_some()
    }
}

/// Plays `opts.rounds` rounds, handing every settled round to `sink` before
/// learners update. An invalid threshold stops the run and is reported in
/// [`TournamentResult::aborted`]; sink errors are returned.
pub fn run_tournament<F>(
    players: &mut [Box<dyn Strategy>],
    opts: &TournamentOptions,
    mut sink: F,
) -> Result<TournamentResult>
where
    F: FnMut(&RoundLog) -> Result<()>,
{
    let n = players.len();
    if n == 0 {
        return Err(Error::Config(
            "a tournament needs at least one player".into(),
        ));
    }
    let streams = StreamFactory::new(opts.seed);
    let mut points = vec![0.0; n];
    let mut played = 0;
    let mut aborted = None;
    for round in 0..opts.rounds {
        let log = match play_round(&streams, players, round, opts.seating) {
            Ok(log) => log,
            Err(e @ Error::InvalidThreshold { .. }) => {
                log::error!("round {round} aborted: {e}");
                aborted = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        };
        for &w in &log.winners {
            points[w] += log.point_share;
        }
        sink(&log)?;
        for (id, p) in players.iter_mut().enumerate() {
            p.end_round(id, &log);
        }
        played += 1;
    }
    let players = players
        .iter()
        .enumerate()
        .map(|(id, p)| PlayerTotals {
            id,
            label: p.label(),
            points: points[id],
            mean_reward: if played > 0 {
                points[id] / played as f64
            } else {
                0.0
            },
        })
        .collect();
    Ok(TournamentResult {
        seed: opts.seed,
        rounds_requested: opts.rounds,
        rounds_played: played,
        players,
        aborted,
    })
}

/// One CSV row per seat per round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundLogRecord {
    pub round: u64,
    pub seat: usize,
    pub player_id: PlayerId,
    pub threshold: f64,
    pub n_draws: usize,
    pub sum: f64,
    pub score: f64,
    pub busted: bool,
    pub point_share: f64,
}

impl RoundLog {
    pub fn records(&self) -> impl Iterator<Item = RoundLogRecord> + '_ {
        self.seats
            .iter()
            .enumerate()
            .map(move |(seat, s)| RoundLogRecord {
                round: self.round_index,
                seat,
                player_id: s.player,
                threshold: s.threshold,
                n_draws: s.outcome.draws.len(),
                sum: s.outcome.sum,
                score: s.outcome.score.value(),
                busted: s.outcome.busted,
                point_share: self.reward_of(s.player),
            })
    }
}

/// Streams round logs as CSV, keeping every `every`-th round.
pub struct RoundLogWriter<W: Write> {
    inner: csv::Writer<W>,
    every: u64,
}

impl<W: Write> RoundLogWriter<W> {
    pub fn new(w: W, every: u64) -> Self {
        Self {
            inner: csv::Writer::from_writer(w),
            every: every.max(1),
        }
    }

    pub fn write(&mut self, log: &RoundLog) -> Result<()> {
        if !log.round_index.is_multiple_of(self.every) {
            return Ok(());
        }
        for rec in log.records() {
            self.inner.serialize(rec)?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush()?;
        self.inner
            .into_inner()
            .map_err(|e| Error::Io(e.into_error()))
    }
}

pub fn read_round_log_csv<R: Read>(r: R) -> Result<Vec<RoundLogRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}
