//! Metrics and experiment harness.
//!
//! * scale metric `s = nR`: 1 means an average share of the points;
//! * reference metric `r = (R − R₀)/(R_ne − R₀)`: 0 at the uniform reference
//!   policy, 1 at the Nash strategy.
//!
//! Everything here is computed from the stream of per-round rewards, so a
//! report can be rebuilt bit-for-bit from a round log.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::TournamentConfig;
use crate::engine::{
    run_tournament, PlayerId, RoundLog, RoundLogRecord, RoundLogWriter, Strategy, StrategyKind,
    TournamentResult,
};
use crate::error::{Error, Result};

/// Below this separation the reference metric is undefined.
pub const REFERENCE_GAP: f64 = 1e-9;

pub fn scale_metric(r: f64, n: usize) -> f64 {
    n as f64 * r
}

pub fn reference_metric(r: f64, r_ref: f64, r_ne: f64) -> Result<f64> {
    let gap = r_ne - r_ref;
    if gap.abs() < REFERENCE_GAP {
        return Err(Error::UndefinedMetric(format!(
            "Nash ({r_ne}) and reference ({r_ref}) rewards coincide"
        )));
    }
    Ok((r - r_ref) / gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerMetrics {
    pub id: PlayerId,
    pub label: String,
    pub kind: StrategyKind,
    pub total_points: f64,
    /// Mean reward over the window.
    pub mean_reward: f64,
    pub std_error: f64,
    pub s: f64,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub rounds: u64,
    pub window: Window,
    /// Window rewards of the Nash and reference players, when both took part.
    pub r_ne: Option<f64>,
    pub r_ref: Option<f64>,
    /// Why `r` is missing, if it is.
    pub reference_note: Option<String>,
    pub players: Vec<PlayerMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub round: u64,
    pub player_id: PlayerId,
    /// Running mean reward since round 0.
    pub cum_reward: f64,
    /// Mean reward over the rounds since the previous curve point.
    pub window_reward: f64,
    pub s: f64,
    pub r: Option<f64>,
}

/// Mean rewards of the players of `kind`, if any.
fn kind_mean(kinds: &[StrategyKind], means: &[f64], kind: StrategyKind) -> Option<f64> {
    let v: Vec<f64> = kinds
        .iter()
        .zip(means)
        .filter(|(k, _)| **k == kind)
        .map(|(_, m)| *m)
        .collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn reference_for(
    kinds: &[StrategyKind],
    means: &[f64],
) -> (Option<f64>, Option<f64>, Result<Vec<f64>>) {
    let r_ne = kind_mean(kinds, means, StrategyKind::Nash);
    let r_ref = kind_mean(kinds, means, StrategyKind::UniformReference);
    let rs = match (r_ne, r_ref) {
        (Some(ne), Some(rf)) => means.iter().map(|&m| reference_metric(m, rf, ne)).collect(),
        _ => Err(Error::UndefinedMetric(
            "lineup lacks a Nash or a reference player".into(),
        )),
    };
    (r_ne, r_ref, rs)
}

/// Streaming aggregation of per-round rewards.
#[derive(Debug, Clone)]
pub struct MetricAccumulator {
    labels: Vec<String>,
    kinds: Vec<StrategyKind>,
    window: Window,
    curve_every: u64,
    rounds: u64,
    cum: Vec<f64>,
    win_sum: Vec<f64>,
    win_sumsq: Vec<f64>,
    win_count: u64,
    block_sum: Vec<f64>,
    block_count: u64,
    curve: Vec<CurveRow>,
}

impl MetricAccumulator {
    pub fn new(
        labels: Vec<String>,
        kinds: Vec<StrategyKind>,
        window: Window,
        curve_every: u64,
    ) -> Self {
        let n = labels.len();
        Self {
            labels,
            kinds,
            window,
            curve_every,
            rounds: 0,
            cum: vec![0.0; n],
            win_sum: vec![0.0; n],
            win_sumsq: vec![0.0; n],
            win_count: 0,
            block_sum: vec![0.0; n],
            block_count: 0,
            curve: Vec::new(),
        }
    }

    pub fn for_players(players: &[Box<dyn Strategy>], config: &TournamentConfig) -> Self {
        Self::new(
            players.iter().map(|p| p.label()).collect(),
            players.iter().map(|p| p.kind()).collect(),
            Window {
                start: config.window_start(),
                end: config.rounds,
            },
            config.log.curve_every,
        )
    }

    pub fn ingest(&mut self, round: u64, rewards: &[f64]) {
        let in_window = (self.window.start..self.window.end).contains(&round);
        for (i, &r) in rewards.iter().enumerate() {
            self.cum[i] += r;
            self.block_sum[i] += r;
            if in_window {
                self.win_sum[i] += r;
                self.win_sumsq[i] += r * r;
            }
        }
        if in_window {
            self.win_count += 1;
        }
        self.rounds += 1;
        self.block_count += 1;
        if self.curve_every > 0 && self.rounds.is_multiple_of(self.curve_every) {
            self.flush_curve(round);
        }
    }

    pub fn ingest_log(&mut self, log: &RoundLog) {
        let rewards = log.rewards(self.labels.len());
        self.ingest(log.round_index, &rewards);
    }

    /// Rebuilds the reward stream from a complete round log (every round, every seat).
    pub fn ingest_records(&mut self, records: &[RoundLogRecord]) -> Result<()> {
        let n = self.labels.len();
        for chunk in records.chunks(n) {
            if chunk.len() != n || chunk.iter().any(|r| r.round != chunk[0].round) {
                return Err(Error::Config(
                    "round log is incomplete or was thinned".into(),
                ));
            }
            let mut rewards = vec![0.0; n];
            for r in chunk {
                rewards[r.player_id] = r.point_share;
            }
            self.ingest(chunk[0].round, &rewards);
        }
        Ok(())
    }

    fn flush_curve(&mut self, round: u64) {
        if self.block_count == 0 {
            return;
        }
        let n = self.labels.len();
        let block: Vec<f64> = self
            .block_sum
            .iter()
            .map(|s| s / self.block_count as f64)
            .collect();
        let (_, _, rs) = reference_for(&self.kinds, &block);
        let rs = rs.ok();
        for i in 0..n {
            self.curve.push(CurveRow {
                round,
                player_id: i,
                cum_reward: self.cum[i] / self.rounds as f64,
                window_reward: block[i],
                s: scale_metric(block[i], n),
                r: rs.as_ref().map(|v| v[i]),
            });
        }
        self.block_sum.iter_mut().for_each(|s| *s = 0.0);
        self.block_count = 0;
    }

    pub fn finish(mut self) -> (MetricReport, Vec<CurveRow>) {
        if self.rounds > 0 && self.block_count > 0 && self.curve_every > 0 {
            self.flush_curve(self.rounds - 1);
        }
        let n = self.labels.len();
        let c = self.win_count as f64;
        let means: Vec<f64> = self
            .win_sum
            .iter()
            .map(|s| if c > 0.0 { s / c } else { 0.0 })
            .collect();
        let (r_ne, r_ref, rs) = reference_for(&self.kinds, &means);
        let (rs, reference_note) = match rs {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let players = (0..n)
            .map(|i| {
                let var = if c > 1.0 {
                    (self.win_sumsq[i] - c * means[i] * means[i]) / (c - 1.0)
                } else {
                    0.0
                };
                PlayerMetrics {
                    id: i,
                    label: self.labels[i].clone(),
                    kind: self.kinds[i],
                    total_points: self.cum[i],
                    mean_reward: means[i],
                    std_error: if c > 0.0 {
                        (var.max(0.0) / c).sqrt()
                    } else {
                        0.0
                    },
                    s: scale_metric(means[i], n),
                    r: rs.as_ref().map(|v| v[i]),
                }
            })
            .collect();
        let window = Window {
            start: self.window.start,
            end: self.window.start + self.win_count,
        };
        let report = MetricReport {
            rounds: self.rounds,
            window,
            r_ne,
            r_ref,
            reference_note,
            players,
        };
        (report, self.curve)
    }
}

pub fn write_curve_csv<W: Write>(rows: &[CurveRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

/// Everything one tournament produces.
pub struct SimulationRun {
    pub config: TournamentConfig,
    pub result: TournamentResult,
    pub report: MetricReport,
    pub curve: Vec<CurveRow>,
    /// Final player states (learners can be exported from here).
    pub players: Vec<Box<dyn Strategy>>,
}

/// Serialisable summary: resolved config, totals and metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: TournamentConfig,
    pub result: TournamentResult,
    pub metrics: MetricReport,
}

impl SimulationRun {
    pub fn summary(&self) -> SimulationReport {
        SimulationReport {
            config: self.config.clone(),
            result: self.result.clone(),
            metrics: self.report.clone(),
        }
    }
}

/// Runs one tournament, optionally streaming the round log to `round_log`.
pub fn run_simulation(
    config: &TournamentConfig,
    round_log: Option<&mut dyn Write>,
) -> Result<SimulationRun> {
    let mut players = config.build_players()?;
    let mut acc = MetricAccumulator::for_players(&players, config);
    let mut writer = round_log.map(|w| RoundLogWriter::new(w, config.log.round_log_every));
    let result = run_tournament(&mut players, &config.tournament_options(), |log| {
        acc.ingest_log(log);
        match writer.as_mut() {
            Some(w) => w.write(log),
            None => Ok(()),
        }
    })?;
    if let Some(w) = writer {
        w.finish()?;
    }
    let (report, curve) = acc.finish();
    Ok(SimulationRun {
        config: config.clone(),
        result,
        report,
        curve,
        players,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub config: TournamentConfig,
    pub seeds: Vec<u64>,
    /// Worker threads; seeds are independent.
    pub jobs: usize,
}

/// Runs the lineup once per seed, in parallel, returning runs in seed order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<SimulationRun>> {
    let jobs = spec.jobs.max(1);
    let configs: Vec<TournamentConfig> = spec
        .seeds
        .iter()
        .map(|&seed| TournamentConfig {
            seed,
            ..spec.config.clone()
        })
        .collect();
    let mut slots: Vec<Option<Result<SimulationRun>>> = configs.iter().map(|_| None).collect();
    let chunk = configs.len().div_ceil(jobs).max(1);
    std::thread::scope(|scope| {
        for (cfgs, out) in configs.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (cfg, slot) in cfgs.iter().zip(out) {
                    *slot = Some(run_simulation(cfg, None));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every seed ran"))
        .collect()
}
