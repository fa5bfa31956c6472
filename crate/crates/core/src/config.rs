//! Tournament configuration (TOML).
//!
//! ```toml
//! seed = 7
//! rounds = 100000
//! buckets = 256
//!
//! [epsilon]
//! initial = 0.1
//! halve_every = 200000
//!
//! [[players]]
//! kind = "bandit"
//!
//! [[players]]
//! kind = "nash"
//!
//! [[players]]
//! kind = "adaptive"
//! a = 0.6
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{Seating, Strategy, TournamentOptions};
use crate::error::{Error, Result};
use crate::strategies::{
    AdaptiveThreshold, Bandit, BanditConfig, EpsilonSchedule, FixedThreshold, ModelFree,
    NashStrategy, PruneSchedule, StepSchedule, UniformReference,
};

fn default_buckets() -> usize {
    256
}

fn default_arms() -> usize {
    20
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StrategySpec {
    Fixed {
        threshold: f64,
    },
    Adaptive {
        a: f64,
    },
    Nash,
    UniformReference,
    ModelFree {
        #[serde(default)]
        step: StepSchedule,
        #[serde(default)]
        isotonic: bool,
        /// Overrides the top-level bucket count.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        buckets: Option<usize>,
    },
    Bandit {
        #[serde(default = "default_arms")]
        arms: usize,
        #[serde(default)]
        step: StepSchedule,
        #[serde(default = "default_true")]
        credit_when_constrained: bool,
        /// Override the top-level schedules for this player.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<EpsilonSchedule>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prune: Option<PruneSchedule>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogConfig {
    /// Write every k-th round to the round log (0 disables it).
    pub round_log_every: u64,
    /// Rounds between convergence-curve points.
    pub curve_every: u64,
    /// Evaluation window as a share of the final rounds.
    pub window_fraction: f64,
}

impl Default for LogConfig {
    fn default() -> Self {
        Self {
            round_log_every: 0,
            curve_every: 10_000,
            window_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub round_log: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<PathBuf>,
    /// Directory for learner state exports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub models_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TournamentConfig {
    pub seed: u64,
    pub rounds: u64,
    #[serde(default = "default_buckets")]
    pub buckets: usize,
    #[serde(default)]
    pub seating: Seating,
    #[serde(default)]
    pub epsilon: EpsilonSchedule,
    #[serde(default)]
    pub prune: PruneSchedule,
    #[serde(default)]
    pub log: LogConfig,
    #[serde(default)]
    pub output: OutputConfig,
    pub players: Vec<StrategySpec>,
}

fn unit(field: String, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Config(format!("{field} = {v} outside [0, 1]")))
    }
}

fn in_field<T>(field: String, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{field}: {msg}")),
        other => other,
    })
}

impl TournamentConfig {
    pub fn new(seed: u64, rounds: u64, players: Vec<StrategySpec>) -> Self {
        Self {
            seed,
            rounds,
            buckets: default_buckets(),
            seating: Seating::default(),
            epsilon: EpsilonSchedule::default(),
            prune: PruneSchedule::default(),
            log: LogConfig::default(),
            output: OutputConfig::default(),
            players,
        }
    }

    /// Parses and validates.
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }

    pub fn validate(&self) -> Result<()> {
        if self.players.is_empty() {
            return Err(Error::Config(
                "players: at least one player is required".into(),
            ));
        }
        if self.buckets < 2 {
            return Err(Error::Config(format!(
                "buckets = {} must be at least 2",
                self.buckets
            )));
        }
        let w = self.log.window_fraction;
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::Config(format!(
                "log.window_fraction = {w} outside (0, 1]"
            )));
        }
        in_field("epsilon".into(), self.epsilon.validate())?;
        in_field("prune".into(), self.prune.validate())?;
        for (i, p) in self.players.iter().enumerate() {
            let at = |f: &str| format!("players[{i}].{f}");
            match p {
                StrategySpec::Fixed { threshold } => unit(at("threshold"), *threshold)?,
                StrategySpec::Adaptive { a } => unit(at("a"), *a)?,
                StrategySpec::Nash | StrategySpec::UniformReference => {}
                StrategySpec::ModelFree { step, buckets, .. } => {
                    in_field(at("step"), step.validate())?;
                    if let Some(m) = buckets.filter(|&m| m < 2) {
                        return Err(Error::Config(format!(
                            "{} = {m} must be at least 2",
                            at("buckets")
                        )));
                    }
                }
                StrategySpec::Bandit { .. } => in_field(
                    format!("players[{i}]"),
                    self.bandit_config(p).expect("bandit spec").validate(),
                )?,
            }
        }
        Ok(())
    }

    fn bandit_config(&self, spec: &StrategySpec) -> Option<BanditConfig> {
        match spec {
            StrategySpec::Bandit {
                arms,
                step,
                credit_when_constrained,
                epsilon,
                prune,
            } => Some(BanditConfig {
                arms: *arms,
                step: *step,
                credit_when_constrained: *credit_when_constrained,
                epsilon: epsilon.unwrap_or(self.epsilon),
                prune: prune.unwrap_or(self.prune),
                ..BanditConfig::default()
            }),
            _ => None,
        }
    }

    pub fn tournament_options(&self) -> TournamentOptions {
        TournamentOptions {
            rounds: self.rounds,
            seed: self.seed,
            seating: self.seating,
        }
    }

    /// Evaluation window `[start, rounds)`: the final `window_fraction` of rounds.
    pub fn window_start(&self) -> u64 {
        let len = (self.log.window_fraction * self.rounds as f64).ceil() as u64;
        self.rounds - len.min(self.rounds)
    }

    pub fn build_players(&self) -> Result<Vec<Box<dyn Strategy>>> {
        self.validate()?;
        let n = self.players.len();
        self.players
            .iter()
            .map(|spec| -> Result<Box<dyn Strategy>> {
                Ok(match spec {
                    StrategySpec::Fixed { threshold } => Box::new(FixedThreshold::new(*threshold)?),
                    StrategySpec::Adaptive { a } => Box::new(AdaptiveThreshold::new(*a)?),
                    StrategySpec::Nash => Box::new(NashStrategy::new(n)?),
                    StrategySpec::UniformReference => Box::new(UniformReference),
                    StrategySpec::ModelFree {
                        step,
                        isotonic,
                        buckets,
                    } => Box::new(ModelFree::new(
                        n,
                        buckets.unwrap_or(self.buckets),
                        *step,
                        *isotonic,
                    )?),
                    StrategySpec::Bandit { .. } => Box::new(Bandit::new(
                        n,
                        self.bandit_config(spec).expect("bandit spec"),
                    )?),
                })
            })
            .collect()
    }
}
