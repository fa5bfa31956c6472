use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step weight for incremental averages.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    /// `1/n` with `n` the update count of the cell: a plain running mean.
    #[default]
    Harmonic,
    /// `1 / sum_{i<n} a^i`: exponentially discounted mean for drifting targets.
    Exponential { decay: f64 },
    /// `1/r` with `r` the learner's global round counter.
    GlobalRound,
}

impl StepSchedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSchedule::Exponential { decay } if !(decay > 0.0 && decay <= 1.0) => Err(
                Error::Config(format!("step decay = {decay} must lie in (0, 1]")),
            ),
            _ => Ok(()),
        }
    }

    /// Weight of the `count`-th update (1-based) made in learner round `round` (1-based).
    pub fn weight(&self, count: u64, round: u64) -> f64 {
        match *self {
            StepSchedule::Harmonic => 1.0 / count.max(1) as f64,
            StepSchedule::Exponential { decay } => {
                let n = count.max(1);
                if decay >= 1.0 {
                    1.0 / n as f64
                } else {
                    (1.0 - decay) / (1.0 - decay.powf(n as f64))
                }
            }
            StepSchedule::GlobalRound => 1.0 / round.max(1) as f64,
        }
    }
}
