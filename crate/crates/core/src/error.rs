use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the function it was passed to.
    #[error("rejected input: {what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("quadrature did not reach tolerance {requested:e} (achieved {achieved:e})")]
    Quadrature { requested: f64, achieved: f64 },

    /// Bracketing solver failed; `lo`/`hi` is the last bracket.
    #[error("root solver did not converge, last bracket [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },

    #[error("threshold table covers n <= {have}, index {needed} requested")]
    TableTooShort { needed: usize, have: usize },

    #[error("player {player} returned invalid threshold {value} in round {round}")]
    InvalidThreshold {
        player: usize,
        round: u64,
        value: f64,
    },

    /// A tournament stopped before its last round; partial results were written.
    #[error("tournament aborted: {0}")]
    Aborted(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    /// True for failures of the numerical machinery (as opposed to bad input or I/O).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. } | Error::NoConvergence { .. } | Error::UndefinedMetric(_)
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Csv(_))
    }
}
