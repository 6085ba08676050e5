use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no sign change on bracket [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("bisection did not reach tolerance after {0} halvings")]
    IterationCap(usize),

    #[error("Gamcon II mode search failed for c = {c}, d = {d}: {reason}")]
    Convergence { c: f64, d: f64, reason: String },

    #[error("Gamcon II curvature breakdown for c = {c}, d = {d}: radicand {radicand}")]
    Curvature { c: f64, d: f64, radicand: f64 },

    #[error("invalid prior hyperparameters: {0}")]
    InvalidPrior(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("infeasible expert opinion: {0}")]
    InfeasibleOpinion(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("empty sample")]
    EmptySample,

    #[error("insufficient draws: need at least {need}, got {got}")]
    InsufficientDraws { need: usize, got: usize },

    #[error("numerical overflow: {0}")]
    Overflow(String),

    #[error("all {0} draws give an infinite net premium (gamma >= 1)")]
    AllInfinite(usize),

    #[error("gibbs iteration {iteration}: {source}")]
    Chain { iteration: usize, source: Box<Error> },

    #[error("posterior draw {index}: {source}")]
    Draw { index: usize, source: Box<Error> },

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable category, stable across releases.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Bracket { .. } | Error::IterationCap(_) => "root-finding",
            Error::Convergence { .. } | Error::Curvature { .. } => "gamcon",
            Error::InvalidPrior(_) => "prior",
            Error::Degenerate(_) | Error::EmptySample => "data",
            Error::InfeasibleOpinion(_) | Error::NoSolution(_) => "expert",
            Error::InsufficientDraws { .. } | Error::AllInfinite(_) => "posterior",
            Error::Overflow(_) => "overflow",
            Error::Chain { .. } => "chain",
            Error::Draw { .. } => "posterior",
            Error::Unknown { .. } => "unknown-name",
            Error::Parse(_) => "parse",
        }
    }
}
