use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signal annihilated: the multiplicative field has zero mean")]
    SignalAnnihilated,
    #[error("invalid level {name} = {value}: {reason}")]
    InvalidLevel {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("aspect ratio {0} is outside (0, 1]")]
    InvalidAspectRatio(f64),
    #[error("invalid composite mode: {0}")]
    InvalidComposite(&'static str),
    #[error(
        "threshold {lambda} is below the bulk edge {edge}; the risk formulas assume lambda >= sigma_b (1 + sqrt(beta))"
    )]
    ThresholdBelowBulk { lambda: f64, edge: f64 },
    #[error("signal values must be positive, finite and strictly decreasing")]
    UnorderedSignal,
    #[error("no spectrum: {0}")]
    NoSpectrum(&'static str),
    #[error("closed-form worst case is only available for beta = 1 (got {0})")]
    RequiresSquare(f64),
    #[error("rank must be at least 1")]
    ZeroRank,
}

pub type Result<T> = core::result::Result<T, Error>;
