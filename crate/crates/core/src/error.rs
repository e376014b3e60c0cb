use thiserror::Error;

/// Errors raised by the special-function, solver and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("derivative order {order} exceeds the supported maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("argument {x} is outside the range of the asymptotic series ({range})")]
    OutOfAsymptoticRange { x: f64, range: &'static str },

    #[error("unsupported initial-data function `{0}`")]
    UnsupportedFunction(String),

    #[error("point {x} lies inside the core |x| < {tail_radius}; tail expansion not usable")]
    InsideCore { x: f64, tail_radius: f64 },

    #[error("requested accuracy not reached: value {value}, error estimate {error_estimate}")]
    AccuracyNotReached { value: f64, error_estimate: f64 },

    #[error("incomplete data: {0}")]
    IncompleteData(String),

    #[error("oracle not applicable: {0}")]
    InapplicableOracle(String),

    #[error("oracle unreliable: {0}")]
    OracleUnreliable(String),

    #[error("argument {0} is outside the validated range of the oracle")]
    OutOfValidatedRange(f64),

    #[error("finite-difference stencil error: {0}")]
    Stencil(String),

    #[error("residuals (max {max_residual:e}) are below the solver error floor {floor:e}")]
    SignalTooSmall { max_residual: f64, floor: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {x}")))
    }
}
