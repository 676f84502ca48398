//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A state or argument had the wrong dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// A state or parameter contained NaN or an unexpected infinity.
    NonFinite(String),
    /// Transverse diameter too close to the foci distance to build a
    /// spheroid (`c - c_min < 1e-12 * c_min`).
    DegenerateSpheroid { c: f64, c_min: f64 },
    /// Transverse diameter below the foci distance.
    InfeasibleCost { c: f64, c_min: f64 },
    /// The two spheroid foci coincide, or a rotation axis has zero length.
    ZeroLengthAxis,
    /// A goal set was empty or contained a repeated state.
    InvalidGoalSet(String),
    /// Every goal spheroid has zero measure at the current cost, so no
    /// sample can improve the solution.
    NoImprovingSet,
    /// A state fed to an informed-set operation lies outside every goal
    /// spheroid.
    OutsideInformedSet,
    /// A rejection loop exhausted its attempt budget.
    RetryBudgetExhausted { attempts: u64 },
    /// World construction failed validation.
    InvalidWorld(String),
    /// Planner or benchmark configuration failed validation.
    InvalidConfig(String),
    /// Rewiring neighborhoods are undefined for trees this small.
    TreeTooSmall { card: usize },
    /// An experiment produced too little data to fit the requested
    /// quantity.
    InsufficientData(String),
    /// Wrapped I/O, CSV or serialization failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::DegenerateSpheroid { c, c_min } => write!(
                f,
                "degenerate spheroid: c = {c} too close to c_min = {c_min}"
            ),
            Error::InfeasibleCost { c, c_min } => {
                write!(f, "infeasible cost: c = {c} below c_min = {c_min}")
            }
            Error::ZeroLengthAxis => write!(f, "zero-length axis"),
            Error::InvalidGoalSet(why) => write!(f, "invalid goal set: {why}"),
            Error::NoImprovingSet => write!(f, "no goal spheroid has positive measure"),
            Error::OutsideInformedSet => write!(f, "state lies outside the informed set"),
            Error::RetryBudgetExhausted { attempts } => {
                write!(f, "sampling retry budget exhausted after {attempts} attempts")
            }
            Error::InvalidWorld(why) => write!(f, "invalid world: {why}"),
            Error::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            Error::TreeTooSmall { card } => {
                write!(f, "rewiring neighborhood undefined for {card} vertices")
            }
            Error::InsufficientData(why) => write!(f, "insufficient data: {why}"),
            Error::Io(why) => write!(f, "i/o failure: {why}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
