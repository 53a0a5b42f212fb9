use thiserror::Error;

/// Errors raised by the rate-region and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value lies outside the mathematical domain of the operation.
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A parameter is structurally invalid (bad grid step, zero trials, ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{0}: input sequence is empty")]
    EmptyInput(&'static str),

    /// Both users transmit with probability 0, or both with probability 1,
    /// so no single-transmission state ever occurs.
    #[error("degenerate scheduling: P1(1-P2) + P2(1-P1) = 0 (P1 = {p1}, P2 = {p2})")]
    DegenerateScheduling { p1: f64, p2: f64 },

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("quadrature did not converge on [{lo}, {hi}]: error estimate {estimate:e} after {intervals} subintervals")]
    QuadratureNonConvergence {
        lo: f64,
        hi: f64,
        estimate: f64,
        intervals: usize,
    },
}

impl Error {
    /// True for failures of a numerical method rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::QuadratureNonConvergence { .. })
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
