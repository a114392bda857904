use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures raised by the simulation and estimation kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution or grid parameter is out of its domain.
    InvalidParameters(&'static str),
    /// Rejection sampling would accept fewer than one draw in a million.
    DegenerateTruncation { acceptance: f64 },
    /// Closed-form entropy requested for a truncated distribution.
    AnalyticUnavailable,
    /// A model evaluated outside its domain (e.g. `β ≤ 1`).
    OutOfDomain(&'static str),
    /// Fewer than three distinct populations in a log-log fit.
    DegenerateDesign,
    /// A response `T ≤ 0` (or non-finite) in a log-log fit.
    NonpositiveResponse,
    /// The entropy-model design matrix is rank deficient.
    DegenerateFeatures,
    /// An input collection was empty.
    Empty,
    /// Rescaling needs at least two users.
    TooFewUsers,
    /// A computed quantity was NaN or infinite.
    NonFinite(&'static str),
}

impl Error {
    /// `true` for errors caused by the caller's input, `false` for numeric
    /// failures that arise from otherwise valid input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameters(_)
                | Error::AnalyticUnavailable
                | Error::OutOfDomain(_)
                | Error::Empty
                | Error::TooFewUsers
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameters(what) => write!(f, "invalid parameters: {what}"),
            Error::DegenerateTruncation { acceptance } => {
                write!(
                    f,
                    "degenerate truncation (acceptance probability {acceptance:e})"
                )
            }
            Error::AnalyticUnavailable => {
                f.write_str("analytic form unavailable; use empirical estimator")
            }
            Error::OutOfDomain(what) => write!(f, "out of model domain: {what}"),
            Error::DegenerateDesign => f.write_str("degenerate design: fewer than 3 distinct P"),
            Error::NonpositiveResponse => f.write_str("nonpositive response"),
            Error::DegenerateFeatures => f.write_str("degenerate feature matrix"),
            Error::Empty => f.write_str("empty input"),
            Error::TooFewUsers => f.write_str("rescaling requires at least 2 users"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
        }
    }
}

impl core::error::Error for Error {}
