use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function} did not converge (estimate {estimate:e}, abs error estimate {abs_error:e})")]
    Convergence {
        function: &'static str,
        estimate: f64,
        abs_error: f64,
    },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("degenerate window ({lo}, {hi}): probability mass {mass:e} below 1e-12")]
    DegenerateWindow { lo: f64, hi: f64, mass: f64 },

    #[error("KL integrand unbounded near y = {at}: estimate vanishes where the reference density is positive")]
    Divergence { at: f64 },

    #[error("line {line}: {detail}")]
    Parse { line: u64, detail: String },

    #[error("no game records for team {0:?}")]
    EmptySelection(String),

    #[error("{rejected} of {samples} Monte Carlo draws failed (limit 0.1%); last failure: {last}")]
    TooManyRejections {
        rejected: usize,
        samples: usize,
        last: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    /// True for failures of a numerical routine rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::DegenerateWindow { .. }
                | Error::Divergence { .. }
                | Error::TooManyRejections { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
