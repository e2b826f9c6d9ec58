use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("{what} = {value} is outside the accepted range {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    /// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
    #[error("quadrature did not converge: best estimate {value} with error estimate {err_est:e}")]
    NoConvergence { value: f64, err_est: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, range: &'static str) -> Self {
        Error::Domain { what, value, range }
    }
}
