use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} lies outside the admissible range {range}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        range: String,
    },

    /// The tangent coupling `v * a(t)` reached the Coulomb critical value `|k_d|`.
    #[error("tangent coupling {coupling} reaches the Coulomb limit |k_d| = {limit}")]
    DomainExceeded { coupling: f64, limit: f64 },

    #[error("no admissible tangent produced a bound")]
    NoBoundAvailable,

    #[error("integration failed at r = {r}: {reason}")]
    IntegrationFailure { r: f64, reason: String },

    #[error("no eigenvalue bracket with {nodes} nodes found in [{lower}, {upper}]")]
    BracketNotFound { nodes: u32, lower: f64, upper: f64 },

    #[error("wavefunction norm underflowed ({0})")]
    DegenerateSolution(f64),

    #[error("table row {index}: {source}")]
    Row {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// The error with any row context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Row { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn out_of_domain(what: &'static str, value: f64, range: impl Into<String>) -> Self {
        Error::OutOfDomain {
            what,
            value,
            range: range.into(),
        }
    }
}
