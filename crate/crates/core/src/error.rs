use thiserror::Error;

use crate::preference::PriorityVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid triangular fuzzy number ({center}, {left}, {right}): deviations must be finite and non-negative")]
    InvalidTfn { center: f64, left: f64, right: f64 },

    #[error("scale factor {0} is negative")]
    NegativeScale(f64),

    #[error("quadrature failed: normalising integral {0:e} is below tolerance")]
    Quadrature(f64),

    #[error("viewpoint support does not cover the compared fuzzy number")]
    ViewpointCoverage,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("least-deviation iteration did not converge after {iterations} iterations (max |phi| = {max_residual})")]
    NotConverged {
        iterations: usize,
        max_residual: f64,
        last: PriorityVector,
    },

    #[error("distance {distance} m is below the {floor} m floor")]
    DistanceBelowFloor { distance: f64, floor: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
