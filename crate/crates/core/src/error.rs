use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("basis index {index} out of range for register of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| entry {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid wire selection: {0}")]
    InvalidWires(String),

    #[error("outcome {outcome} has probability {probability:e}, cannot be forced")]
    ZeroProbability { outcome: usize, probability: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("pulse shape undefined at t = {t}: alpha2 = {alpha2:e}, numerator = {numerator:e}")]
    Singularity { t: f64, alpha2: f64, numerator: f64 },

    #[error("channel norm drifted by {drift:e} at t = {t}; retry with a smaller dt")]
    IntegrationFailure { t: f64, drift: f64 },

    #[error("time {t} is not on the trajectory grid")]
    OffGrid { t: f64 },

    #[error("no correction entry for outcome (m={m}, mu={mu}, l={l})")]
    MissingCorrection { m: usize, mu: usize, l: usize },

    #[error(
        "no single X^a Z^b correction restores every fiducial for branch (m={m}, mu={mu}, l={l})"
    )]
    ProtocolInconsistency { m: usize, mu: usize, l: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
