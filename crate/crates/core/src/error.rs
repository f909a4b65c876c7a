use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("{what}: value {value} outside the admissible domain")]
    Domain { what: &'static str, value: f64 },

    /// `ψ⁻¹` was asked for a time at or beyond the end of the transient window.
    #[error("time {t_hat} is not below the transient end {limit}; use the terminal branch")]
    OutOfRange { t_hat: f64, limit: f64 },

    #[error("matrix is not Hurwitz ({context}): max real part {max_real_part}")]
    NotHurwitz {
        context: &'static str,
        max_real_part: f64,
    },

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("disturbance {value} at t = {t} exceeds the bound L = {bound}")]
    DisturbanceBound { t: f64, value: f64, bound: f64 },

    #[error("state diverged at t = {t} (norm {norm:e}); last valid time {last_valid}")]
    Divergence { t: f64, norm: f64, last_valid: f64 },

    #[error("non-finite state at t = {t}")]
    NotANumber { t: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Scenario-file validation failure, with the offending field path.
    #[error("scenario field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}
