use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter failed validation. `field` names the offending parameter.
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("index out of range: {0}")]
    Range(String),

    /// Requested Fock level does not fit under the truncation.
    #[error("photon truncation too small: need level {needed}, n_max = {n_max}")]
    Truncation { needed: usize, n_max: usize },

    #[error("numeric failure at t = {time}: {message}")]
    Numeric { time: f64, message: String },

    #[error("observer aborted at t = {time}: {message}")]
    Observer { time: f64, message: String },
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn numeric(time: f64, message: impl Into<String>) -> Self {
        Error::Numeric {
            time,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
