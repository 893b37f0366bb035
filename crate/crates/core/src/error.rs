use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EswError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("metric is not Einstein (residual {residual:e})")]
    NotEinstein { residual: f64 },

    #[error("matrix is not symmetric (defect {0:e})")]
    NotSymmetric(f64),

    #[error("matrix entry ({0},{1}) is not rational")]
    NotRational(usize, usize),

    #[error("direction is not traceless (defect {0:e})")]
    NotTraceless(f64),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl EswError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        EswError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for EswError {
    fn from(e: std::io::Error) -> Self {
        EswError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, EswError>;
