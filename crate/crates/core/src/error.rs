use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameters that do not fit together (model vs. K/s, unknown builtin, field too small).
    #[error("configuration error: {0}")]
    Config(String),
    /// Arithmetic outside its domain, e.g. inverting zero or a probability outside [0, 1].
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Memory below the feasibility threshold of the model.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// A scheme or a transformation input failed a structural or decodability precondition.
    #[error("scheme rejected: {0}")]
    Rejected(String),
    #[error("line {line}: {msg}")]
    Load { line: usize, msg: String },
    #[error("invalid scheme document: field `{field}`: {msg}")]
    Format { field: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn format(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            msg: msg.into(),
        }
    }
}
