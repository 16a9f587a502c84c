use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (bad layout, non-unitary, non-state, ...).
    #[error("input error: {0}")]
    Input(String),

    /// An operator lies outside the domain subspace of a map.
    #[error("domain error: operator lies outside the map domain (residual {residual:.3e})")]
    Domain { residual: f64 },

    /// Condition (iii) of consistency fails: a kernel element evolves to a
    /// nonzero reduced operator.
    #[error("subspace is not consistent with the unitary (worst residual {residual:.3e})")]
    Inconsistent {
        residual: f64,
        kernel_element: Box<crate::Operator>,
    },

    /// The requested construction is undefined for the input.
    #[error("refused: {0}")]
    Refused(String),

    /// Rejection sampling accepted no candidate within its budget.
    #[error("positive domain not found at budget {budget}")]
    EmptySample { budget: usize },

    /// A numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A JSON document does not match the expected schema.
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn schema(pointer: &str, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: if pointer.is_empty() { "/".to_owned() } else { pointer.to_owned() },
            message: message.into(),
        }
    }
}
