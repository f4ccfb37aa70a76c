use thiserror::Error;

/// Errors produced by the game model, generators, searches and constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("state space has {count} states, over the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },

    #[error("potential {kind} is not applicable: {reason}")]
    InapplicablePotential { kind: String, reason: String },

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("gave up after {attempts} rejected samples; try a higher edge probability")]
    GaveUp { attempts: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
