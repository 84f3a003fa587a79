use thiserror::Error;

use crate::kernel::{Name, Term, Type};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("ill-typed term `{term}`: {reason}")]
    IllTyped { term: Term, reason: String },

    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: Type, found: Type },

    #[error("term is not in normal eta-long form at type `{ty}`: `{term}`")]
    NotEtaLong { term: Term, ty: Type },

    #[error("term is not beta-normal: `{0}`")]
    NotNormal(Term),

    #[error("resource budget exceeded: {what} (limit {limit})")]
    ResourceExceeded { what: &'static str, limit: usize },

    #[error("model too large: {what} exceeds the cap of {cap}")]
    ModelTooLarge { what: String, cap: u64 },

    #[error("the two terms are identical: `{0}`")]
    SameTerm(Term),

    #[error("order {order} of `{ty}` exceeds the supported maximum {max}")]
    OrderTooHigh { ty: Type, order: usize, max: usize },

    #[error("term is not closed: free variable `{0}`")]
    NotClosed(Name),

    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(Name),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid budget: {0}")]
    InvalidBudget(&'static str),

    #[error("parse error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("identifier `{0}` is reserved (the `z` prefix is used for generated constants)")]
    ReservedName(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI's JSON output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::IllTyped { .. } => "ill_typed",
            Error::TypeMismatch { .. } => "type_mismatch",
            Error::NotEtaLong { .. } => "not_eta_long",
            Error::NotNormal(_) => "not_normal",
            Error::ResourceExceeded { .. } => "resource_exceeded",
            Error::ModelTooLarge { .. } => "model_too_large",
            Error::SameTerm(_) => "same_term",
            Error::OrderTooHigh { .. } => "order_too_high",
            Error::NotClosed(_) => "not_closed",
            Error::DuplicateVariable(_) => "duplicate_variable",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidElement(_) => "invalid_element",
            Error::InvalidBudget(_) => "invalid_budget",
            Error::Parse { .. } => "parse_error",
            Error::ReservedName(_) => "reserved_name",
        }
    }

    pub(crate) fn ill_typed(term: &Term, reason: impl Into<String>) -> Self {
        Error::IllTyped {
            term: term.clone(),
            reason: reason.into(),
        }
    }
}
