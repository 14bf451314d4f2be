use thiserror::Error;

use crate::fincat::{CategoryViolation, FunctorViolation, NotMonic};
use crate::id::Id;
use crate::ogpd::{DoubleFunctorViolation, OgpdViolation};
use crate::sheaves::PresheafViolation;

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid category: {}", list(.0))]
    InvalidCategory(Vec<CategoryViolation>),
    #[error("invalid ordered groupoid: {}", list(.0))]
    InvalidOrderedGroupoid(Vec<OgpdViolation>),
    #[error("invalid functor: {}", list(.0))]
    InvalidFunctor(Vec<FunctorViolation>),
    #[error("invalid double functor: {}", list(.0))]
    InvalidDoubleFunctor(Vec<DoubleFunctorViolation>),
    #[error("invalid presheaf: {}", list(.0))]
    InvalidPresheaf(Vec<PresheafViolation>),
    #[error("naturality fails at {0}")]
    NotNatural(Id),
    #[error("not left-cancellative: {}∘{} = {}∘{}", .0.m, .0.g, .0.m, .0.h)]
    NotLeftCancellative(NotMonic),
    #[error("{object} is not below the domain of {arrow}")]
    NotBelowDomain { arrow: Id, object: Id },
    #[error("{object} is not below the codomain of {arrow}")]
    NotBelowCodomain { arrow: Id, object: Id },
    #[error("{object} is not below the root {root}")]
    NotBelowCodomainRoot { object: Id, root: Id },
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("{what} exceeds the search limit of {limit}")]
    TooLarge { what: String, limit: usize },
    #[error("{object} does not lie below a unique maximal object")]
    NoMaxObjects { object: Id },
    #[error("unknown id {0}")]
    UnknownId(Id),
    #[error("invalid sieve on {root}: {reason}")]
    InvalidSieve { root: Id, reason: String },
    #[error("not a site morphism: {0}")]
    NotASiteMorphism(String),
    #[error("not a sheaf: {0}")]
    NotASheaf(String),
    #[error("format: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Machine-readable witnesses: the violation list for validation
    /// errors, the message otherwise.
    pub fn witnesses(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Error::InvalidCategory(v) => json!(v),
            Error::InvalidOrderedGroupoid(v) => json!(v),
            Error::InvalidFunctor(v) => json!(v),
            Error::InvalidDoubleFunctor(v) => json!(v),
            Error::InvalidPresheaf(v) => json!(v),
            Error::NotLeftCancellative(m) => json!([m]),
            other => json!([{ "message": other.to_string() }]),
        }
    }
}
