use thiserror::Error;

/// Coarse classification used by callers that need to map failures onto
/// exit statuses or report buckets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// An input violates a structural invariant (category axioms, functoriality, ...).
    Validation,
    /// The input is well formed but an operation's hypothesis does not hold.
    Precondition,
    /// The input could not be read or refers to identifiers that do not exist.
    Input,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown {kind} identifier `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("duplicate {kind} identifier `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("{what} failed validation: {detail}")]
    Invalid { what: &'static str, detail: String },

    #[error("map is not stratum-preserving: cell `{cell}` (stratum {source_stratum}) maps to `{image}` (stratum {target_stratum})")]
    NotStratumPreserving {
        cell: String,
        image: String,
        source_stratum: usize,
        target_stratum: usize,
    },

    #[error("morphism `{morphism}` is not invertible ({context})")]
    NotInvertible { morphism: String, context: String },

    #[error("structure category is not a groupoid: `{witness}` has no inverse")]
    NotGroupoid { witness: String },

    #[error("base complexes differ: {0}")]
    BaseMismatch(String),

    #[error("cells do not form a subcomplex: face `{face}` of `{cell}` is missing")]
    NotSubcomplex { cell: String, face: String },

    #[error("region is disconnected: `{unreached}` cannot be reached from `{root}`")]
    Disconnected { root: String, unreached: String },

    #[error("not a simplicial map: {0}")]
    NotSimplicial(String),

    #[error("attaching map degenerates cell `{cell}`: {detail}")]
    DegenerateAttachment { cell: String, detail: String },

    #[error("attached cell `{cell}` has the same vertex set as `{other}`; retry in delta mode")]
    CellCollision { cell: String, other: String },

    #[error("not an F-map: {0}")]
    NotFBundleMap(String),

    #[error("square does not commute: {0}")]
    NonCommutingSquare(String),

    #[error("coend transition over `{cell}` is not well defined on classes: {detail}")]
    IllDefinedCoend { cell: String, detail: String },

    #[error("not a functor: {0}")]
    NotFunctor(String),

    #[error("strata mismatch: {0}")]
    StrataMismatch(String),

    #[error("{0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Invalid { .. } | Error::NotFunctor(_) | Error::IllDefinedCoend { .. } => {
                ErrorClass::Validation
            }
            Error::UnknownId { .. }
            | Error::DuplicateId { .. }
            | Error::Malformed(_)
            | Error::Json(_)
            | Error::Io(_) => ErrorClass::Input,
            _ => ErrorClass::Precondition,
        }
    }

    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn unknown(kind: &'static str, id: impl Into<String>) -> Self {
        Error::UnknownId {
            kind,
            id: id.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
