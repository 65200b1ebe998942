use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },

    #[error("bad parameter: {0}")]
    Parameter(String),

    #[error("cannot compose `{g}` after `{f}`: target of the first is not the source of the second")]
    NotComposable { g: String, f: String },

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("category is invalid ({} violation(s)); first: {}", .0.len(), .0.first().map(String::as_str).unwrap_or(""))]
    InvalidCategory(Vec<String>),

    #[error("category is not connected")]
    Disconnected,

    #[error("walk error: {0}")]
    Walk(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid grading: {0}")]
    InvalidGrading(String),

    #[error("unsupported grading group: {0}")]
    UnsupportedGroup(String),

    #[error("equality undecidable in presented group: {0}")]
    Undecidable(String),

    #[error("no degree-one walk reaches object `{0}` from the base object")]
    NoConnector(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
