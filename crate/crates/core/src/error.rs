use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A construction parameter is out of range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// A codeword does not have the shape a gadget operation needs.
    #[error("gadget shape: {0}")]
    GadgetShape(String),

    #[error("malformed formula: {0}")]
    MalformedFormula(String),

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("operation requires {expected} flavor")]
    Flavor { expected: &'static str },

    #[error("incomplete assignment: {0}")]
    IncompleteAssignment(String),

    #[error("label {label} out of range for alphabet of size {alphabet}")]
    LabelOutOfRange { label: usize, alphabet: usize },

    /// A construction or search would exceed a configured cap.
    #[error("required size {required} exceeds the cap of {cap}")]
    Budget { required: u128, cap: u128 },

    #[error("solver inputs disagree: {0}")]
    Mismatch(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
