//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised while building, composing, evaluating or analysing objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An endpoint occurs in more than one wire.
    #[error("duplicate endpoint use: {0}")]
    DuplicateEndpoint(String),
    /// A port is not attached to any wire.
    #[error("dangling port: {0}")]
    DanglingPort(String),
    /// An endpoint refers to a missing vertex or an out-of-range index.
    #[error("invalid endpoint: {0}")]
    InvalidEndpoint(String),
    /// The total flow graph has a directed cycle.
    #[error("cycle in total flow graph")]
    Cycle,
    /// A vertex does not have the port counts prescribed by its label.
    #[error("label arity mismatch: {0}")]
    LabelArity(String),
    /// Two objects cannot be composed or compared because their arities differ.
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    /// Matrix or Hilbert-space dimensions are incompatible.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A name does not refer to a known gate, gadget, converter, model or label.
    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },
    /// A label is not part of the label set of a model.
    #[error("label {label} is not available in model {model}")]
    LabelNotInModel { label: String, model: String },
    /// A gadget dictionary has no entry for a label.
    #[error("missing dictionary entry for label {0}")]
    MissingEntry(String),
    /// A table of CP maps violates complete positivity or the channel condition.
    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),
    /// A probability table is malformed.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    /// A rewrite occurrence does not match the rule's left-hand side.
    #[error("no match: {0}")]
    NoMatch(String),
    /// An iterative procedure exceeded its guard.
    #[error("iteration cap exceeded: {0}")]
    IterationCap(String),
    /// Any other invalid argument.
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn unknown(kind: &'static str, name: impl Into<String>) -> Error {
    Error::Unknown {
        kind,
        name: name.into(),
    }
}
