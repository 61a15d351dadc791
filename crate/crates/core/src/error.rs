use thiserror::Error;

/// Errors raised by set, function, measure and independence operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("subset is over a ground set of {found} elements, expected {expected}")]
    GroundMismatch { expected: usize, found: usize },

    #[error("enumeration over {size} elements exceeds the cap of {cap}")]
    EnumerationCap { size: usize, cap: usize },

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown element label `{0}`")]
    UnknownLabel(String),

    #[error("unknown concept `{0}`")]
    UnknownConcept(String),

    #[error(
        "sets overlap on {{{shared}}}; remove the shared elements from one side (or from the \
         ground set) before checking independence"
    )]
    Overlap { shared: String },

    #[error("set list is empty")]
    EmptySetList,

    #[error("multi-set mutual information takes between 1 and {max} sets, got {got}")]
    TooManySets { got: usize, max: usize },

    #[error("epsilon must be nonnegative, got {0}")]
    NegativeEpsilon(f64),

    #[error("concepts {{{0}}} are not covered by the conditioning set")]
    ConceptsNotCovered(String),

    #[error("independence type {0} is not supported as a selection constraint")]
    UnsupportedConstraint(String),

    #[error("invalid set function: {0}")]
    InvalidFunction(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("unknown built-in distribution `{0}` (expected D1, D2 or D3)")]
    UnknownDistribution(String),

    #[error("cannot parse number `{0}`")]
    BadNumber(String),

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
