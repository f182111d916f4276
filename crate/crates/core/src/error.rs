use thiserror::Error;

use crate::poset::Label;

/// Errors raised by the reduction engine and the numerical phase-space tools.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown orbit type label `{0}`")]
    UnknownLabel(Label),

    #[error("duplicate orbit type label `{0}`")]
    DuplicateLabel(Label),

    #[error("poset has {size} orbit types, above the configured cap of {cap}")]
    PosetTooLarge { size: usize, cap: usize },

    #[error("poset is invalid: {0}")]
    InvalidPoset(String),

    #[error("relation contains a cycle through `{0}`")]
    CyclicRelation(String),

    #[error("no unique minimal orbit type (found {0} minimal elements)")]
    NoUniqueMinimum(usize),

    #[error("invalid action spec: {0}")]
    InvalidAction(String),

    #[error("orbit type `{label}` mixes cells of dimension {dims:?}")]
    EqualDimensionAssumptionViolated { label: Label, dims: Vec<usize> },

    #[error("orbit type `{0}` is not in the starred lattice")]
    NotStarredType(Label),

    #[error("no seam `{high}` ≻ `{low}`: `{low}` is not strictly below `{high}`")]
    NoSuchSeam { high: Label, low: Label },

    #[error("inconsistent dimensions: {0}")]
    InconsistentDimensions(String),

    #[error("action is not almost semifree: {0}")]
    NotAlmostSemifree(String),

    #[error("expected a single orbit type, found {0}")]
    MultipleOrbitTypes(usize),

    #[error("invalid phase point: {0}")]
    InvalidPoint(String),

    #[error("point is off the zero momentum level (|J| = {0:e})")]
    NotOnZeroLevel(f64),

    #[error("no admissible covector in the momentum kernel for this base point")]
    EmptyKernel,

    #[error("zero-level sampler gave up after {0} retries")]
    RetriesExhausted(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no reduced stratum matches (smallest violation {0:e})")]
    NoMatchingStratum(f64),

    #[error("image matches several reduced strata: {0:?}")]
    AmbiguousMembership(Vec<String>),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
