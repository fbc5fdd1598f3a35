use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group is not transitive")]
    NotTransitive,
    #[error("resource limit exceeded: {what} requires {requested}, limit is {limit}")]
    Resource {
        what: String,
        requested: u128,
        limit: u128,
    },
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("not a flag: {0}")]
    NotAFlag(String),
    #[error("partition is not invariant: generator {generator} maps part {part:?} of type {type_id} onto a non-part")]
    NotInvariant {
        generator: usize,
        type_id: u32,
        part: Vec<usize>,
    },
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Resource and usage problems, as opposed to mathematical failures.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
