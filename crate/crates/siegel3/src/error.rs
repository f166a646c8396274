use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree too large: {degree} exceeds configured bound {bound}")]
    DegreeTooLarge { degree: u32, bound: u32 },
    #[error("weight {0:?} is not dominant")]
    NotDominant([i64; 3]),
    #[error("weight {weight:?} does not sum to 4d = {expected}")]
    WeightSum { weight: [i64; 3], expected: i64 },
    #[error("polynomial is not annihilated by the raising operators")]
    NotHighestWeight,
    #[error("multiplicity index {index} out of range (multiplicity {mult})")]
    IndexOutOfRange { index: usize, mult: usize },
    #[error("zero concomitant")]
    ZeroConcomitant,
    #[error("incompatible degrees for pairing: {0}")]
    IncompatiblePairing(String),
    #[error("truncation insufficient: need box {needed:?}, have {have:?}")]
    Truncation { needed: [i32; 3], have: [i32; 3] },
    #[error("NotDivisible at block {0:?}")]
    NotDivisible([i32; 3]),
    #[error("not an eigenvector for this instance formula: {0}")]
    NotEigen(String),
    #[error("normalization failed: {0}")]
    Normalization(String),
    #[error("singular matrix")]
    Singular,
    #[error("resultant minor vanished on every retry")]
    ResultantRetry,
    #[error("identically zero form")]
    ZeroForm,
    #[error("coefficient out of truncation box: {0}")]
    OutOfBox(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
