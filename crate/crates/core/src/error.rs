use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a product of simplices needs at least one factor")]
    EmptyDims,
    #[error("simplex dimension at factor {factor} is {dim}, expected at least 1")]
    NonPositiveDim { factor: usize, dim: i64 },

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("diagonal entry of factor {factor}, column {column} is {value}, expected 1")]
    DiagonalNotOne { factor: usize, column: usize, value: i64 },
    #[error("entry {value} at row {row}, column {column} is not in {{0, 1}}")]
    EntryOutOfRange { row: usize, column: usize, value: i64 },
    #[error("matrix is not characteristic: {0} vertex condition(s) fail")]
    NotCharacteristic(usize),
    #[error("no factor permutation brings the matrix to unipotent upper triangular form")]
    NotTriangularizable,
    #[error("{0} factors exceed the permutation-search limit of {max}", max = crate::charmatrix::MAX_FACTORS)]
    TooManyFactors(usize),
    #[error("operation needs a cube (all simplex dimensions equal to 1)")]
    NotACube,
    #[error("mod-2 reduction is not characteristic")]
    ReducedNotCharacteristic,
    #[error("coefficient mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("degree {degree} outside 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("polynomial is not homogeneous of top degree {0}")]
    NotTopDegree(usize),
    #[error("vertex class vanishes in the top degree")]
    NonUnitNormalization,
    #[error("pairing {0} is not an integer")]
    NonIntegral(String),
    #[error("value {0} does not fit in a 64-bit integer")]
    Overflow(String),
    #[error("operation needs an even top degree, got {0}")]
    OddDegree(usize),
    #[error("l = {0} is not of the form 2^k - 1")]
    BadL(usize),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("infeasible family: {0}")]
    InfeasibleSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
