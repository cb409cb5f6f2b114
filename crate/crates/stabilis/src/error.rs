use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("variable index {0} out of range for {1} variables")]
    BadVariableIndex(usize, usize),
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("expected a real value, got {0}")]
    NotReal(String),
    #[error("expected a positive value, got {0}")]
    NotPositive(String),
    #[error("coefficient of {0} is not real: {1}")]
    NonRealCoefficient(String, String),
    #[error("degree {0} exceeds the allowed bound {1} in variable {2}")]
    DegreeOverflow(u32, u32, usize),
    #[error("operator table has no image for monomial {0}")]
    TableGap(String),
    #[error("polynomial is not multi-affine: monomial {0}")]
    NotMultiAffine(String),
    #[error("degree in the differentiation variable exceeds one")]
    LiebSokalDegree,
    #[error("point {0} is not strictly inside the upper half-plane product")]
    NotInUpperHalfPlane(String),
    #[error("Moebius map is singular: ad - bc = 0")]
    SingularMoebius,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
