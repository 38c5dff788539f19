use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dual quaternion is not in the group (norm {re} + eps {du})")]
    NotInGroup { re: f64, du: f64 },
    #[error("t - h is not a linear motion polynomial: {0}")]
    NotLinearMotion(String),
    #[error("point lies in the exceptional three-space (primal part is zero)")]
    ExceptionalPoint,
    #[error("point violates the Study condition (defect {0:e})")]
    NotOnStudyQuadric(f64),
    #[error("norm polynomial is not real (dual part magnitude {0:e})")]
    NonRealNorm(f64),
    #[error("leading coefficient is not invertible")]
    NonInvertibleLeading,
    #[error("norm polynomial is zero")]
    ZeroNorm,
    #[error("divisor leading coefficient is not invertible")]
    NonInvertibleDivisorLeading,
    #[error("polynomial is negative somewhere on the real line")]
    NotNonnegative,
    #[error("polynomial has odd degree {0}")]
    OddDegree(usize),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("remainder is constant")]
    ConstantRemainder,
    #[error("exceptional case: {0}")]
    ExceptionalCase(String),
    #[error("primal part has the real factor {0}; not generic")]
    NonGeneric(String),
    #[error("motion is unbounded (norm polynomial has a real root)")]
    Unbounded,
    #[error("degenerate poses: {0}")]
    DegeneratePoses(String),
    #[error("interpolated conic is not generic: {0}")]
    NonGenericConic(String),
    #[error("degenerate Bennett flip: {0}")]
    DegenerateFlip(String),
    #[error("curve denominator has a real root")]
    UnboundedCurve,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("only {0} distinct factorization(s); at least two are needed")]
    InsufficientFactorizations(usize),
    #[error("loop {index} does not close (residual {residual:e})")]
    ClosureMismatch { index: usize, residual: f64 },
    #[error("invalid link graph: {0}")]
    InvalidLinkGraph(String),
    #[error("parameter {0} is singular for this linkage")]
    SingularParameter(f64),
    #[error("linkage is not planar")]
    NotPlanar,
    #[error("factorization failed: {0}")]
    NoFactorization(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
