use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("cannot parse exact number {0:?}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("result leaves the quadratic fields supported here")]
    NotQuadratic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BodyError {
    #[error("polyhedral body needs at least one vertex")]
    EmptyVertices,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("{0} must be nonnegative")]
    Negative(&'static str),
    #[error("body has empty interior")]
    EmptyInterior,
    #[error("malformed canonical body: {0}")]
    Malformed(String),
    #[error("gauge is unbounded: the body contains the origin")]
    UnboundedGauge,
    #[error("point must have positive coordinates")]
    NonPositivePoint,
    #[error(transparent)]
    Number(#[from] NumberError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JumpError {
    #[error("bound must be positive")]
    NonPositiveBound,
    #[error("window must be at least 2")]
    WindowTooSmall,
    #[error("no c > 0 puts the point on the boundary of c·P(phi) + P(psi)")]
    NoSolution,
    #[error("invalid parameters for jump set {label}: {reason}")]
    InvalidParams { label: String, reason: String },
    #[error("unknown jump set label {0:?}")]
    UnknownLabel(String),
    #[error("jump set is certified only below {complete_below}; needs {needed}")]
    InsufficientCompleteness { complete_below: String, needed: String },
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Number(#[from] NumberError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("xcap {xcap} captures no boundary point of the body")]
    XcapTooSmall { xcap: u64 },
    #[error("{0} must be at least {1}")]
    TooSmall(&'static str, u64),
    #[error(transparent)]
    Body(#[from] BodyError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("cases violate the margin precondition: {0:?}")]
    MarginViolation(Vec<usize>),
    #[error("invalid probe parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Body(#[from] BodyError),
}
