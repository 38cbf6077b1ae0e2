use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 16")]
    GridSize(usize),
    #[error("grid values contain non-finite entries")]
    NonFinite,
    #[error("grid size mismatch: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("point set is empty")]
    EmptySet,
    #[error("arcs overlap: ({0}, {1}) and ({2}, {3})")]
    OverlappingArcs(f64, f64, f64, f64),
    #[error("invalid arc ({0}, {1})")]
    InvalidArc(f64, f64),
    #[error("point {0} lies outside the closed unit disc")]
    OutsideDisc(f64),
    #[error("point at radius {radius} is within {delta} of the circle; refine the grid")]
    TooCloseToBoundary { radius: f64, delta: f64 },
    #[error("clamped-node fraction {0} is not below 0.25; modulus data too degenerate")]
    DegenerateModulus(f64),
    #[error("function has no Herglotz potential; split it with inner_outer_split first")]
    MissingPotential,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("factorization defect {0} exceeds 0.05 (singular inner part or under-resolved grid)")]
    FactorizationDefect(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("log-modulus is positive on {0} nodes of the integration set")]
    PositiveLogModulus(usize),
    #[error("region precondition violated: {0}")]
    RegionViolation(String),
    #[error("function does not vanish on the pinching set (max |f| = {0})")]
    NotVanishing(f64),
    #[error("tolerance {target} not reached after {steps} bisection steps (best {best})")]
    ToleranceUnreachable { target: f64, best: f64, steps: usize },
    #[error("pinching modulus saturates the clamp on every node")]
    ClampSaturation,
    #[error("boundary zero set is empty")]
    NoBoundaryZeros,
    #[error("unknown check {0}")]
    UnknownCheck(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("candidate list is empty")]
    NoCandidates,
}

pub type Result<T> = std::result::Result<T, Error>;
