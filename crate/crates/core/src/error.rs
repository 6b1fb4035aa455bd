use thiserror::Error;

/// Errors raised across the library. Variant names follow the invariant or
/// precondition that was violated so callers (and the CLI) can report it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("divisor series is not unital (constant term {0})")]
    DivisorNotUnital(String),
    #[error("series is not unital (constant term {0})")]
    NotUnital(String),
    #[error("series has nonzero constant term {0}")]
    NonzeroConstantTerm(String),

    #[error("classes belong to different rings")]
    RingMismatch,
    #[error("product {left} * {right} is not available in this ring")]
    ProductUnavailable { left: String, right: String },
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {invariant}: {detail}")]
    Validation { invariant: String, detail: String },
    #[error("bad Hodge diamond: {0}")]
    BadDiamond(String),

    #[error("Chern class c_{k} does not lie in bidegree ({k},{k})")]
    BadChernDegrees { k: usize },
    #[error("characteristic series is not unital")]
    SeriesNotUnital,
    #[error("series order {order} is smaller than the ring dimension {dimension}")]
    OrderTooSmall { order: usize, dimension: usize },
    #[error("ring has no tangent Chern data")]
    MissingTangentData,
    #[error("bundle `{0}` is not defined for this ring")]
    UnknownBundle(String),

    #[error("element has mixed parity")]
    MixedParity,
    #[error("u-truncation orders differ ({left} vs {right})")]
    UOrderMismatch { left: usize, right: usize },
    #[error("ring is not Calabi-Yau (c1 != 0)")]
    NotCalabiYau,
    #[error("HRR routes disagree: classical {classical}, canonical {canonical}")]
    RouteMismatch { classical: String, canonical: String },

    #[error("u-headroom exhausted: term at u^{exponent} below stored range u^-{headroom}")]
    UHeadroomExhausted { exponent: i64, headroom: u32 },
    #[error("section has a pole u^{0} below the lattice")]
    SectionPole(i64),
    #[error("direction index {index} out of range for {mu} parameters")]
    BadDirection { index: usize, mu: usize },
    #[error("twist class is not unital")]
    TNotUnital,
    #[error("twist class is not constant in t")]
    TNotConstant,

    #[error("graph enumeration exceeds the cap of {cap} graphs")]
    BudgetExceeded { cap: usize },
    #[error("sample budget is zero")]
    SampleBudgetZero,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn validation(invariant: &str, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }
}
