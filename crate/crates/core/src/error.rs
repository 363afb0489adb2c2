use thiserror::Error;

/// Failures while constructing elementary maps or instances.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("break points must be strictly increasing in [0, 1): {0}")]
    InvalidBreaks(String),
    #[error("product of prescribed jumps is {product}, expected 1")]
    JumpProductNotOne { product: f64 },
    #[error("parameter sigma = {sigma} is degenerate (must be positive and away from 1)")]
    DegenerateSigma { sigma: f64 },
    #[error("slope {slope} is not positive")]
    SlopeNotPositive { slope: f64 },
    #[error("invalid PL data: {0}")]
    InvalidPl(String),
    #[error("model map is not smooth: {count} genuine break(s)")]
    NotSmooth { count: usize },
}

/// Failures while reading or writing the map-spec exchange format.
#[derive(Debug, Error)]
pub enum MapSpecError {
    #[error("malformed map spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot parse real literal `{0}`")]
    BadNumber(String),
    #[error("letter {index}: {source}")]
    Letter {
        index: usize,
        #[source]
        source: BuildError,
    },
    #[error("letter {index} cannot be represented exactly: {reason}")]
    NotExact { index: usize, reason: String },
}

/// Failures in break and orbit analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(
        "ambiguous orbit match: f^{steps}({from}) is within tolerance of break {to}, \
         but the next iterates are {divergence:e} apart"
    )]
    AmbiguousMatch {
        from: f64,
        to: f64,
        steps: usize,
        divergence: f64,
    },
    #[error("the two routes for sigma(f) disagree: double product {double}, closed form {closed}")]
    InternalMismatch { double: f64, closed: f64 },
    #[error("k-vector has {got} entries but there are {expected} connections")]
    KVectorLength { expected: usize, got: usize },
    #[error("k-vector entry {value} outside the supported range [-{limit}, {limit}]")]
    KVectorRange { value: i64, limit: i64 },
}

/// Failures in the conjugation machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("sigma(f) = {sigma} is not 1; the rotated one-break correction is required")]
    SigmaNotOne { sigma: f64 },
    #[error("sigma(f) = {sigma} is already 1; the PL construction suffices")]
    SigmaIsOne { sigma: f64 },
    #[error(
        "required break points collide at {point}: slot (connection {conn_a}, offset {offset_a}) \
         and slot (connection {conn_b}, offset {offset_b})"
    )]
    BreakCollision {
        point: f64,
        conn_a: usize,
        offset_a: i64,
        conn_b: usize,
        offset_b: i64,
    },
    #[error(
        "map lacks the (D)-property (orbit jump products {orbit_products:?}); \
         no piecewise C^1 conjugacy to a diffeomorphism exists"
    )]
    DPropertyFails { orbit_products: Vec<f64> },
    #[error("map is not of the form with two breaks b and f(b): {0}")]
    NotTwoBreakForm(String),
    #[error("after the one-break correction sigma is {sigma}, expected 1")]
    CorrectionMismatch { sigma: f64 },
}

/// Failures in the exact rational backend.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("break points must be strictly increasing in [0, 1): {0}")]
    InvalidBreaks(String),
    #[error("slopes must be positive and match the breaks: {0}")]
    InvalidSlopes(String),
    #[error("slopes integrate to {0} over one turn, expected exactly 1")]
    Closure(String),
    #[error("letter {index} ({kind}) has no exact PL representation")]
    NotPiecewiseLinear { index: usize, kind: &'static str },
    #[error("product of prescribed jumps is {0}, expected exactly 1")]
    JumpProductNotOne(String),
    #[error("sigma(f) = {0} is not exactly 1")]
    SigmaNotOne(String),
    #[error("required break points collide at {0}")]
    Collision(String),
    #[error("iteration depth {depth} exceeds the cap {cap}")]
    DepthExceeded { depth: u64, cap: u64 },
    #[error("k-vector has {got} entries but there are {expected} connections")]
    KVectorLength { expected: usize, got: usize },
}

/// Process exit codes shared by the library errors and the command-line tool.
pub mod exit {
    pub const OTHER: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const ORBIT_AMBIGUITY: i32 = 3;
    pub const NO_D_PROPERTY: i32 = 4;
    pub const RESIDUAL: i32 = 5;
}

impl MapSpecError {
    pub fn exit_code(&self) -> i32 {
        exit::PARSE
    }
}

impl AnalysisError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalysisError::AmbiguousMatch { .. } => exit::ORBIT_AMBIGUITY,
            AnalysisError::KVectorLength { .. } | AnalysisError::KVectorRange { .. } => exit::PARSE,
            AnalysisError::InternalMismatch { .. } => exit::OTHER,
        }
    }
}

impl ReductionError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ReductionError::Analysis(e) => e.exit_code(),
            ReductionError::DPropertyFails { .. } => exit::NO_D_PROPERTY,
            _ => exit::OTHER,
        }
    }
}
