use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point:?} lies outside the chart domain")]
    PointOutsideDomain { point: Vec<f64> },
    #[error("metric is degenerate at {point:?}: |det g| = {det:e}")]
    DegenerateMetric { point: Vec<f64>, det: f64 },
    #[error("metric at {point:?} has {negative} negative eigenvalues, chart expects {expected}")]
    SignatureMismatch {
        point: Vec<f64>,
        negative: usize,
        expected: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("seed field is null at the evaluation point (g(E,E) = {value:e})")]
    NullSeedField { value: f64 },
    #[error("vector field is null at the evaluation point (g(E,E) = {value:e})")]
    NullField { value: f64 },
    #[error("plane is degenerate (|Q| = {q:e}); use the lightlike sectional curvature")]
    DegeneratePlane { q: f64 },
    #[error("not lightlike: {0}")]
    NotLightlike(String),
    #[error("vectors do not span a plane")]
    DegenerateSpan,
    #[error("parameter t = {t} is forbidden for epsilon = {epsilon} (|t + epsilon| < {margin:e})")]
    ForbiddenParameter { t: f64, epsilon: f64, margin: f64 },
    #[error("field is not unit: |g(E,E) - epsilon| reaches {deviation:e}")]
    NonUnitField { deviation: f64 },
    #[error("hypersurface is degenerate at the evaluation point")]
    DegenerateHypersurface,
    #[error("induced metric has a radical of dimension {0}, expected 1")]
    WrongRank(usize),
    #[error("unknown manifold '{0}'")]
    UnknownManifold(String),
    #[error("unknown identity '{0}'")]
    UnknownIdentity(String),
    #[error("manifold '{manifold}' has no field named '{field}'")]
    UnknownField { manifold: String, field: String },
    #[error("unknown null-hypersurface example '{0}'")]
    UnknownExample(String),
    #[error("g(c', c') = {value:e} < 0 at curve parameter {s}")]
    NegativeSpeedSquared { s: f64, value: f64 },
    #[error("cannot write report: {0}")]
    SinkUnwritable(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
