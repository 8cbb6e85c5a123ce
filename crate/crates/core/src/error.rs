use thiserror::Error;

/// Errors raised by the torus model, the projection engine and the experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TeichError {
    #[error("zero measured foliation")]
    ZeroFoliation,
    #[error("invalid Teichmüller point ({x}, {y}): need finite x and y > 0")]
    InvalidPoint { x: f64, y: f64 },
    #[error("mapping class has determinant {0}, expected +1")]
    Determinant(i64),
    #[error("mapping class with trace {0} is not pseudo-Anosov (|trace| must exceed 2)")]
    NotPseudoAnosov(i64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("interval [{0}, {1}] is not finite")]
    InfiniteInterval(f64, f64),
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("not a primitive slope: ({0}, {1})")]
    NotPrimitive(i64, i64),
    #[error("{0}")]
    Domain(String),
    #[error("check not applicable: {0}")]
    Inapplicable(String),
    #[error("geodesic is not certified precompact: {0}")]
    NotCertified(String),
    #[error("objective is not quasi-convex on [{lo}, {hi}]")]
    NotQuasiConvex { lo: f64, hi: f64 },
    #[error("[{0}] is an endpoint class of the geodesic")]
    EndpointClass(String),
    #[error("internal assertion failed: {0}")]
    Assertion(String),
    #[error("io: {0}")]
    Io(String),
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, TeichError>;

impl From<std::io::Error> for TeichError {
    fn from(e: std::io::Error) -> Self {
        TeichError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for TeichError {
    fn from(e: serde_json::Error) -> Self {
        TeichError::Serde(e.to_string())
    }
}

impl From<csv::Error> for TeichError {
    fn from(e: csv::Error) -> Self {
        TeichError::Io(e.to_string())
    }
}
