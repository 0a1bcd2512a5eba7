use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite coordinate")]
    InvalidCoordinate,
    #[error("points are collinear or coincident; hull has no area")]
    DegenerateHull,
    #[error("vertices are not a convex counter-clockwise polygon")]
    NotConvex,
    #[error("box has zero area")]
    DegenerateBox,
    #[error("corners do not form a rectangle: {0}")]
    NotRectangle(&'static str),
    #[error("configuration is within tolerance of a non-smooth point")]
    NearNonSmooth,
    #[error("expected {expected} points, got {got}")]
    PointCount { expected: usize, got: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid probability distribution at sample {0}")]
    InvalidDistribution(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("infeasible configuration: {0}")]
    InfeasibleConfig(String),
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
