use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("{0} is not a face of the complex")]
    NotAFace(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("complex carries no vertex grading")]
    MissingGrading,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator set is not spherical")]
    NotSpherical,
    #[error("budget exceeded: {what} (reached {reached})")]
    Budget { what: String, reached: usize },
    #[error("subcomplex is not a full subcomplex of the ambient complex")]
    NotFull,
    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),
    #[error("identity cube of type mask {0} missing from the truncation")]
    MissingIdentityCube(String),
    #[error("eigensolver failure: {0}")]
    Eigen(String),
    #[error("growth series has a pole at the requested point")]
    Pole,
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
