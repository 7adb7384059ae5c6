use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("terrain needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("x-coordinates must be strictly increasing (vertex {index})")]
    NonMonotone { index: usize },
    #[error("x = {0} is outside the terrain")]
    OutOfRange(String),
    #[error("point {0} is not on the terrain")]
    NotOnTerrain(String),
    #[error("guard set does not cover the terrain; x = {x} is unseen")]
    Uncovered { x: String },
    #[error("witness {index} at {point} is seen by no guard candidate")]
    InfeasibleWitness { index: usize, point: String },
    #[error("brute force is limited to {limit} guards, instance has {guards}")]
    TooLarge { guards: usize, limit: usize },
    #[error("point x = {0} is already a candidate")]
    AlreadyCandidate(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
