use crate::scene::ObjectId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("could not place object {placed} of {requested} after {attempts} attempts; workspace too dense")]
    DensityInfeasible {
        placed: usize,
        requested: usize,
        attempts: usize,
    },

    #[error("scene parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("object {0} is not in the scene")]
    UnknownObject(ObjectId),

    #[error("scene has no objects")]
    EmptyScene,

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("planner revisited object {0}; decision chain is cyclic")]
    Cycle(ObjectId),

    #[error("exhaustive search limited to {limit} objects, scene has {actual}")]
    EnumerationBound { limit: usize, actual: usize },

    #[error("unknown method '{0}' (expected proposed, baseline or gaussian)")]
    UnknownMethod(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
