use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("field is not mean-free (|mean| = {0:e})")]
    NotMeanFree(f64),

    #[error("band {j} outside partition range [{j_min}, {j_max}]")]
    BandOutOfRange { j: i32, j_min: i32, j_max: i32 },

    #[error("band range [{j_min}, {j_max}] not resolvable: {detail}")]
    BandRange { j_min: i32, j_max: i32, detail: String },

    #[error("index hypothesis of {lemma} violated: {detail}")]
    Hypothesis { lemma: &'static str, detail: String },

    #[error("time step {dt:e} exceeds CFL limit {limit:e}")]
    Cfl { dt: f64, limit: f64 },

    #[error("divergence constraint violated: relative divergence {0:e}")]
    Divergence(f64),

    #[error("time mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error("threshold {threshold:e} unreachable: top-band tail norm is {tail:e}")]
    ThresholdUnreachable { threshold: f64, tail: f64 },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
