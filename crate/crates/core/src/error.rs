use thiserror::Error;

/// Errors raised by the geometric and Monte Carlo layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("outside the chart domain: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate hull: affine rank {rank}, need {required}")]
    DegenerateHull { rank: usize, required: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("rejection envelope mismatch: acceptance rate {rate:.3e} over {proposals} proposals")]
    Envelope { rate: f64, proposals: u64 },

    #[error("cap cover clause ({clause}) violated: {detail}")]
    CapCover { clause: &'static str, detail: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("replication {replication} at n = {n} failed (stream {stream:#018x}): {source}")]
    Replication {
        n: usize,
        replication: usize,
        stream: u64,
        source: Box<GeoError>,
    },
}

pub type Result<T> = std::result::Result<T, GeoError>;
