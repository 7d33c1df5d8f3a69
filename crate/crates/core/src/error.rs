use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid scoring function: {0}")]
    InvalidScoring(String),
    #[error("scoring functions are defined over different alphabets")]
    AlphabetMismatch,
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid alignment: {0}")]
    InvalidAlignment(String),
    #[error("enumeration of alignments for lengths ({n_x}, {n_y}) exceeds the cap of {cap}")]
    EnumerationCap { n_x: usize, n_y: usize, cap: usize },
    #[error("polygon has no vertices")]
    EmptyPolygon,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed csv: {0}")]
    MalformedCsv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Input problems detected before any computation, as opposed to I/O or
    /// runtime failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidAlphabet(_)
                | Error::InvalidScoring(_)
                | Error::AlphabetMismatch
                | Error::InvalidSequence(_)
                | Error::InvalidAlignment(_)
                | Error::EnumerationCap { .. }
                | Error::InvalidConfig(_)
                | Error::Json(_)
        )
    }
}
