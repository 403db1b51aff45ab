use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The parameters are legal but fall outside the range where the
    /// closed-form construction is known to be valid.
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    #[error("invalid sensor array: {0}")]
    InvalidArray(String),

    #[error("lag {lag} is missing from the contiguous coarray segment")]
    HoleInSegment { lag: i64 },

    #[error("scene has {sources} sources but the array resolves at most {max_sources}")]
    Capacity { sources: usize, max_sources: usize },

    #[error("C({n},{k}) = {count} subsets exceeds the enumeration limit of {limit}")]
    EnumerationTooLarge {
        n: usize,
        k: usize,
        count: u128,
        limit: u64,
    },

    #[error("invalid scene: {0}")]
    InvalidScene(String),
}

impl Error {
    /// True for errors caused by bad user-supplied parameters rather than by
    /// a failed computation.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::UnsupportedParameter(_)
                | Error::InvalidArray(_)
                | Error::InvalidScene(_)
                | Error::Capacity { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
