use thiserror::Error;

/// Every failure the codec can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported magic {0:?}")]
    UnsupportedMagic(String),
    #[error("malformed PNM header: {0}")]
    MalformedHeader(&'static str),
    #[error("unsupported maxval {0} (only 255 is accepted)")]
    UnsupportedMaxval(u32),
    #[error("truncated pixel payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported wavelet {0:?}")]
    UnsupportedWavelet(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("corrupt packet tree: {0}")]
    CorruptTree(String),
    #[error("corrupt coded data: {0}")]
    CorruptData(&'static str),

    #[error("bad container magic")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("container truncated")]
    Truncated,
    #[error("corrupt container: {0}")]
    CorruptContainer(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::CorruptContainer(msg.into())
    }
}
