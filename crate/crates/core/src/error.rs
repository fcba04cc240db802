use thiserror::Error;

/// Errors produced while building, querying or (de)serializing structures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("position {pos} out of range [{min}..{max}]")]
    PositionOutOfRange { pos: usize, min: usize, max: usize },

    #[error("occurrence {index} of bit/symbol {symbol} out of range (only {count} present)")]
    OccurrenceOutOfRange {
        symbol: u32,
        index: usize,
        count: usize,
    },

    #[error("no select index was built for bit {0}")]
    MissingSelectIndex(u8),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 8], found: [u8; 8] },

    #[error("unsupported format version {found} (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },

    #[error("truncated stream: needed {needed} more bytes, {available} available")]
    Truncated { needed: usize, available: usize },

    #[error("corrupt stream: {0}")]
    Corrupt(String),

    #[error("interior sentinel byte 0x00 at position {0}")]
    InteriorSentinel(usize),

    #[error("PLCP values are not monotone at position {0}")]
    NonMonotonePlcp(usize),

    #[error("empty input")]
    EmptyInput,

    #[error("correctness check failed before timing: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

#[inline]
pub(crate) fn check_pos(pos: usize, min: usize, max: usize) -> Result<()> {
    if pos < min || pos > max {
        Err(Error::PositionOutOfRange { pos, min, max })
    } else {
        Ok(())
    }
}
