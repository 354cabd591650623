use std::io;
use std::path::PathBuf;

/// Errors produced by stream construction, circuit configuration and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("bitstream lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("bitstream must contain at least one bit")]
    EmptyStream,

    #[error("invalid bit character {ch:?} at position {pos}")]
    InvalidBit { ch: char, pos: usize },

    #[error("value {value} outside [0, {n}]")]
    ValueOutOfRange { value: u64, n: usize },

    #[error("invalid rng configuration: {0}")]
    InvalidRng(String),

    #[error("decorrelator shuffle buffers need distinct rng configurations")]
    IdenticalRngs,

    #[error("unknown operator `{0}`")]
    UnknownOp(String),

    #[error("series composition needs at least one stage")]
    EmptySeries,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed image: {0}")]
    Image(String),

    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left, right })
    }
}
