//! Error type shared across the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Underlying I/O failure, annotated with the path involved.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed image or logo file. `offset` is the byte position at which
    /// parsing gave up.
    #[error("format error in {path} at byte {offset}: {reason}")]
    Format {
        path: PathBuf,
        offset: usize,
        reason: String,
    },

    /// A dimension or value precondition was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The watermark does not fit the host image. `slots` is the number of
    /// embedding slots required after square packing, `blocks` the number of
    /// 8x8 blocks the host provides.
    #[error("watermark capacity exceeded: {bits} bits pack into {slots} slots but host has {blocks} blocks")]
    Capacity {
        bits: usize,
        slots: usize,
        blocks: usize,
    },

    /// An attack spec token could not be parsed. `position` is the byte
    /// offset of the offending part within the token string.
    #[error("bad attack token {token:?} at position {position}: {reason}")]
    Token {
        token: String,
        position: usize,
        reason: String,
    },

    /// A benchmark config file line could not be parsed.
    #[error("bad config {path} line {line}: {reason}")]
    Config {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, offset: usize, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            offset,
            reason: reason.into(),
        }
    }
}
