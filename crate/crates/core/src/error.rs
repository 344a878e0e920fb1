use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit width {0} is outside 1..=64")]
    InvalidWidth(u32),

    #[error("value {bits:#x} does not fit in {width} bits")]
    ValueTooWide { width: u32, bits: u64 },

    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: u32, right: u32 },

    #[error("cannot parse bit string {0:?}: expected only '0' and '1', 1 to 64 characters")]
    Parse(String),

    #[error("mask {0} is trivial (all zeros or all ones)")]
    TrivialMask(String),

    #[error("promise violation: {0}")]
    PromiseViolation(String),

    #[error("width {n} exceeds the limit of {max} for this operation")]
    Capacity { n: u32, max: u32 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
