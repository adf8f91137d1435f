//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid protograph: {0}")]
    InvalidProtograph(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("replication factor L = {l} must be at least the coupling width W = {w}")]
    ReplicationTooShort { l: usize, w: usize },
    #[error("lifting factor Z = {z} is smaller than the maximum edge multiplicity {max_mult}")]
    LiftingFactorTooSmall { z: usize, max_mult: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
