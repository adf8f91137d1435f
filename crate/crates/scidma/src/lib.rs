//! Spatially coupled LDPC codes over an interleave-division multiple-access
//! channel: code construction, density-evolution analysis, a windowed joint
//! receiver and a Monte Carlo simulation harness.

pub mod analysis;
pub mod encoder;
pub mod error;
pub mod harness;
pub mod multiuser;
pub mod parity;
pub mod protograph;
pub mod receiver;
pub mod seed;

pub use encoder::Encoder;
pub use error::{Error, Result};
pub use parity::{LiftingStyle, ParityCheck};
pub use protograph::{CodeId, CoupledProtograph, Protograph};
