//! Monte Carlo simulation harness: configuration, BER campaigns and CSV
//! emission.

pub mod ber;
pub mod config;

pub use ber::{ber_csv, profile_csv, run_ber, run_interleaver_comparison, BerPoint, SimResult};
pub use config::SimConfig;
