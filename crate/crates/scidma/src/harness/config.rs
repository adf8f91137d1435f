//! Simulation configuration: a flat TOML key-value file plus derived
//! quantities and validation.
//!
//! Schema (all keys optional, defaults in parentheses):
//!
//! ```toml
//! code = "c1"                  # "c1" | "c2"                     ("c1")
//! replication = 20             # L, spatial positions            (20)
//! lifting = 100                # Z                               (100)
//! lifting_style = "random_permutation"  # | "circulant"
//! d_r = 4                      # repetition factor               (4)
//! n_users = 8                  # N                               (8)
//! channel = "awgn"             # "awgn" | "rayleigh"             ("awgn")
//! interleaver = "sub_block"    # "sub_block" | "full"            ("sub_block")
//! gamma_db = [1.8, 2.0, 2.2]   # SNR grid in dB                  ([])
//! window = 10                  # W_d, check positions            (10)
//! iterations = 10              # I_max joint iterations / shift  (10)
//! max_frames = 2000            # frame cap per SNR point         (2000)
//! target_errors = 200          # early stop on this many errors  (200)
//! master_seed = 1              #                                 (1)
//! all_zero = true              # all-zero codeword transmission  (true)
//! allow_full_windowed = false  # full interleaver + sliding window
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiuser::{ChannelModel, InterleaverKind};
use crate::parity::LiftingStyle;
use crate::protograph::{CodeId, CoupledProtograph};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub code: CodeId,
    pub replication: usize,
    pub lifting: usize,
    pub lifting_style: LiftingStyle,
    pub d_r: usize,
    pub n_users: usize,
    pub channel: ChannelModel,
    pub interleaver: InterleaverKind,
    pub gamma_db: Vec<f64>,
    pub window: usize,
    pub iterations: usize,
    pub max_frames: u64,
    pub target_errors: u64,
    pub master_seed: u64,
    pub all_zero: bool,
    pub allow_full_windowed: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            code: CodeId::C1,
            replication: 20,
            lifting: 100,
            lifting_style: LiftingStyle::RandomPermutation,
            d_r: 4,
            n_users: 8,
            channel: ChannelModel::Awgn,
            interleaver: InterleaverKind::SubBlock,
            gamma_db: Vec::new(),
            window: 10,
            iterations: 10,
            max_frames: 2000,
            target_errors: 200,
            master_seed: 1,
            all_zero: true,
            allow_full_windowed: false,
        }
    }
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("config parse error: {e}")))?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn coupled(&self) -> Result<CoupledProtograph> {
        self.code.coupled(self.replication)
    }

    /// Code bits per user per frame.
    pub fn code_bits(&self) -> Result<usize> {
        Ok(self.coupled()?.num_cols() * self.lifting)
    }

    /// Transmitted symbols per user per frame.
    pub fn n_cw(&self) -> Result<usize> {
        Ok(self.code_bits()? * self.d_r)
    }

    /// Sum rate over all users, with the termination rate loss included.
    pub fn r_sum(&self) -> Result<f64> {
        Ok(self.n_users as f64 * self.coupled()?.design_rate() / self.d_r as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let cp = self.coupled()?;
        let w = cp.coupling_width();
        let l = self.replication;
        if self.window < w || self.window > l + w - 1 {
            return Err(Error::InvalidConfig(format!(
                "window = {} outside [{w}, {}]",
                self.window,
                l + w - 1
            )));
        }
        if self.n_users == 0 || self.d_r == 0 || self.iterations == 0 || self.max_frames == 0 {
            return Err(Error::InvalidConfig(
                "n_users, d_r, iterations and max_frames must be positive".into(),
            ));
        }
        if self.lifting < 2 {
            return Err(Error::InvalidConfig("lifting factor must be at least 2".into()));
        }
        let sliding = self.window < l + w - 1;
        if self.interleaver == InterleaverKind::Full && sliding && !self.allow_full_windowed {
            return Err(Error::InvalidConfig(
                "full interleaver with a sliding window requires allow_full_windowed = true"
                    .into(),
            ));
        }
        Ok(())
    }
}
