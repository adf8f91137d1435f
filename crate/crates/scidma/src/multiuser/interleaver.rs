//! Per-user chip interleavers.
//!
//! The sub-block variant permutes chips independently within each spatial
//! position, so chips of a position stay inside that position and windowed
//! detection can address them locally. The full variant permutes the whole
//! frame and is only compatible with full-frame detection.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::seed::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterleaverKind {
    /// One permutation over the whole frame.
    Full,
    /// Independent permutation per spatial position.
    SubBlock,
}

/// A seeded bijection between repetition order and chip (transmit) order.
#[derive(Debug, Clone)]
pub struct Interleaver {
    kind: InterleaverKind,
    /// `chip[k] = rep[perm[k]]`.
    perm: Vec<u32>,
    /// `rep[r]` lands at chip `inv[r]`.
    inv: Vec<u32>,
}

impl Interleaver {
    /// Draws the permutation for one user. `block_len` is the number of chips
    /// per spatial position and must divide `total_len`.
    pub fn new(
        kind: InterleaverKind,
        total_len: usize,
        block_len: usize,
        master_seed: u64,
        user: usize,
    ) -> Result<Self> {
        if block_len == 0 || total_len % block_len != 0 {
            return Err(Error::DimensionMismatch(format!(
                "frame of {total_len} chips is not a whole number of {block_len}-chip blocks"
            )));
        }
        let mut rng = seed::stream_rng(master_seed, Stream::Interleaver, user as u64);
        let mut perm: Vec<u32> = (0..total_len as u32).collect();
        match kind {
            InterleaverKind::Full => perm.shuffle(&mut rng),
            InterleaverKind::SubBlock => {
                for chunk in perm.chunks_mut(block_len) {
                    chunk.shuffle(&mut rng);
                }
            }
        }
        let mut inv = vec![0u32; total_len];
        for (k, &r) in perm.iter().enumerate() {
            inv[r as usize] = k as u32;
        }
        Ok(Self { kind, perm, inv })
    }

    pub fn kind(&self) -> InterleaverKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Repetition-order index feeding chip `k`.
    pub fn source_of(&self, k: usize) -> usize {
        self.perm[k] as usize
    }

    /// Chip index that repetition-order element `r` is sent on.
    pub fn target_of(&self, r: usize) -> usize {
        self.inv[r] as usize
    }

    /// Repetition order to chip order.
    pub fn interleave<T: Copy + Default>(&self, rep: &[T], chips: &mut Vec<T>) {
        assert_eq!(rep.len(), self.perm.len());
        chips.clear();
        chips.extend(self.perm.iter().map(|&r| rep[r as usize]));
    }

    /// Chip order to repetition order.
    pub fn deinterleave<T: Copy + Default>(&self, chips: &[T], rep: &mut Vec<T>) {
        assert_eq!(chips.len(), self.perm.len());
        rep.clear();
        rep.resize(chips.len(), T::default());
        for (k, &r) in self.perm.iter().enumerate() {
            rep[r as usize] = chips[k];
        }
    }
}
