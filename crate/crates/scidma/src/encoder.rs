//! Systematic encoder derived from a parity-check matrix.
//!
//! Gaussian elimination over GF(2) brings `H` to reduced row echelon form;
//! the pivot columns become parity positions and the remaining `k = n - rank`
//! columns carry information bits. Rank-deficient matrices are handled by
//! shrinking `k` accordingly.

use crate::error::{Error, Result};
use crate::parity::ParityCheck;

/// Dense bit matrix with `u64`-packed rows, used only for elimination.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn zeros(num_rows: usize, num_cols: usize) -> Self {
        let words_per_row = num_cols.div_ceil(64);
        Self {
            cols: num_cols,
            rows: vec![vec![0u64; words_per_row]; num_rows],
        }
    }

    pub fn from_parity(h: &ParityCheck) -> Self {
        let mut m = Self::zeros(h.num_rows(), h.num_cols());
        for r in 0..h.num_rows() {
            for &c in h.row(r) {
                m.set(r, c as usize, true);
            }
        }
        m
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.rows[r][c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if v {
            self.rows[r][c / 64] |= 1 << (c % 64);
        } else {
            self.rows[r][c / 64] &= !(1 << (c % 64));
        }
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        let (lo, hi) = if target < source {
            let (a, b) = self.rows.split_at_mut(source);
            (&mut a[target], &b[0])
        } else {
            let (a, b) = self.rows.split_at_mut(target);
            (&mut b[0], &a[source])
        };
        for (t, s) in lo.iter_mut().zip(hi.iter()) {
            *t ^= s;
        }
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows.len() {
                break;
            }
            let pivot_row = (row..self.rows.len()).find(|&r| self.get(r, col));
            let Some(pr) = pivot_row else { continue };
            self.rows.swap(row, pr);
            for r in 0..self.rows.len() {
                if r != row && self.get(r, col) {
                    self.xor_rows(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Rank via elimination (consumes a copy).
    pub fn rank(&self) -> usize {
        let mut copy = self.clone();
        copy.reduce().len()
    }
}

/// Systematic GF(2) encoder for a lifted code.
#[derive(Debug, Clone)]
pub struct Encoder {
    n: usize,
    pivot_cols: Vec<usize>,
    info_cols: Vec<usize>,
    /// For each pivot row: info-column indices (positions into `info_cols`)
    /// whose sum gives the pivot bit.
    parity_terms: Vec<Vec<u32>>,
}

impl Encoder {
    pub fn from_parity(h: &ParityCheck) -> Result<Self> {
        if h.num_rows() == 0 || h.num_cols() == 0 {
            return Err(Error::InvalidArgument("empty parity-check matrix".into()));
        }
        let mut m = BitMatrix::from_parity(h);
        Self::from_bitmatrix(&mut m)
    }

    /// Builds the encoder from an arbitrary dense binary matrix (consumed by
    /// the in-place reduction).
    pub fn from_bitmatrix(m: &mut BitMatrix) -> Result<Self> {
        let n = m.num_cols();
        let pivot_cols = m.reduce();
        let is_pivot = {
            let mut mask = vec![false; n];
            for &c in &pivot_cols {
                mask[c] = true;
            }
            mask
        };
        let info_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let info_index = {
            let mut idx = vec![u32::MAX; n];
            for (i, &c) in info_cols.iter().enumerate() {
                idx[c] = i as u32;
            }
            idx
        };
        let mut parity_terms = Vec::with_capacity(pivot_cols.len());
        for (row, _) in pivot_cols.iter().enumerate() {
            let terms: Vec<u32> = info_cols
                .iter()
                .filter(|&&c| m.get(row, c))
                .map(|&c| info_index[c])
                .collect();
            parity_terms.push(terms);
        }
        Ok(Self {
            n,
            pivot_cols,
            info_cols,
            parity_terms,
        })
    }

    /// Code length `n`.
    pub fn codeword_len(&self) -> usize {
        self.n
    }

    /// Code dimension `k = n - rank(H)`.
    pub fn dimension(&self) -> usize {
        self.info_cols.len()
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Columns of `H` carrying information bits.
    pub fn info_cols(&self) -> &[usize] {
        &self.info_cols
    }

    /// Maps `k` info bits to an `n`-bit codeword with `H c^T = 0`.
    pub fn encode(&self, info: &[u8]) -> Vec<u8> {
        assert_eq!(info.len(), self.dimension(), "info word length mismatch");
        let mut cw = vec![0u8; self.n];
        for (i, &c) in self.info_cols.iter().enumerate() {
            cw[c] = info[i] & 1;
        }
        for (row, &pc) in self.pivot_cols.iter().enumerate() {
            let bit = self.parity_terms[row]
                .iter()
                .fold(0u8, |s, &i| s ^ info[i as usize]);
            cw[pc] = bit;
        }
        cw
    }
}
