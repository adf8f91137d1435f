//! Lifting of a coupled protograph to a binary parity-check matrix.
//!
//! Each nonzero protograph entry with multiplicity `t` expands into `t`
//! disjoint `Z x Z` permutation sub-blocks. Permutations are either drawn
//! independently at random per edge (default) or restricted to circulant
//! shifts for small reproducible matrices.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::protograph::CoupledProtograph;
use crate::seed::{self, Stream};

/// Family of per-edge permutations used in the lifting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftingStyle {
    /// Independent random `Z`-permutations per protograph edge.
    RandomPermutation,
    /// Random circulant shifts per protograph edge.
    Circulant,
}

/// Sparse binary parity-check matrix obtained by lifting a coupled protograph.
#[derive(Debug, Clone)]
pub struct ParityCheck {
    z: usize,
    m_prime: usize,
    n_prime: usize,
    replication: usize,
    coupling_width: usize,
    seed: u64,
    style: LiftingStyle,
    /// Column indices per row, sorted.
    row_cols: Vec<Vec<u32>>,
    /// Row indices per column, sorted.
    col_rows: Vec<Vec<u32>>,
}

impl ParityCheck {
    /// Lifts `cp` with lifting factor `z`; deterministic given `seed`.
    pub fn lift(cp: &CoupledProtograph, z: usize, seed: u64, style: LiftingStyle) -> Result<Self> {
        if z < 2 {
            return Err(Error::InvalidArgument(format!(
                "lifting factor Z = {z} must be at least 2"
            )));
        }
        let max_mult = cp
            .parts()
            .iter()
            .map(|p| p.max_multiplicity())
            .max()
            .unwrap() as usize;
        if z < max_mult {
            return Err(Error::LiftingFactorTooSmall { z, max_mult });
        }
        let num_rows = cp.num_rows() * z;
        let num_cols = cp.num_cols() * z;
        let mut row_cols = vec![Vec::new(); num_rows];
        let mut col_rows = vec![Vec::new(); num_cols];

        let mut rng = seed::stream_rng(seed, Stream::Lifting, 0);
        for block_row in 0..cp.num_rows() {
            for block_col in 0..cp.num_cols() {
                let mult = cp.entry(block_row, block_col) as usize;
                if mult == 0 {
                    continue;
                }
                let perms = match style {
                    LiftingStyle::RandomPermutation => disjoint_permutations(z, mult, &mut rng),
                    LiftingStyle::Circulant => {
                        let shifts = distinct_shifts(z, mult, &mut rng);
                        shifts
                            .into_iter()
                            .map(|s| (0..z).map(|a| (a + s) % z).collect())
                            .collect()
                    }
                };
                for perm in &perms {
                    for (a, &b) in perm.iter().enumerate() {
                        let r = block_row * z + a;
                        let c = block_col * z + b;
                        row_cols[r].push(c as u32);
                        col_rows[c].push(r as u32);
                    }
                }
            }
        }
        for r in &mut row_cols {
            r.sort_unstable();
        }
        for c in &mut col_rows {
            c.sort_unstable();
        }
        Ok(Self {
            z,
            m_prime: cp.check_types(),
            n_prime: cp.variable_types(),
            replication: cp.replication(),
            coupling_width: cp.coupling_width(),
            seed,
            style,
            row_cols,
            col_rows,
        })
    }

    /// Binary image of `cp` with identity permutations (`Z = 1` semantics).
    ///
    /// Only valid when all multiplicities are 0 or 1.
    pub fn binary_image(cp: &CoupledProtograph) -> Result<Self> {
        let max_mult = cp
            .parts()
            .iter()
            .map(|p| p.max_multiplicity())
            .max()
            .unwrap();
        if max_mult > 1 {
            return Err(Error::InvalidArgument(
                "binary image requires multiplicities <= 1".into(),
            ));
        }
        let num_rows = cp.num_rows();
        let num_cols = cp.num_cols();
        let mut row_cols = vec![Vec::new(); num_rows];
        let mut col_rows = vec![Vec::new(); num_cols];
        for r in 0..num_rows {
            for c in 0..num_cols {
                if cp.entry(r, c) == 1 {
                    row_cols[r].push(c as u32);
                    col_rows[c].push(r as u32);
                }
            }
        }
        Ok(Self {
            z: 1,
            m_prime: cp.check_types(),
            n_prime: cp.variable_types(),
            replication: cp.replication(),
            coupling_width: cp.coupling_width(),
            seed: 0,
            style: LiftingStyle::Circulant,
            row_cols,
            col_rows,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.row_cols.len()
    }

    pub fn num_cols(&self) -> usize {
        self.col_rows.len()
    }

    pub fn lifting_factor(&self) -> usize {
        self.z
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn style(&self) -> LiftingStyle {
        self.style
    }

    pub fn replication(&self) -> usize {
        self.replication
    }

    pub fn coupling_width(&self) -> usize {
        self.coupling_width
    }

    pub fn check_types(&self) -> usize {
        self.m_prime
    }

    pub fn variable_types(&self) -> usize {
        self.n_prime
    }

    /// Number of variable nodes per spatial position.
    pub fn vars_per_position(&self) -> usize {
        self.n_prime * self.z
    }

    /// Number of check nodes per spatial position.
    pub fn checks_per_position(&self) -> usize {
        self.m_prime * self.z
    }

    /// Spatial position of a variable node (column).
    pub fn variable_position(&self, col: usize) -> usize {
        col / self.vars_per_position()
    }

    /// Spatial position of a check node (row).
    pub fn check_position(&self, row: usize) -> usize {
        row / self.checks_per_position()
    }

    /// Number of variable spatial positions (`L`).
    pub fn num_variable_positions(&self) -> usize {
        self.replication
    }

    /// Number of check spatial positions (`L + W - 1`).
    pub fn num_check_positions(&self) -> usize {
        self.replication + self.coupling_width - 1
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.row_cols[r]
    }

    pub fn col(&self, c: usize) -> &[u32] {
        &self.col_rows[c]
    }

    pub fn num_edges(&self) -> usize {
        self.row_cols.iter().map(Vec::len).sum()
    }

    /// Syndrome of a codeword over GF(2); all-zero iff `c` is a codeword.
    pub fn syndrome(&self, codeword: &[u8]) -> Vec<u8> {
        assert_eq!(codeword.len(), self.num_cols());
        self.row_cols
            .iter()
            .map(|cols| cols.iter().fold(0u8, |s, &c| s ^ (codeword[c as usize] & 1)))
            .collect()
    }

    /// Counts length-4 cycles in the Tanner graph.
    pub fn count_four_cycles(&self) -> u64 {
        let mut pair_counts: HashMap<(u32, u32), u32> = HashMap::new();
        for rows in &self.col_rows {
            for (a, &r1) in rows.iter().enumerate() {
                for &r2 in &rows[a + 1..] {
                    *pair_counts.entry((r1, r2)).or_insert(0) += 1;
                }
            }
        }
        pair_counts
            .values()
            .map(|&c| (c as u64) * (c as u64 - 1) / 2)
            .sum()
    }

    /// Serializes the matrix in the standard alist text format.
    pub fn to_alist(&self) -> String {
        let n = self.num_cols();
        let m = self.num_rows();
        let max_col = self.col_rows.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.row_cols.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{n} {m}");
        let _ = writeln!(out, "{max_col} {max_row}");
        let col_w: Vec<String> = self.col_rows.iter().map(|c| c.len().to_string()).collect();
        let _ = writeln!(out, "{}", col_w.join(" "));
        let row_w: Vec<String> = self.row_cols.iter().map(|r| r.len().to_string()).collect();
        let _ = writeln!(out, "{}", row_w.join(" "));
        for c in &self.col_rows {
            let mut ids: Vec<String> = c.iter().map(|&r| (r + 1).to_string()).collect();
            ids.resize(max_col, "0".to_string());
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        for r in &self.row_cols {
            let mut ids: Vec<String> = r.iter().map(|&c| (c + 1).to_string()).collect();
            ids.resize(max_row, "0".to_string());
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        out
    }
}

/// Draws `count` pairwise disjoint `Z`-permutations (no parallel edges).
fn disjoint_permutations<R: Rng>(z: usize, count: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut perm: Vec<usize> = (0..z).collect();
        perm.shuffle(rng);
        // Repair collisions with earlier permutations by random swaps.
        loop {
            let conflicts: Vec<usize> = (0..z)
                .filter(|&a| perms.iter().any(|p| p[a] == perm[a]))
                .collect();
            if conflicts.is_empty() {
                break;
            }
            for &a in &conflicts {
                let b = rng.gen_range(0..z);
                perm.swap(a, b);
            }
        }
        perms.push(perm);
    }
    perms
}

fn distinct_shifts<R: Rng>(z: usize, count: usize, rng: &mut R) -> Vec<usize> {
    let mut shifts: Vec<usize> = (0..z).collect();
    shifts.shuffle(rng);
    shifts.truncate(count);
    shifts
}
