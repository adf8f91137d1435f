//! Protograph base matrices and their spatial coupling.
//!
//! A protograph is a small multigraph blueprint: entry `(j, i)` of the base
//! matrix counts the edges between check type `j` and variable type `i`. A
//! coupled chain is built by splitting the base matrix into `W` component
//! matrices and stacking them band-diagonally over `L` block columns
//! (terminated construction).

use std::fmt;

use crate::error::{Error, Result};

/// Base matrix of a protograph ensemble.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Protograph {
    entries: Vec<Vec<u32>>,
    rows: usize,
    cols: usize,
}

impl Protograph {
    /// Builds a protograph from an explicit matrix of edge multiplicities.
    pub fn new(entries: Vec<Vec<u32>>) -> Result<Self> {
        let rows = entries.len();
        if rows == 0 {
            return Err(Error::InvalidProtograph("empty matrix".into()));
        }
        let cols = entries[0].len();
        if cols == 0 {
            return Err(Error::InvalidProtograph("empty row".into()));
        }
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidProtograph("ragged rows".into()));
        }
        for j in 0..rows {
            if entries[j].iter().all(|&b| b == 0) {
                return Err(Error::InvalidProtograph(format!("all-zero row {j}")));
            }
        }
        for i in 0..cols {
            if (0..rows).all(|j| entries[j][i] == 0) {
                return Err(Error::InvalidProtograph(format!("all-zero column {i}")));
            }
        }
        Ok(Self { entries, rows, cols })
    }

    /// Smallest regular protograph with variable degree `d_v` and check degree `d_c`.
    ///
    /// The matrix has `d_v / g` rows and `d_c / g` columns with all entries
    /// equal to `g = gcd(d_v, d_c)`; every column sums to `d_v` and every row
    /// to `d_c`.
    pub fn regular(d_v: u32, d_c: u32) -> Result<Self> {
        if d_v == 0 || d_c == 0 {
            return Err(Error::InvalidArgument("degrees must be positive".into()));
        }
        if d_v >= d_c {
            return Err(Error::InvalidArgument(format!(
                "d_v = {d_v} must be smaller than d_c = {d_c} (rate would be non-positive)"
            )));
        }
        let g = gcd(d_v, d_c);
        let rows = (d_v / g) as usize;
        let cols = (d_c / g) as usize;
        Self::new(vec![vec![g; cols]; rows])
    }

    pub fn num_check_types(&self) -> usize {
        self.rows
    }

    pub fn num_variable_types(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, j: usize, i: usize) -> u32 {
        self.entries[j][i]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[u32]> {
        self.entries.iter().map(|r| r.as_slice())
    }

    /// Sum of the `i`-th column (degree of variable type `i`).
    pub fn column_sum(&self, i: usize) -> u32 {
        (0..self.rows).map(|j| self.entries[j][i]).sum()
    }

    /// Sum of the `j`-th row (degree of check type `j`).
    pub fn row_sum(&self, j: usize) -> u32 {
        self.entries[j].iter().sum()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.entries
            .iter()
            .flat_map(|r| r.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Design rate `1 - M'/N'` of the uncoupled ensemble.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.rows as f64 / self.cols as f64
    }

    /// Element-wise sum of a list of equally sized protograph matrices.
    pub fn sum(parts: &[Protograph]) -> Result<Protograph> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("no parts".into()))?;
        let (rows, cols) = (first.rows, first.cols);
        let mut entries = vec![vec![0u32; cols]; rows];
        for p in parts {
            if p.rows != rows || p.cols != cols {
                return Err(Error::DimensionMismatch(
                    "component matrices differ in size".into(),
                ));
            }
            for j in 0..rows {
                for i in 0..cols {
                    entries[j][i] += p.entries[j][i];
                }
            }
        }
        Protograph::new(entries)
    }

    /// Parses the plain-text matrix format: one row per line, whitespace
    /// separated non-negative integers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: std::result::Result<Vec<u32>, _> =
                line.split_whitespace().map(str::parse).collect();
            entries.push(row.map_err(|e| Error::InvalidProtograph(format!("bad entry: {e}")))?);
        }
        Self::new(entries)
    }
}

impl fmt::Display for Protograph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(|b| b.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Terminated spatially coupled protograph chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledProtograph {
    parts: Vec<Protograph>,
    replication: usize,
}

impl CoupledProtograph {
    /// Couples `W` component matrices `B_0 .. B_{W-1}` over `L` positions.
    ///
    /// The assembled matrix has `(L + W - 1) M'` rows and `L N'` columns with
    /// `B_w` placed at block row `p + w`, block column `p` for every position
    /// `p`.
    pub fn couple(parts: Vec<Protograph>, replication: usize) -> Result<Self> {
        let w = parts.len();
        if w == 0 {
            return Err(Error::InvalidArgument("no component matrices".into()));
        }
        let (rows, cols) = (parts[0].rows, parts[0].cols);
        if parts.iter().any(|p| p.rows != rows || p.cols != cols) {
            return Err(Error::DimensionMismatch(
                "component matrices differ in size".into(),
            ));
        }
        if replication < w {
            return Err(Error::ReplicationTooShort { l: replication, w });
        }
        Ok(Self { parts, replication })
    }

    pub fn parts(&self) -> &[Protograph] {
        &self.parts
    }

    pub fn coupling_width(&self) -> usize {
        self.parts.len()
    }

    pub fn replication(&self) -> usize {
        self.replication
    }

    /// `M'`: check types per spatial position.
    pub fn check_types(&self) -> usize {
        self.parts[0].rows
    }

    /// `N'`: variable types per spatial position.
    pub fn variable_types(&self) -> usize {
        self.parts[0].cols
    }

    pub fn num_rows(&self) -> usize {
        (self.replication + self.coupling_width() - 1) * self.check_types()
    }

    pub fn num_cols(&self) -> usize {
        self.replication * self.variable_types()
    }

    /// Entry of the assembled coupled matrix.
    pub fn entry(&self, row: usize, col: usize) -> u32 {
        let mp = self.check_types();
        let np = self.variable_types();
        let (rb, rj) = (row / mp, row % mp);
        let (cb, ci) = (col / np, col % np);
        // B_w sits at block row cb + w.
        if rb >= cb && rb - cb < self.coupling_width() {
            self.parts[rb - cb].entries[rj][ci]
        } else {
            0
        }
    }

    /// Assembled matrix as a dense integer grid.
    pub fn assembled(&self) -> Vec<Vec<u32>> {
        let (r, c) = (self.num_rows(), self.num_cols());
        (0..r)
            .map(|j| (0..c).map(|i| self.entry(j, i)).collect())
            .collect()
    }

    /// Design rate `1 - (L + W - 1) M' / (L N')` of the terminated chain.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.num_rows() as f64 / self.num_cols() as f64
    }

    /// Design rate in the limit `L -> infinity` (no termination loss).
    pub fn design_rate_unterminated(&self) -> f64 {
        1.0 - self.check_types() as f64 / self.variable_types() as f64
    }

    /// Degree of variable type `i` summed across all component matrices.
    pub fn variable_degree(&self, i: usize) -> u32 {
        self.parts.iter().map(|p| p.column_sum(i)).sum()
    }
}

/// Named code constructions used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeId {
    /// `(d_v=3, d_c=6, W=3)` chain with `B_0 = B_1 = B_2 = [1 1]`, rate 1/2.
    C1,
    /// `(d_v=3, d_c=4, W=2)` chain with explicit 3x4 component matrices, rate 1/4.
    C2,
}

impl CodeId {
    pub fn parts(self) -> Vec<Protograph> {
        match self {
            CodeId::C1 => vec![
                Protograph::new(vec![vec![1, 1]]).unwrap(),
                Protograph::new(vec![vec![1, 1]]).unwrap(),
                Protograph::new(vec![vec![1, 1]]).unwrap(),
            ],
            CodeId::C2 => vec![
                Protograph::new(vec![vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1]])
                    .unwrap(),
                Protograph::new(vec![vec![0, 0, 1, 1], vec![1, 0, 0, 1], vec![1, 1, 0, 0]])
                    .unwrap(),
            ],
        }
    }

    pub fn coupled(self, replication: usize) -> Result<CoupledProtograph> {
        CoupledProtograph::couple(self.parts(), replication)
    }
}

/// Component matrices for a regular `(d_v, d_c)` chain.
///
/// The base matrix is split edge by edge into `W = d_v` components of column
/// weight one: component `w` has a one at `(r, c)` iff `r = (w + c) mod m`
/// for the `m`-row base matrix, so every entry `g = gcd(d_v, d_c)` is spread
/// over `g` distinct components. Maximal smoothing matters for the
/// high-degree chains, whose thresholds do not saturate under narrower
/// splits. The `(3, 4)` chain uses the explicit `C2` split instead.
pub fn regular_coupled_parts(d_v: u32, d_c: u32) -> Result<Vec<Protograph>> {
    if (d_v, d_c) == (3, 4) {
        return Ok(CodeId::C2.parts());
    }
    let base = Protograph::regular(d_v, d_c)?;
    let m = base.rows;
    (0..d_v as usize)
        .map(|w| {
            let entries = (0..m)
                .map(|r| {
                    (0..base.cols)
                        .map(|c| u32::from((w + c) % m == r))
                        .collect()
                })
                .collect();
            Protograph::new(entries)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_3_6_is_1x2_of_threes() {
        let p = Protograph::regular(3, 6).unwrap();
        assert_eq!(p.num_check_types(), 1);
        assert_eq!(p.num_variable_types(), 2);
        assert_eq!(p.entry(0, 0), 3);
        assert_eq!(p.entry(0, 1), 3);
    }

    #[test]
    fn regular_2_4_is_1x2_of_twos() {
        let p = Protograph::regular(2, 4).unwrap();
        assert_eq!(p.entries, vec![vec![2, 2]]);
    }

    #[test]
    fn regular_rejects_nonpositive_rate() {
        assert!(Protograph::regular(6, 6).is_err());
        assert!(Protograph::regular(4, 3).is_err());
    }

    #[test]
    fn c1_split_matches_three_ones() {
        let parts = CodeId::C1.parts();
        assert_eq!(parts.len(), 3);
        for p in &parts {
            assert_eq!(p.entries, vec![vec![1, 1]]);
        }
        let sum = Protograph::sum(&parts).unwrap();
        assert_eq!(sum.entries, Protograph::regular(3, 6).unwrap().entries);
    }

    #[test]
    fn c2_parts_sum_to_all_ones() {
        let parts = CodeId::C2.parts();
        let sum = Protograph::sum(&parts).unwrap();
        assert_eq!(sum.entries, vec![vec![1u32; 4]; 3]);
        for i in 0..4 {
            assert_eq!(sum.column_sum(i), 3);
        }
        let cp = CodeId::C2.coupled(10).unwrap();
        assert_eq!(cp.variable_degree(0), 3);
    }

    #[test]
    fn regular_parts_have_unit_columns_and_sum_to_base() {
        for &(d_v, d_c) in &[(3u32, 6u32), (4, 8), (5, 10), (6, 12), (6, 8), (9, 12)] {
            let parts = regular_coupled_parts(d_v, d_c).unwrap();
            assert_eq!(parts.len(), d_v as usize);
            for p in &parts {
                for c in 0..p.num_variable_types() {
                    assert_eq!(p.column_sum(c), 1, "({d_v},{d_c}) part column {c}");
                }
            }
            let sum = Protograph::sum(&parts).unwrap();
            assert_eq!(sum.entries, Protograph::regular(d_v, d_c).unwrap().entries);
        }
    }

    #[test]
    fn couple_c1_design_rates() {
        let cp = CodeId::C1.coupled(50).unwrap();
        assert_eq!(cp.num_rows(), 52);
        assert_eq!(cp.num_cols(), 100);
        assert!((cp.design_rate() - 0.48).abs() < 1e-12);
        assert!((cp.design_rate_unterminated() - 0.5).abs() < 1e-12);
        let c2 = CodeId::C2.coupled(50).unwrap();
        assert!((c2.design_rate_unterminated() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn couple_rejects_short_chain() {
        assert!(matches!(
            CodeId::C1.coupled(2),
            Err(Error::ReplicationTooShort { .. })
        ));
    }

    #[test]
    fn couple_rejects_mismatched_parts() {
        let parts = vec![
            Protograph::new(vec![vec![1, 1]]).unwrap(),
            Protograph::new(vec![vec![1, 1, 1]]).unwrap(),
        ];
        assert!(CoupledProtograph::couple(parts, 5).is_err());
    }

    #[test]
    fn assembled_is_band_diagonal() {
        let cp = CodeId::C1.coupled(5).unwrap();
        let m = cp.assembled();
        assert_eq!(m.len(), 7);
        assert_eq!(m[0].len(), 10);
        for (row, r) in m.iter().enumerate() {
            for (col, &v) in r.iter().enumerate() {
                let (rb, cb) = (row, col / 2);
                let expect = if rb >= cb && rb - cb < 3 { 1 } else { 0 };
                assert_eq!(v, expect, "row {row} col {col}");
            }
        }
    }

    #[test]
    fn design_rate_monotone_in_replication() {
        let w = 3;
        let rates: Vec<f64> = [w, 2 * w, 10 * w]
            .iter()
            .map(|&l| CodeId::C1.coupled(l).unwrap().design_rate())
            .collect();
        assert!(rates[0] < rates[1] && rates[1] < rates[2]);
        assert!(rates[2] < 0.5);
    }

    #[test]
    fn parse_display_round_trip() {
        let p = Protograph::regular(3, 4).unwrap();
        let q = Protograph::parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_all_zero_row_and_column() {
        assert!(Protograph::new(vec![vec![0, 0], vec![1, 1]]).is_err());
        assert!(Protograph::new(vec![vec![1, 0], vec![1, 0]]).is_err());
    }
}
