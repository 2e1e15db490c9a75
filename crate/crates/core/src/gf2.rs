//! Dense bit-matrix arithmetic over GF(2).
//!
//! The deterministic channel model treats a transmit signal as a binary
//! column vector with one entry per power-of-two signal level, so the
//! matrices involved never grow beyond a few dozen rows and columns. Rows
//! are packed into single `u64` words (column `j` lives at bit `j`), which
//! keeps rank computation and multiplication branch-free and exact.

use std::fmt;

/// A rows x cols matrix over GF(2) with at most 64 columns.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: Vec<u64>,
    cols: usize,
}

impl BinaryMatrix {
    /// Widest supported matrix; one machine word per row.
    pub const MAX_COLS: usize = 64;

    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= Self::MAX_COLS, "BinaryMatrix supports at most 64 columns");
        BinaryMatrix { rows: vec![0; rows], cols }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        assert!(n <= Self::MAX_COLS, "BinaryMatrix supports at most 64 columns");
        BinaryMatrix {
            rows: (0..n).map(|i| 1u64 << i).collect(),
            cols: n,
        }
    }

    /// Builds a matrix from packed row words (column `j` at bit `j`).
    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Self {
        assert!(cols <= Self::MAX_COLS, "BinaryMatrix supports at most 64 columns");
        let mask = if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 };
        debug_assert!(rows.iter().all(|r| r & !mask == 0), "row bits beyond column count");
        BinaryMatrix { rows, cols }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows.len() && c < self.cols);
        (self.rows[r] >> c) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows.len() && c < self.cols);
        if value {
            self.rows[r] |= 1u64 << c;
        } else {
            self.rows[r] &= !(1u64 << c);
        }
    }

    /// Side-by-side concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.rows.len(), rhs.rows.len(), "hstack needs equal row counts");
        assert!(self.cols + rhs.cols <= Self::MAX_COLS);
        let rows = self
            .rows
            .iter()
            .zip(&rhs.rows)
            .map(|(&a, &b)| a | (b << self.cols))
            .collect();
        BinaryMatrix { rows, cols: self.cols + rhs.cols }
    }

    /// Stacks `below` underneath `self`.
    pub fn vstack(&self, below: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, below.cols, "vstack needs equal column counts");
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&below.rows);
        BinaryMatrix { rows, cols: self.cols }
    }

    /// Matrix product over GF(2); `self` is rows x k, `rhs` is k x cols.
    pub fn mul(&self, rhs: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, rhs.rows.len(), "inner dimensions must agree");
        let rows = self
            .rows
            .iter()
            .map(|&lhs_row| {
                let mut acc = 0u64;
                let mut bits = lhs_row;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= rhs.rows[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        BinaryMatrix { rows, cols: rhs.cols }
    }

    /// Rank over GF(2) by incremental row reduction against a word basis.
    pub fn rank(&self) -> usize {
        let mut basis = [0u64; 64];
        let mut rank = 0;
        for &row in &self.rows {
            let mut v = row;
            while v != 0 {
                let lead = 63 - v.leading_zeros() as usize;
                if basis[lead] == 0 {
                    basis[lead] = v;
                    rank += 1;
                    break;
                }
                v ^= basis[lead];
            }
        }
        rank
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows.len(), self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows.len() {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The `q x q` down-shift matrix raised to the power `s`: multiplying a
/// column vector by it moves every entry `s` positions toward the bottom
/// and feeds zeros in at the top.
pub fn down_shift(q: usize, s: usize) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(q, q);
    for i in s..q {
        m.set(i, i - s, true);
    }
    m
}
