use std::fmt;

use super::bitvec::{dot_words, words_for, BitVector, WORD_BITS};
use crate::error::{check_dim, Error, Result};

/// Dense row-major matrix over GF(2) with word-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from nested 0/1 rows. Ragged input is rejected; an empty row list
    /// needs `cols` to fix the width.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R], cols: Option<usize>) -> Result<Self> {
        let width = match (rows.first(), cols) {
            (Some(r), _) => r.as_ref().len(),
            (None, Some(c)) => c,
            (None, None) => 0,
        };
        let mut m = Self::zeros(rows.len(), width);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != width {
                return Err(Error::InvalidCode(format!(
                    "ragged rows: row {} has {} entries, expected {width}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => {
                        return Err(Error::InvalidCode(format!("entry ({}, {}) is {other}", i + 1, j + 1)));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_vectors(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            check_dim("matrix row length", cols, r.len())?;
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Parse whitespace/newline separated bitstrings, one row per line.
    pub fn parse_rows(text: &str) -> Result<Self> {
        let rows: Vec<BitVector> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, BitVector::len);
        Self::from_vectors(cols, &rows)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let bit = 1u64 << (c % WORD_BITS);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        assert!(r < self.rows);
        BitVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_iter(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.rows).map(|r| self.row(r))
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bools((0..self.rows).map(|r| self.get(r, c)))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// row[dst] ^= row[src]
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        for w in 0..self.stride {
            let v = self.data[src * self.stride + w];
            self.data[dst * self.stride + w] ^= v;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// `v · Mᵀ`: the inner product of `v` with every row.
    pub fn mul_transpose(&self, v: &BitVector) -> Result<BitVector> {
        check_dim("vector length vs matrix columns", self.cols, v.len())?;
        Ok(BitVector::from_bools(
            (0..self.rows).map(|r| dot_words(self.row_words(r), v.words())),
        ))
    }

    /// `u · M`: the sum of the rows selected by `u`.
    pub fn left_mul(&self, u: &BitVector) -> Result<BitVector> {
        check_dim("vector length vs matrix rows", self.rows, u.len())?;
        let mut words = vec![0u64; self.stride];
        for r in 0..self.rows {
            if u.get(r) {
                for (acc, w) in words.iter_mut().zip(self.row_words(r)) {
                    *acc ^= w;
                }
            }
        }
        Ok(BitVector::from_words(self.cols, words))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim("inner matrix dimension", self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = other.left_mul(&self.row(r))?;
            out.row_words_mut(r).copy_from_slice(row.words());
        }
        Ok(out)
    }

    /// `M · Λ`: exchange the left and right column halves.
    pub fn swap_halves(&self) -> Result<Self> {
        if !self.cols.is_multiple_of(2) {
            return Err(Error::OddLength(self.cols));
        }
        let rows: Vec<BitVector> = self.row_iter().map(|r| r.swap_halves()).collect::<Result<_>>()?;
        Self::from_vectors(self.cols, &rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        check_dim("column count in vstack", self.cols, other.cols)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Sub-matrix made of the given rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let vs: Vec<BitVector> = rows.iter().map(|&r| self.row(r)).collect();
        Self::from_vectors(self.cols, &vs).expect("rows share the width")
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Reduced row echelon form; pivots are taken left to right, each from the
    /// first remaining row with a one in that column.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, next);
            for r in 0..m.rows {
                if r != next && m.get(r, c) {
                    m.add_row(next, r);
                }
            }
            pivots.push(c);
            next += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{v : v · Mᵀ = 0}`, one vector per free column in increasing order.
    pub fn nullspace(&self) -> Self {
        let Echelon { matrix, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::unit(self.cols, f);
            for (i, &p) in pivots.iter().enumerate() {
                if matrix.get(i, f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        Self::from_vectors(self.cols, &basis).expect("basis vectors share the width")
    }

    /// Some `x` with `x · Mᵀ = b`, pivot variables solved and free variables 0.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        // Eliminate on [M | b] so the right-hand side follows the row operations.
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, self.cols, b.get(r));
        }
        let Echelon { matrix, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x.set(p, matrix.get(i, self.cols));
        }
        Some(x)
    }

    /// Whether `v` is a GF(2) combination of the rows.
    pub fn in_rowspace(&self, v: &BitVector) -> Result<bool> {
        check_dim("vector length vs matrix columns", self.cols, v.len())?;
        let Echelon { matrix, pivots } = self.echelon();
        let mut residual = v.clone();
        for (i, &p) in pivots.iter().enumerate() {
            if residual.get(p) {
                residual ^= &matrix.row(i);
            }
        }
        Ok(residual.is_zero())
    }

    /// Whether both matrices have the same row space.
    pub fn same_rowspace(&self, other: &Self) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let a = self.echelon();
        let b = other.echelon();
        a.pivots == b.pivots
            && (0..a.pivots.len()).all(|i| a.matrix.row(i) == b.matrix.row(i))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hamming() -> BitMatrix {
        BitMatrix::parse_rows("1101100\n1011010\n0111001").unwrap()
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = BitMatrix::from_rows(&[vec![1u8, 0], vec![1]], None).unwrap_err();
        assert!(matches!(err, Error::InvalidCode(_)));
    }

    #[test]
    fn rank_and_nullspace_of_hamming_checks() {
        let h = hamming();
        assert_eq!(h.rank(), 3);
        let g = h.nullspace();
        assert_eq!((g.rows(), g.cols()), (4, 7));
        assert!(g.mul(&h.transpose()).unwrap().is_zero());
        assert_eq!(g.rank(), 4);
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let n = BitMatrix::identity(5).nullspace();
        assert_eq!((n.rows(), n.cols()), (0, 5));
    }

    #[test]
    fn solve_reports_inconsistency() {
        let m = BitMatrix::parse_rows("11\n11").unwrap();
        assert!(m.solve(&"10".parse().unwrap()).is_none());
        let x = m.solve(&"11".parse().unwrap()).unwrap();
        assert_eq!(x.to_string(), "10");
    }

    #[test]
    fn rowspace_membership() {
        let h = hamming();
        assert!(h.in_rowspace(&BitVector::zeros(7)).unwrap());
        for r in h.row_iter() {
            assert!(h.in_rowspace(&r).unwrap());
        }
        assert!(h.in_rowspace(&(&h.row(0) ^ &h.row(2))).unwrap());
        // a vector with nonzero syndrome against the dual basis lies outside
        let g = h.nullspace();
        let v: BitVector = "1000000".parse().unwrap();
        assert!(!g.mul_transpose(&v).unwrap().is_zero());
        assert!(!h.in_rowspace(&v).unwrap());
        assert!(h.in_rowspace(&BitVector::zeros(6)).is_err());
    }

    #[test]
    fn mul_transpose_matches_column_reading() {
        let h = hamming();
        let e: BitVector = "1000000".parse().unwrap();
        assert_eq!(h.mul_transpose(&e).unwrap().to_string(), "110");
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..8, 1usize..80).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
                .prop_map(|rows| BitMatrix::from_rows(&rows, None).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let n = m.nullspace();
            prop_assert_eq!(m.rank() + n.rows(), m.cols());
            if n.rows() > 0 {
                prop_assert!(n.mul(&m.transpose()).unwrap().is_zero());
            }
        }

        #[test]
        fn solve_round_trips(m in arb_matrix(), seed in any::<u64>()) {
            let x0 = BitVector::from_bools((0..m.cols()).map(|i| (seed.rotate_left(i as u32) & 1) == 1));
            let b = m.mul_transpose(&x0).unwrap();
            let x = m.solve(&b).unwrap();
            prop_assert_eq!(m.mul_transpose(&x).unwrap(), b);
        }
    }
}
