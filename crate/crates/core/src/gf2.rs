//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors pack 64 bits per word, least significant bit first. Matrices are
//! stored row-major as a list of [`BitVector`] rows so that row addition is a
//! word-parallel XOR. Every public operation is pure: reductions work on
//! private copies of their input.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2).
///
/// Bits beyond `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "HexRepr", try_from = "HexRepr")]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones exactly at `support`.
    ///
    /// Panics if an index is out of range.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place addition over GF(2). Lengths must agree.
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of the set bits in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Bits read left to right, grouped in nibbles (most significant bit of
    /// each hex digit first), zero-padded at the end.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        (0..digits)
            .map(|d| {
                let mut nibble = 0u32;
                for k in 0..4 {
                    let i = 4 * d + k;
                    if i < self.len && self.get(i) {
                        nibble |= 8 >> k;
                    }
                }
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        if hex.len() != len.div_ceil(4) {
            return Err(Error::Parse(format!(
                "hex string of {} digits cannot encode {len} bits",
                hex.len()
            )));
        }
        let mut v = Self::zeros(len);
        for (d, c) in hex.chars().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?;
            for k in 0..4 {
                if nibble & (8 >> k) != 0 {
                    let i = 4 * d + k;
                    if i >= len {
                        return Err(Error::Parse("nonzero padding bits in hex string".into()));
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

#[derive(Serialize, Deserialize)]
struct HexRepr {
    len: usize,
    hex: String,
}

impl From<BitVector> for HexRepr {
    fn from(v: BitVector) -> Self {
        HexRepr {
            len: v.len,
            hex: v.to_hex(),
        }
    }
}

impl TryFrom<HexRepr> for BitVector {
    type Error = Error;

    fn try_from(r: HexRepr) -> Result<Self> {
        BitVector::from_hex(r.len, &r.hex)
    }
}

/// A row-major binary matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {i} has length {}, expected {cols}",
                r.len()
            )));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Parses whitespace-separated rows of `0`/`1` characters, e.g. `"110 011"`.
    pub fn parse_rows(text: &str) -> Result<Self> {
        let rows = text
            .split_whitespace()
            .map(BitVector::from_str)
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, BitVector::len);
        Self::from_rows(cols, rows)
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
    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.data[r].set(c, bit)
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c)
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    /// All columns as vectors of length `rows`.
    pub fn columns(&self) -> Vec<BitVector> {
        self.transpose().data
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.data.iter().map(BitVector::weight).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.data {
            for c in row.iter_ones() {
                w[c] += 1;
            }
        }
        w
    }

    /// `M · x^T`, a vector of length `rows`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against matrix with {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut y = BitVector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                y.set(r, true);
            }
        }
        Ok(y)
    }

    /// Columns at `indices`, which must be distinct and in range. The result
    /// keeps ascending column order regardless of the order given.
    pub fn column_submatrix(&self, indices: &[usize]) -> Result<BitMatrix> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Index(format!("duplicate column index {}", w[0])));
        }
        if let Some(&bad) = sorted.last().filter(|&&c| c >= self.cols) {
            return Err(Error::Index(format!(
                "column index {bad} out of range for {} columns",
                self.cols
            )));
        }
        Ok(self.select_columns(&sorted))
    }

    /// Unchecked column selection in the given order.
    pub(crate) fn select_columns(&self, indices: &[usize]) -> BitMatrix {
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut out = BitVector::zeros(indices.len());
                for (k, &c) in indices.iter().enumerate() {
                    if row.get(c) {
                        out.set(k, true);
                    }
                }
                out
            })
            .collect();
        BitMatrix {
            rows: self.rows,
            cols: indices.len(),
            data,
        }
    }

    pub fn rank(&self) -> usize {
        RowEchelon::new(self).rank()
    }

    /// `cols − rank`, the dimension of the right nullspace.
    pub fn corank(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of `{x : M·x^T = 0}`, one vector per free column in ascending order.
    pub fn nullspace_basis(&self) -> Vec<BitVector> {
        RowEchelon::new(self).nullspace_basis()
    }

    /// Solves `M·x^T = y`. Returns `None` when the system is inconsistent.
    pub fn solve_affine(&self, y: &BitVector) -> Result<Option<AffineSolution>> {
        if y.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for matrix with {} rows",
                y.len(),
                self.rows
            )));
        }
        let ech = RowEchelon::with_rhs(self, y);
        Ok(ech.particular_solution().map(|particular| AffineSolution {
            particular,
            homogeneous_basis: ech.nullspace_basis(),
        }))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.data.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        write!(f, "{self}")
    }
}

/// Solution set `particular + span(homogeneous_basis)` of an affine system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: BitVector,
    pub homogeneous_basis: Vec<BitVector>,
}

/// Reduced row echelon form of a matrix, optionally carrying a right-hand side.
///
/// Pivots are chosen at the leftmost column that still has a nonzero entry,
/// from the topmost available row. Pivot search can be limited to a prefix of
/// the columns, which lets callers reduce an augmented matrix `[A | B]` and
/// read `T·B` off the trailing columns, where `T` is the accumulated row
/// transform.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    cols: usize,
    pivot_limit: usize,
    reduced: Vec<BitVector>,
    pivots: Vec<usize>,
    rhs: Option<BitVector>,
    row_xors: u64,
}

impl RowEchelon {
    pub fn new(m: &BitMatrix) -> Self {
        Self::reduce(m.data.clone(), m.cols, m.cols, None)
    }

    pub fn with_rhs(m: &BitMatrix, y: &BitVector) -> Self {
        Self::reduce(m.data.clone(), m.cols, m.cols, Some(y.clone()))
    }

    /// Reduces with pivots restricted to columns `< pivot_limit`.
    pub fn with_pivot_limit(m: &BitMatrix, pivot_limit: usize) -> Self {
        assert!(pivot_limit <= m.cols);
        Self::reduce(m.data.clone(), m.cols, pivot_limit, None)
    }

    fn reduce(
        mut rows: Vec<BitVector>,
        cols: usize,
        pivot_limit: usize,
        mut rhs: Option<BitVector>,
    ) -> Self {
        let mut pivots = Vec::new();
        let mut row_xors = 0u64;
        let nrows = rows.len();
        for c in 0..pivot_limit {
            let rank = pivots.len();
            if rank == nrows {
                break;
            }
            let Some(p) = (rank..nrows).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            if let Some(y) = rhs.as_mut() {
                let (a, b) = (y.get(rank), y.get(p));
                y.set(rank, b);
                y.set(p, a);
            }
            let (head, tail) = rows.split_at_mut(rank);
            let (pivot_row, tail) = tail.split_first_mut().unwrap();
            let y_pivot = rhs.as_ref().is_some_and(|y| y.get(rank));
            for (i, row) in head
                .iter_mut()
                .enumerate()
                .chain(tail.iter_mut().enumerate().map(|(k, r)| (rank + 1 + k, r)))
            {
                if row.get(c) {
                    row.xor_assign(pivot_row);
                    row_xors += 1;
                    if y_pivot {
                        rhs.as_mut().unwrap().flip(i);
                    }
                }
            }
            pivots.push(c);
        }
        Self {
            cols,
            pivot_limit,
            reduced: rows,
            pivots,
            rhs,
            row_xors,
        }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Pivot column of each of the first `rank` rows.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduced_rows(&self) -> &[BitVector] {
        &self.reduced
    }

    /// Number of row additions performed during reduction.
    pub fn row_xors(&self) -> u64 {
        self.row_xors
    }

    /// Nullspace basis of the pivot-eligible column block.
    pub fn nullspace_basis(&self) -> Vec<BitVector> {
        let width = self.pivot_limit;
        let mut is_pivot = vec![false; width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..width)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = BitVector::zeros(width);
                x.set(free, true);
                for (row, &pc) in self.reduced.iter().zip(&self.pivots) {
                    if row.get(free) {
                        x.set(pc, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Particular solution for the carried right-hand side (free variables
    /// set to zero), or `None` if the system is inconsistent.
    pub fn particular_solution(&self) -> Option<BitVector> {
        let y = self.rhs.as_ref()?;
        self.solution_for_reduced_rhs(y)
    }

    /// Particular solution given a right-hand side that has already been
    /// multiplied by the row transform of this reduction.
    pub fn solution_for_reduced_rhs(&self, y: &BitVector) -> Option<BitVector> {
        let rank = self.rank();
        if (rank..y.len()).any(|i| y.get(i)) {
            return None;
        }
        let mut x = BitVector::zeros(self.pivot_limit);
        for (i, &pc) in self.pivots.iter().enumerate() {
            if y.get(i) {
                x.set(pc, true);
            }
        }
        Some(x)
    }

    /// Columns `pivot_limit..cols` of the reduced matrix, i.e. the row
    /// transform applied to the trailing block.
    pub fn trailing_columns(&self) -> Vec<BitVector> {
        (self.pivot_limit..self.cols)
            .map(|c| {
                let mut v = BitVector::zeros(self.reduced.len());
                for (r, row) in self.reduced.iter().enumerate() {
                    if row.get(c) {
                        v.set(r, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// Visits every nonzero element of `span(basis)` in Gray-code order, one
/// vector addition per step. The visitor returns `false` to stop early.
/// Returns the number of vectors visited.
pub fn for_each_span_element<F>(basis: &[BitVector], start: BitVector, mut visit: F) -> u64
where
    F: FnMut(&BitVector) -> bool,
{
    assert!(basis.len() < 64, "span of dimension {} is not enumerable", basis.len());
    let mut current = start;
    let total = 1u64 << basis.len();
    for step in 1..total {
        current.xor_assign(&basis[step.trailing_zeros() as usize]);
        if !visit(&current) {
            return step;
        }
    }
    total - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rng.gen());
            }
        }
        m
    }

    /// Plain Gaussian elimination on a `Vec<Vec<u8>>` with arithmetic mod 2.
    fn oracle_rank(m: &BitMatrix) -> usize {
        let mut a: Vec<Vec<u8>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u8).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            if let Some(p) = (rank..a.len()).find(|&r| a[r][c] % 2 == 1) {
                a.swap(rank, p);
                for r in 0..a.len() {
                    if r != rank && a[r][c] % 2 == 1 {
                        for k in 0..m.cols() {
                            a[r][k] = (a[r][k] + a[rank][k]) % 2;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn hamming_7_4() -> BitMatrix {
        BitMatrix::parse_rows("1010101 0110011 0001111").unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(BitVector::zeros(8).weight(), 0);
        assert_eq!(BitVector::ones(7).weight(), 7);
        assert_eq!("10110".parse::<BitVector>().unwrap().weight(), 3);
    }

    #[test]
    fn ones_clears_tail_bits() {
        let v = BitVector::ones(70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::parse_rows("1011 1011").unwrap().rank(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 6, 12);
            assert_eq!(m.rank(), oracle_rank(&m));
        }
    }

    #[test]
    fn rank_leaves_input_untouched() {
        let m = BitMatrix::parse_rows("110 011 101").unwrap();
        let before = m.clone();
        assert_eq!(m.rank(), 2);
        assert_eq!(m, before);
    }

    #[test]
    fn column_submatrix_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 5, 9);
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(m.column_submatrix(&all).unwrap(), m);

        let mid = BitMatrix::identity(3).column_submatrix(&[1]).unwrap();
        assert_eq!(mid, BitMatrix::parse_rows("0 1 0").unwrap());

        for _ in 0..30 {
            let h = random_matrix(&mut rng, 6, 12);
            let j: Vec<usize> = (0..12).filter(|_| rng.gen_bool(0.5)).collect();
            let hj = h.column_submatrix(&j).unwrap();
            assert_eq!(hj.rank(), oracle_rank(&hj));
        }
    }

    #[test]
    fn column_submatrix_sorts_and_rejects_bad_indices() {
        let m = BitMatrix::parse_rows("100 010 001").unwrap();
        assert_eq!(
            m.column_submatrix(&[2, 0]).unwrap(),
            m.column_submatrix(&[0, 2]).unwrap()
        );
        assert!(matches!(m.column_submatrix(&[0, 3]), Err(Error::Index(_))));
        assert!(matches!(m.column_submatrix(&[1, 1]), Err(Error::Index(_))));
    }

    #[test]
    fn corank_examples() {
        assert_eq!(BitMatrix::identity(4).corank(), 0);
        assert_eq!(BitMatrix::zeros(3, 5).corank(), 5);
    }

    #[test]
    fn nullspace_examples() {
        assert!(BitMatrix::identity(4).nullspace_basis().is_empty());
        let rep = BitMatrix::parse_rows("11").unwrap();
        assert_eq!(rep.nullspace_basis(), vec!["11".parse().unwrap()]);

        let h = hamming_7_4();
        let basis = h.nullspace_basis();
        assert_eq!(basis.len(), 4);
        for x in &basis {
            assert!(h.mul_vec(x).unwrap().is_zero());
        }
        assert_eq!(BitMatrix::from_rows(7, basis).unwrap().rank(), 4);
    }

    #[test]
    fn solve_affine_examples() {
        let y: BitVector = "101".parse().unwrap();
        let sol = BitMatrix::identity(3).solve_affine(&y).unwrap().unwrap();
        assert_eq!(sol.particular, y);
        assert!(sol.homogeneous_basis.is_empty());

        let rep = BitMatrix::parse_rows("11").unwrap();
        let sol = rep.solve_affine(&"1".parse().unwrap()).unwrap().unwrap();
        assert!(sol.particular.to_string() == "10" || sol.particular.to_string() == "01");
        assert_eq!(sol.homogeneous_basis, vec!["11".parse().unwrap()]);

        let m = BitMatrix::parse_rows("110 011 101").unwrap();
        assert!(m.solve_affine(&"001".parse().unwrap()).unwrap().is_none());

        assert!(matches!(
            m.solve_affine(&"01".parse().unwrap()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn hex_round_trip() {
        let v: BitVector = "10110".parse().unwrap();
        assert_eq!(v.to_hex(), "b0");
        assert_eq!(BitVector::from_hex(5, "b0").unwrap(), v);
        assert_eq!(BitVector::from_hex(5, "b8").unwrap().to_string(), "10111");
        assert!(BitVector::from_hex(5, "b4").is_err());
    }

    #[test]
    fn gray_enumeration_visits_whole_span() {
        let basis: Vec<BitVector> = ["1100", "0110", "0011"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let mut seen = Vec::new();
        let visited = for_each_span_element(&basis, BitVector::zeros(4), |v| {
            seen.push(v.clone());
            true
        });
        assert_eq!(visited, 7);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 7);
        assert!(seen.iter().all(|v| !v.is_zero()));
    }

    #[test]
    fn pivot_limited_reduction_exposes_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 6, 5);
        let b = random_matrix(&mut rng, 6, 4);
        let rows = (0..6)
            .map(|r| {
                let bits: Vec<bool> = (0..5)
                    .map(|c| a.get(r, c))
                    .chain((0..4).map(|c| b.get(r, c)))
                    .collect();
                BitVector::from_bools(&bits)
            })
            .collect();
        let aug = BitMatrix::from_rows(9, rows).unwrap();
        let ech = RowEchelon::with_pivot_limit(&aug, 5);
        assert_eq!(ech.rank(), a.rank());
        // A·x = b_col is solvable iff the reduced column vanishes below the rank.
        for (c, col) in ech.trailing_columns().iter().enumerate() {
            let direct = a.solve_affine(&b.column(c)).unwrap();
            let via = ech.solution_for_reduced_rhs(col);
            assert_eq!(direct.is_some(), via.is_some());
            if let Some(x) = via {
                assert_eq!(a.mul_vec(&x).unwrap(), b.column(c));
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..10, 1usize..80).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::bool::ANY, r * c).prop_map(move |bits| {
                let rows = bits.chunks(c).map(BitVector::from_bools).collect();
                BitMatrix::from_rows(c, rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.rank() + m.nullspace_basis().len(), m.cols());
            prop_assert!(m.rank() <= m.rows().min(m.cols()));
        }

        #[test]
        fn solutions_satisfy_system(m in arb_matrix(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y = BitVector::from_bools(&(0..m.rows()).map(|_| rng.gen()).collect::<Vec<_>>());
            if let Some(sol) = m.solve_affine(&y).unwrap() {
                prop_assert_eq!(m.mul_vec(&sol.particular).unwrap(), y.clone());
                for z in &sol.homogeneous_basis {
                    prop_assert!(m.mul_vec(z).unwrap().is_zero());
                    let shifted = sol.particular.xor(z);
                    prop_assert_eq!(m.mul_vec(&shifted).unwrap(), y.clone());
                }
            }
        }

        #[test]
        fn rank_invariant_under_row_operations(m in arb_matrix(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = m.row_vectors().to_vec();
            for _ in 0..10 {
                let i = rng.gen_range(0..rows.len());
                let j = rng.gen_range(0..rows.len());
                if i != j {
                    if rng.gen() {
                        rows.swap(i, j);
                    } else {
                        let src = rows[j].clone();
                        rows[i].xor_assign(&src);
                    }
                }
            }
            let moved = BitMatrix::from_rows(m.cols(), rows).unwrap();
            prop_assert_eq!(moved.rank(), m.rank());
        }

        #[test]
        fn weight_subadditive(a in proptest::collection::vec(any::<bool>(), 1..200), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b: Vec<bool> = (0..a.len()).map(|_| rng.gen()).collect();
            let (va, vb) = (BitVector::from_bools(&a), BitVector::from_bools(&b));
            prop_assert!(va.xor(&vb).weight() <= va.weight() + vb.weight());
        }

        #[test]
        fn serde_hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..150)) {
            let v = BitVector::from_bools(&bits);
            let back = BitVector::from_hex(v.len(), &v.to_hex()).unwrap();
            prop_assert_eq!(back, v);
        }
    }
}
