/*!
Dense linear algebra over the Boolean semiring `{0,1}` with OR as addition
and AND as multiplication.

Vectors and matrices are packed bitsets. A matrix with `c` columns is the
matrix of a map `B^c -> B^r`, so `m.apply(v)` and `a.mul(b)` follow the
usual column convention.
*/

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::budget::DEFAULT_MAX_ENTRIES;
use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector in `B^dim`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolVec {
    dim: usize,
    words: Vec<u64>,
}

impl BoolVec {
    pub fn zeros(dim: usize) -> Self {
        BoolVec {
            dim,
            words: vec![0; words_for(dim)],
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.set(i, true);
        v
    }

    pub fn ones(dim: usize) -> Self {
        let mut v = Self::zeros(dim);
        for i in 0..dim {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// The vector whose entry `i` is bit `i` of `mask`. Requires `dim <= 64`.
    pub fn from_mask(dim: usize, mask: u64) -> Self {
        assert!(dim <= WORD, "from_mask supports at most 64 entries");
        let mut v = Self::zeros(dim);
        if dim > 0 {
            let keep = if dim == WORD { u64::MAX } else { (1u64 << dim) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    /// Inverse of [`BoolVec::from_mask`].
    pub fn to_mask(&self) -> u64 {
        assert!(self.dim <= WORD, "to_mask supports at most 64 entries");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim, "index {i} out of range for dim {}", self.dim);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim, "index {i} out of range for dim {}", self.dim);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(move |&i| self.get(i))
    }

    /// Semiring sum (entrywise OR).
    pub fn join(&self, other: &BoolVec) -> Result<BoolVec> {
        self.same_dim(other)?;
        Ok(BoolVec {
            dim: self.dim,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        })
    }

    /// Entrywise AND.
    pub fn meet(&self, other: &BoolVec) -> Result<BoolVec> {
        self.same_dim(other)?;
        Ok(BoolVec {
            dim: self.dim,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        })
    }

    /// Entries set here but not in `other`.
    pub fn minus(&self, other: &BoolVec) -> Result<BoolVec> {
        self.same_dim(other)?;
        Ok(BoolVec {
            dim: self.dim,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        })
    }

    /// Natural order of the semimodule: `self <= other` entrywise.
    pub fn le(&self, other: &BoolVec) -> bool {
        self.dim == other.dim && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// `<self, other>` with the dual basis pairing.
    pub fn pairing(&self, other: &BoolVec) -> Result<bool> {
        Ok(!self.meet(other)?.is_zero())
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.dim).map(|i| self.get(i)).collect()
    }

    fn same_dim(&self, other: &BoolVec) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                left: (self.dim, 1),
                right: (other.dim, 1),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BoolVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

impl Serialize for BoolVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let bits: Vec<u8> = (0..self.dim).map(|i| u8::from(self.get(i))).collect();
        bits.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoolVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(D::Error::custom(format!("entry {bad} is not 0 or 1")));
        }
        Ok(BoolVec::from_bools(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>()))
    }
}

/// A `rows x cols` Boolean matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMat {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BoolMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BoolMat {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension {
                left: (rows.len(), cols),
                right: (1, bad.len()),
            });
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| rows[i][j]))
    }

    /// The `n x 1` matrix with the given column.
    pub fn column_of(v: &BoolVec) -> Self {
        Self::from_fn(v.dim(), 1, |i, _| v.get(i))
    }

    /// The `1 x n` matrix with the given row.
    pub fn row_of(v: &BoolVec) -> Self {
        Self::from_fn(1, v.dim(), |_, j| v.get(j))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {:?}", self.shape());
        self.words[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {:?}", self.shape());
        let bit = 1u64 << (j % WORD);
        let w = &mut self.words[i * self.stride + j / WORD];
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BoolVec {
        BoolVec {
            dim: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> BoolVec {
        let mut v = BoolVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of the nonzero entries, row by row.
    pub fn ones(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BoolMat) -> Result<BoolMat> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = BoolMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let base = i * out.stride;
            for j in 0..self.cols {
                if self.get(i, j) {
                    for (k, w) in other.row_words(j).iter().enumerate() {
                        out.words[base + k] |= w;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise OR.
    pub fn join(&self, other: &BoolMat) -> Result<BoolMat> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(out)
    }

    /// Kronecker product, capped at the default entry count.
    pub fn kron(&self, other: &BoolMat) -> Result<BoolMat> {
        self.kron_capped(other, DEFAULT_MAX_ENTRIES)
    }

    /// Kronecker product; the first factor indexes the most significant digit.
    pub fn kron_capped(&self, other: &BoolMat, cap: usize) -> Result<BoolMat> {
        let rows = self.rows.checked_mul(other.rows);
        let cols = self.cols.checked_mul(other.cols);
        let (rows, cols) = match (rows, cols) {
            (Some(r), Some(c)) if r.checked_mul(c).is_some_and(|n| n <= cap) => (r, c),
            _ => {
                return Err(Error::Size {
                    what: "kronecker product",
                    requested: self.rows.saturating_mul(other.rows).saturating_mul(self.cols.saturating_mul(other.cols)),
                    cap,
                })
            }
        };
        let mut out = BoolMat::zeros(rows, cols);
        for (i, j) in self.ones() {
            for (k, l) in other.ones() {
                out.set(i * other.rows + k, j * other.cols + l, true);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BoolMat {
        let mut out = BoolMat::zeros(self.cols, self.rows);
        for (i, j) in self.ones() {
            out.set(j, i, true);
        }
        out
    }

    /// Image of a column vector.
    pub fn apply(&self, v: &BoolVec) -> Result<BoolVec> {
        if v.dim() != self.cols {
            return Err(Error::Dimension {
                left: self.shape(),
                right: (v.dim(), 1),
            });
        }
        let mut out = BoolVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.row_words(i).iter().zip(&v.words).any(|(a, b)| a & b != 0) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BoolMat {
        BoolMat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }
}

impl fmt::Debug for BoolMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolMat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, " ")?;
            }
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

impl Serialize for BoolMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<u8>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| u8::from(self.get(i, j))).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoolMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(d)?;
        if rows.iter().flatten().any(|&b| b > 1) {
            return Err(D::Error::custom("matrix entries must be 0 or 1"));
        }
        let bools: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|&b| b == 1).collect()).collect();
        BoolMat::from_rows(&bools).map_err(D::Error::custom)
    }
}
