//! Bit-vectors and matrices over GF(2).
//!
//! Vectors are packed into `u64` words. Trailing bits past `len` are kept at
//! zero so word-wise equality, hashing and popcounts stay exact.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryVector {
    len: usize,
    words: Vec<u64>,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    /// The vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector of length `len` with ones at `indices`.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index / WORD] >> (index % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD);
        if value {
            self.words[index / WORD] |= mask;
        } else {
            self.words[index / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, index: usize) {
        let b = self.get(index);
        self.set(index, !b);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    /// In-place XOR. Panics on length mismatch; use [`BinaryVector::try_xor`]
    /// where the lengths come from user input.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "binary vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn try_xor(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(self.xor(other))
    }

    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "binary vector length mismatch");
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn or(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "binary vector length mismatch");
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "binary vector length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Parses a string of `0`/`1` characters; character `j` is bit `j`.
    pub fn parse_bitstring(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("invalid bit '{other}' at position {}", i + 1),
                    })
                }
            }
        }
        Ok(Self::from_bits(bits))
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    /// The vector as an integer with bit `j` at position `j`. Only for `len <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({})", self.to_bitstring())
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl serde::Serialize for BinaryVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}

/// Rectangular matrix stored as rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<BinaryVector>,
}

impl BinaryMatrix {
    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BinaryVector::zeros(cols); rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BinaryVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(Self { cols, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BinaryVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BinaryVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BinaryVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.rows.iter()).rank()
    }

    /// Combination `sum coeffs[i] * row_i`.
    pub fn combine(&self, coeffs: &BinaryVector) -> BinaryVector {
        assert_eq!(coeffs.len(), self.rows.len());
        let mut acc = BinaryVector::zeros(self.cols);
        for i in coeffs.ones() {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }
}

/// Incremental row-echelon form that remembers which input rows each reduced
/// row is built from.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    // (pivot column, reduced row, combination of kept input rows)
    reduced: Vec<(usize, BinaryVector, BinaryVector)>,
    kept: usize,
    capacity: usize,
}

impl Echelon {
    fn new(capacity: usize) -> Self {
        Self {
            reduced: Vec::new(),
            kept: 0,
            capacity,
        }
    }

    fn from_rows<'a, I: Iterator<Item = &'a BinaryVector>>(rows: I) -> Self {
        let rows: Vec<&BinaryVector> = rows.collect();
        let mut e = Self::new(rows.len());
        for r in rows {
            e.insert(r);
        }
        e
    }

    fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Reduces `v` against the current pivots, returning the residue and the
    /// combination of kept rows that was subtracted.
    fn reduce(&self, v: &BinaryVector) -> (BinaryVector, BinaryVector) {
        let mut residue = v.clone();
        let mut combo = BinaryVector::zeros(self.capacity);
        for (pivot, row, c) in &self.reduced {
            if residue.get(*pivot) {
                residue.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        (residue, combo)
    }

    /// Inserts `v`; returns true when it was independent of the rows so far.
    fn insert(&mut self, v: &BinaryVector) -> bool {
        let (residue, mut combo) = self.reduce(v);
        match residue.first_one() {
            None => false,
            Some(pivot) => {
                combo.set(self.kept, true);
                self.kept += 1;
                // keep earlier rows free of the new pivot so `reduce` is a single pass
                for (_, row, c) in self.reduced.iter_mut() {
                    if row.get(pivot) {
                        row.xor_assign(&residue);
                        c.xor_assign(&combo);
                    }
                }
                self.reduced.push((pivot, residue, combo));
                true
            }
        }
    }
}

/// Independent rows of `vectors`, keeping the first-seen row of each new
/// direction in input order, together with their input indices.
pub fn gf2_basis_indices(vectors: &[BinaryVector]) -> Result<(BinaryMatrix, Vec<usize>)> {
    let cols = match vectors.first() {
        Some(v) => v.len(),
        None => return Err(Error::InvalidInput("gf2_basis needs at least one vector".into())),
    };
    let mut echelon = Echelon::new(vectors.len());
    let mut kept = Vec::new();
    let mut rows = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: v.len(),
            });
        }
        if echelon.insert(v) {
            kept.push(i);
            rows.push(v.clone());
        }
    }
    Ok((BinaryMatrix { cols, rows }, kept))
}

/// Independent basis of the span of `vectors` (first-seen rows, input order).
pub fn gf2_basis(vectors: &[BinaryVector]) -> Result<BinaryMatrix> {
    gf2_basis_indices(vectors).map(|(m, _)| m)
}

/// Solves `sum c_i * basis.row(i) == target`. Returns `None` when `target` is
/// outside the row span. With dependent rows an arbitrary solution is returned.
pub fn gf2_solve(basis: &BinaryMatrix, target: &BinaryVector) -> Result<Option<BinaryVector>> {
    if target.len() != basis.num_cols() {
        return Err(Error::DimensionMismatch {
            expected: basis.num_cols(),
            found: target.len(),
        });
    }
    let mut echelon = Echelon::new(basis.num_rows());
    // position of each kept row in the original matrix
    let mut kept_index = Vec::new();
    for (i, row) in basis.rows().iter().enumerate() {
        if echelon.insert(row) {
            kept_index.push(i);
        }
    }
    let (residue, combo) = echelon.reduce(target);
    if !residue.is_zero() {
        return Ok(None);
    }
    let mut coeffs = BinaryVector::zeros(basis.num_rows());
    for k in combo.ones() {
        coeffs.set(kept_index[k], true);
    }
    Ok(Some(coeffs))
}

/// Whether `target` lies in the row span of `basis`.
pub fn in_span(basis: &BinaryMatrix, target: &BinaryVector) -> Result<bool> {
    Ok(gf2_solve(basis, target)?.is_some())
}
