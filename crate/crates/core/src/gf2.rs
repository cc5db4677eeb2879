//! Exact bit-packed linear algebra over GF(2).
//!
//! Vectors and matrices are immutable once built as far as the rest of the
//! library is concerned: rank, kernel and syndrome computations never mutate
//! their argument, so values can be shared freely across threads.
//!
//! Bit `i` of a [`BitVector`] lives in word `i / 64` at position `i % 64`.
//! Trailing bits of the last word beyond the logical length are kept zero,
//! which makes equality, hashing and dot products plain word operations.

use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};

/// A packed binary word of fixed length.
///
/// Length 0 is admitted so that the syndrome of a matrix with no rows is a
/// well-defined (empty) vector; everything the library hands to callers has
/// length at least 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Builds a vector from explicit bits.
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of the given length with ones exactly at `support`.
    ///
    /// # Panics
    /// Panics if any index is out of range.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = BitVector::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Uniformly random vector drawn from the given generator.
    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = BitVector::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.next_u64();
        }
        v.mask_tail();
        v
    }

    /// Parses a lowercase/uppercase hex string into a vector of length `n`.
    ///
    /// The encoding is most-significant-bit first: coordinate 0 of the
    /// vector is the top bit of the first hex digit. The string must have
    /// exactly `ceil(n / 4)` digits and any padding bits beyond `n` must
    /// be zero.
    pub fn from_hex(s: &str, n: usize) -> Result<Self> {
        let expected = n.div_ceil(4);
        let digits: Vec<u32> = s
            .chars()
            .map(|c| {
                c.to_digit(16)
                    .ok_or_else(|| Error::BadHex(format!("invalid hex digit {c:?}")))
            })
            .collect::<Result<_>>()?;
        if digits.len() != expected {
            return Err(Error::BadHex(format!(
                "expected {expected} hex digits for n = {n}, got {}",
                digits.len()
            )));
        }
        let mut v = BitVector::zeros(n);
        for (d, &digit) in digits.iter().enumerate() {
            for b in 0..4 {
                let bit = (digit >> (3 - b)) & 1 == 1;
                let idx = 4 * d + b;
                if idx < n {
                    v.set(idx, bit);
                } else if bit {
                    return Err(Error::BadHex(format!(
                        "padding bit {idx} beyond length {n} is set"
                    )));
                }
            }
        }
        Ok(v)
    }

    /// Encodes the vector as lowercase hex, most-significant-bit first.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for d in 0..self.len.div_ceil(4) {
            let mut digit = 0u32;
            for b in 0..4 {
                let idx = 4 * d + b;
                if idx < self.len && self.get(idx) {
                    digit |= 1 << (3 - b);
                }
            }
            out.push(char::from_digit(digit, 16).unwrap());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// # Panics
    /// Panics if `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// # Panics
    /// Panics if `i >= len`.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// # Panics
    /// Panics if `i >= len`.
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place addition over GF(2).
    ///
    /// # Panics
    /// Panics if lengths differ.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Sum over GF(2).
    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    ///
    /// # Panics
    /// Panics if lengths differ; use [`is_orthogonal`] for checked input.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Index of the lowest set bit, or `None` for the zero vector.
    pub fn lowest_set_bit(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|wi| wi * 64 + self.words[wi].trailing_zeros() as usize)
    }

    /// Copy of the vector with one extra coordinate appended at the end.
    pub fn append_bit(&self, bit: bool) -> BitVector {
        let mut out = BitVector::zeros(self.len + 1);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out.set(self.len, bit);
        out
    }

    fn mask_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
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

/// True iff `h` and `r` are orthogonal over GF(2).
pub fn is_orthogonal(h: &BitVector, r: &BitVector) -> Result<bool> {
    if h.len() != r.len() {
        return Err(Error::DimensionMismatch {
            expected: h.len(),
            got: r.len(),
        });
    }
    Ok(!h.dot(r))
}

/// A row-ordered binary matrix.
///
/// Rows may be linearly dependent; a matrix with zero rows is legal and has
/// rank 0.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    ncols: usize,
}

impl BitMatrix {
    /// Matrix with the given width and no rows.
    pub fn new(ncols: usize) -> Self {
        BitMatrix {
            rows: Vec::new(),
            ncols,
        }
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<BitVector>, ncols: usize) -> Result<Self> {
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
        }
        Ok(BitMatrix { rows, ncols })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| BitVector::from_support(n, &[i])).collect();
        BitMatrix { rows, ncols: n }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVector::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// # Panics
    /// Panics if `i >= nrows`.
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &BitVector> {
        self.rows.iter()
    }

    /// Appends a row.
    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        let mut basis = RowBasis::new(self.ncols);
        for row in &self.rows {
            basis.insert(row);
        }
        basis.rank()
    }

    /// A basis of the right kernel `{x : M x^T = 0}`.
    ///
    /// The returned vectors are linearly independent and there are exactly
    /// `ncols - rank` of them; for a matrix with no rows this is the
    /// standard basis of the full space.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let reduced = Rref::of(self);
        let mut pivot_row = vec![None; self.ncols];
        for (i, &p) in reduced.pivots.iter().enumerate() {
            pivot_row[p] = Some(i);
        }
        let mut basis = Vec::with_capacity(self.ncols - reduced.pivots.len());
        for free in 0..self.ncols {
            if pivot_row[free].is_some() {
                continue;
            }
            let mut x = BitVector::zeros(self.ncols);
            x.set(free, true);
            for (i, row) in reduced.rows.iter().enumerate() {
                if row.get(free) {
                    x.set(reduced.pivots[i], true);
                }
            }
            basis.push(x);
        }
        basis
    }

    /// The column of check values `(row_i . v)_i`.
    pub fn syndrome(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: v.len(),
            });
        }
        let mut s = BitVector::zeros(self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                s.set(i, true);
            }
        }
        Ok(s)
    }

    /// True iff every check value is zero.
    pub fn in_kernel(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: v.len(),
            });
        }
        Ok(self.rows.iter().all(|row| !row.dot(v)))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.nrows(), self.ncols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Incremental GF(2) row basis keyed by lowest set bit.
///
/// Feeding rows one by one yields the running rank, which is what the
/// early-stopped row selection needs.
pub struct RowBasis {
    slots: Vec<Option<BitVector>>,
    rank: usize,
}

impl RowBasis {
    pub fn new(ncols: usize) -> Self {
        RowBasis {
            slots: vec![None; ncols],
            rank: 0,
        }
    }

    /// Adds a row to the span. Returns true iff the rank grew.
    pub fn insert(&mut self, row: &BitVector) -> bool {
        let mut c = row.clone();
        while let Some(p) = c.lowest_set_bit() {
            match &self.slots[p] {
                Some(v) => c.xor_assign(v),
                None => {
                    self.slots[p] = Some(c);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    /// Remainder of `v` after reduction against the basis; zero iff `v`
    /// lies in the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut c = v.clone();
        while let Some(p) = c.lowest_set_bit() {
            match &self.slots[p] {
                Some(row) => c.xor_assign(row),
                None => break,
            }
        }
        c
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Reduced row echelon form: mutually reduced nonzero rows with distinct
/// pivot columns (pivot = lowest set bit of its row).
struct Rref {
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Rref {
    fn of(m: &BitMatrix) -> Self {
        let mut rows: Vec<BitVector> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut slot: Vec<Option<usize>> = vec![None; m.ncols()];
        for input in m.rows() {
            let mut c = input.clone();
            // Full reduction: clear every pivot column present in c.
            let mut b = 0;
            while b < m.ncols() {
                if c.get(b) {
                    if let Some(i) = slot[b] {
                        c.xor_assign(&rows[i]);
                    }
                }
                b += 1;
            }
            if let Some(p) = c.lowest_set_bit() {
                for row in rows.iter_mut() {
                    if row.get(p) {
                        row.xor_assign(&c);
                    }
                }
                slot[p] = Some(rows.len());
                rows.push(c);
                pivots.push(p);
            }
        }
        Rref { rows, pivots }
    }
}
