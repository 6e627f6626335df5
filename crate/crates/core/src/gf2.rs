//! Bit-packed vectors over GF(2) and an incremental elimination basis.
//!
//! [`BitRow`] backs both the x/z halves of Pauli operators and the chains of a
//! cell complex. [`EliminationBasis`] keeps a reduced set of vectors keyed by
//! their highest set bit, which is enough to solve `A v = b` over GF(2) and to
//! compute canonical coset representatives modulo the span of `A`'s columns.

use std::fmt;

const WORD_BITS: usize = 64;

/// Dense GF(2) vector stored in 64-bit words. Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in indices {
            row.flip(i);
        }
        row
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
        debug_assert!(i < self.len, "bit {i} out of range ({})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len, "bit {i} out of range ({})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len, "bit {i} out of range ({})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// GF(2) addition in place.
    pub fn xor_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "xor of rows with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    pub fn dot(&self, other: &BitRow) -> bool {
        assert_eq!(self.len, other.len, "dot of rows with different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn highest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitRow({bits})")
    }
}

/// Row-echelon basis built one vector at a time.
///
/// Every stored vector has a distinct pivot (its highest set bit) and carries a
/// `combination` recording which inserted columns were summed to produce it.
#[derive(Clone, Debug)]
pub struct EliminationBasis {
    len: usize,
    columns: usize,
    rows: Vec<(BitRow, BitRow)>,
    /// pivot bit -> position in `rows`
    pivots: Vec<Option<usize>>,
}

impl EliminationBasis {
    /// `len` is the vector length; `columns` the number of vectors that will be inserted.
    pub fn new(len: usize, columns: usize) -> Self {
        Self {
            len,
            columns,
            rows: Vec::new(),
            pivots: vec![None; len],
        }
    }

    /// Builds a basis for the span of `columns`, tagging each with its position.
    pub fn from_columns(len: usize, columns: &[BitRow]) -> Self {
        let mut basis = Self::new(len, columns.len());
        for (i, c) in columns.iter().enumerate() {
            basis.insert(c.clone(), BitRow::from_indices(columns.len(), [i]));
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a vector; returns `false` if it was already in the span.
    pub fn insert(&mut self, vector: BitRow, combination: BitRow) -> bool {
        assert_eq!(vector.len(), self.len);
        assert_eq!(combination.len(), self.columns);
        let (residual, combination) = self.reduce_tagged(vector, combination);
        match residual.highest_one() {
            None => false,
            Some(pivot) => {
                self.pivots[pivot] = Some(self.rows.len());
                self.rows.push((residual, combination));
                true
            }
        }
    }

    fn reduce_tagged(&self, mut vector: BitRow, mut combination: BitRow) -> (BitRow, BitRow) {
        // Scan from the top; a row only touches bits at or below its pivot, so a
        // single descending pass clears every pivot position.
        for bit in (0..self.len).rev() {
            if !vector.get(bit) {
                continue;
            }
            if let Some(r) = self.pivots[bit] {
                let (row, combo) = &self.rows[r];
                vector.xor_assign(row);
                combination.xor_assign(combo);
            }
        }
        (vector, combination)
    }

    /// Canonical representative of `vector` modulo the span, plus the
    /// combination of inserted columns that was subtracted.
    pub fn reduce(&self, vector: &BitRow) -> (BitRow, BitRow) {
        assert_eq!(vector.len(), self.len);
        self.reduce_tagged(vector.clone(), BitRow::zeros(self.columns))
    }

    /// Solves `sum_{i in S} column_i = target`, returning `S` if solvable.
    pub fn solve(&self, target: &BitRow) -> Option<BitRow> {
        let (residual, combination) = self.reduce(target);
        residual.is_zero().then_some(combination)
    }
}
