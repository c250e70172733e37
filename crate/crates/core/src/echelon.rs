//! Degree-homogeneous subspaces of `A(n)` in canonical reduced echelon form.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{axpy, Gf2Reducer, RowReducer, SparseRow};
use crate::vector::FreeVector;
use crate::word::{Word, MAX_WORD_LEN};

/// Largest degree whose full ambient space may be materialized by default.
pub const DEFAULT_DENSE_CAP: u32 = 16;

/// GF(2) inputs up to this degree are reduced on `2^n`-bit rows.
pub const GF2_BITSET_MAX_DEGREE: u32 = 12;

/// A subspace of `A(degree)` stored as its reduced echelon basis: each row
/// has coefficient 1 on its order-least word (the pivot) and no row touches
/// another row's pivot. Equal subspaces have identical representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonSubspace {
    degree: u32,
    field: FieldSpec,
    rows: Vec<SparseRow>,
}

pub(crate) fn vector_to_row(v: &FreeVector) -> SparseRow {
    v.terms().map(|(w, c)| (w.index(), *c)).collect()
}

pub(crate) fn row_to_vector(degree: u32, field: &FieldSpec, row: &[(u128, u32)]) -> FreeVector {
    FreeVector::from_terms(degree, field, row.iter().map(|&(i, c)| (Word::from_index(degree, i).expect("degree checked"), c)))
        .expect("homogeneous by construction")
}

impl EchelonSubspace {
    pub fn zero(degree: u32, field: FieldSpec) -> Self {
        EchelonSubspace { degree, field, rows: Vec::new() }
    }

    /// All of `A(degree)`; refused above `cap`.
    pub fn full(degree: u32, field: FieldSpec, cap: u32) -> Result<Self> {
        if degree > cap {
            return Err(Error::Capacity { degree, what: format!("full ambient space above cap {cap}") });
        }
        let rows = (0..(1u128 << degree)).map(|i| vec![(i, 1)]).collect();
        Ok(EchelonSubspace { degree, field, rows })
    }

    pub fn from_words(degree: u32, field: FieldSpec, words: &[Word]) -> Result<Self> {
        let mut idx: Vec<u128> = Vec::with_capacity(words.len());
        for w in words {
            if w.len() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: w.len() });
            }
            idx.push(w.index());
        }
        idx.sort_unstable();
        idx.dedup();
        Ok(EchelonSubspace { degree, field, rows: idx.into_iter().map(|i| vec![(i, 1)]).collect() })
    }

    /// Wraps rows that are already in reduced echelon form.
    pub(crate) fn from_rref_rows(degree: u32, field: FieldSpec, mut rows: Vec<SparseRow>) -> Self {
        rows.sort_by_key(|r| r[0].0);
        EchelonSubspace { degree, field, rows }
    }

    /// Reduced echelon basis of the span of `vectors`, all of degree `degree`.
    pub fn reduce(degree: u32, field: FieldSpec, vectors: &[FreeVector]) -> Result<Self> {
        for v in vectors {
            if v.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: v.degree() });
            }
        }
        Ok(Self::reduce_rows(degree, field, vectors.iter().map(vector_to_row)))
    }

    pub(crate) fn reduce_rows(degree: u32, field: FieldSpec, rows: impl IntoIterator<Item = SparseRow>) -> Self {
        if field.characteristic() == 2 && degree <= GF2_BITSET_MAX_DEGREE {
            let mut r = Gf2Reducer::new(1usize << degree);
            for row in rows {
                r.insert_sparse(&row);
            }
            EchelonSubspace { degree, field, rows: r.into_sparse_rows() }
        } else {
            let mut r = RowReducer::new(field);
            for row in rows {
                r.insert(row);
            }
            EchelonSubspace { degree, field, rows: r.into_rows() }
        }
    }

    /// Sparse-path reduction regardless of characteristic.
    pub(crate) fn reduce_rows_sparse(degree: u32, field: FieldSpec, rows: impl IntoIterator<Item = SparseRow>) -> Self {
        let mut r = RowReducer::new(field);
        for row in rows {
            r.insert(row);
        }
        EchelonSubspace { degree, field, rows: r.into_rows() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> Vec<FreeVector> {
        self.rows.iter().map(|r| row_to_vector(self.degree, &self.field, r)).collect()
    }

    pub fn pivot_words(&self) -> Vec<Word> {
        self.rows.iter().map(|r| Word::from_index(self.degree, r[0].0).unwrap()).collect()
    }

    /// True when every basis row is a single word.
    pub fn is_word_spanned(&self) -> bool {
        self.rows.iter().all(|r| r.len() == 1)
    }

    pub(crate) fn reducer(&self) -> RowReducer {
        RowReducer::from_rref(self.field, self.rows.iter().cloned())
    }

    fn check_degree(&self, v: &FreeVector) -> Result<()> {
        if v.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: v.degree() });
        }
        Ok(())
    }

    /// Residual of `v` after eliminating every pivot word.
    pub fn normal_form(&self, v: &FreeVector) -> Result<FreeVector> {
        self.check_degree(v)?;
        let r = self.reduce_row(vector_to_row(v));
        Ok(row_to_vector(self.degree, &self.field, &r))
    }

    pub(crate) fn reduce_row(&self, mut v: SparseRow) -> SparseRow {
        let mut i = 0;
        while i < v.len() {
            let (col, c) = v[i];
            match self.rows.binary_search_by_key(&col, |r| r[0].0) {
                Ok(k) => v = axpy(&self.field, &v, self.field.neg(c), &self.rows[k]),
                Err(_) => i += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &FreeVector) -> Result<bool> {
        self.check_degree(v)?;
        Ok(self.reduce_row(vector_to_row(v)).is_empty())
    }

    pub(crate) fn contains_row(&self, v: &[(u128, u32)]) -> bool {
        self.reduce_row(v.to_vec()).is_empty()
    }

    pub fn contains_word(&self, w: &Word) -> Result<bool> {
        self.contains(&FreeVector::from_word(*w))
    }

    pub fn is_subspace_of(&self, other: &EchelonSubspace) -> Result<bool> {
        if other.degree != self.degree {
            return Err(Error::DegreeMismatch { expected: other.degree, found: self.degree });
        }
        Ok(self.rows.iter().all(|r| other.contains_row(r)))
    }

    pub fn sum(&self, other: &EchelonSubspace) -> Result<EchelonSubspace> {
        if other.degree != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let (big, small) = if self.dim() >= other.dim() { (self, other) } else { (other, self) };
        let mut r = big.reducer();
        for row in &small.rows {
            r.insert(row.clone());
        }
        Ok(EchelonSubspace { degree: self.degree, field: self.field, rows: r.into_rows() })
    }

    /// Intersection by the Zassenhaus construction: reduce `(u, u)` for
    /// `u` in `self` and `(v, 0)` for `v` in `other`; rows whose pivot falls
    /// in the second block span the intersection.
    pub fn intersection(&self, other: &EchelonSubspace) -> Result<EchelonSubspace> {
        if other.degree != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        if self.degree >= MAX_WORD_LEN - 1 {
            return Err(Error::Capacity { degree: self.degree, what: "intersection".into() });
        }
        let offset = 1u128 << self.degree;
        let mut r = RowReducer::new(self.field);
        for u in &self.rows {
            let mut row = u.clone();
            row.extend(u.iter().map(|&(i, c)| (i + offset, c)));
            r.insert(row);
        }
        for v in &other.rows {
            r.insert(v.clone());
        }
        let inter: Vec<SparseRow> = r
            .into_rows()
            .into_iter()
            .filter(|row| row[0].0 >= offset)
            .map(|row| row.into_iter().map(|(i, c)| (i - offset, c)).collect())
            .collect();
        Ok(Self::reduce_rows_sparse(self.degree, self.field, inter))
    }

    /// Span of all products `u*v`. Products of reduced echelon rows are
    /// again in reduced echelon form (the least word of `u*v` is the
    /// concatenation of the least words), so no further reduction is needed.
    pub fn span_product(&self, other: &EchelonSubspace) -> Result<EchelonSubspace> {
        let degree = self.degree + other.degree;
        if degree > MAX_WORD_LEN {
            return Err(Error::WordTooLong(degree));
        }
        let shift = other.degree;
        let mut rows = Vec::with_capacity(self.rows.len() * other.rows.len());
        for u in &self.rows {
            for v in &other.rows {
                let mut row = Vec::with_capacity(u.len() * v.len());
                for &(a, ca) in u {
                    let hi = if shift >= 128 { 0 } else { a << shift };
                    for &(b, cb) in v {
                        row.push((hi | b, self.field.mul(ca, cb)));
                    }
                }
                rows.push(row);
            }
        }
        rows.sort_by_key(|r| r[0].0);
        Ok(EchelonSubspace { degree, field: self.field, rows })
    }

    /// Word-spanned complement. Without `within`, the non-pivot words of
    /// `A(n)` (refused above `cap`). With `within`, the order-least greedy
    /// choice of words from `within` completing `self` to
    /// `self + span(within)`.
    pub fn word_complement(&self, within: Option<&[Word]>, cap: u32) -> Result<EchelonSubspace> {
        match within {
            None => {
                if self.degree > cap {
                    return Err(Error::Capacity { degree: self.degree, what: "complement in A(n)".into() });
                }
                let mut rows = Vec::new();
                let mut pivots = self.rows.iter().map(|r| r[0].0).peekable();
                for i in 0..(1u128 << self.degree) {
                    if pivots.peek() == Some(&i) {
                        pivots.next();
                    } else {
                        rows.push(vec![(i, 1)]);
                    }
                }
                Ok(EchelonSubspace { degree: self.degree, field: self.field, rows })
            }
            Some(words) => {
                let mut sorted: Vec<Word> = words.to_vec();
                sorted.sort();
                let before = sorted.len();
                sorted.dedup();
                if sorted.len() != before {
                    return Err(Error::NotIndependent);
                }
                for w in &sorted {
                    if w.len() != self.degree {
                        return Err(Error::DegreeMismatch { expected: self.degree, found: w.len() });
                    }
                }
                let mut r = self.reducer();
                let mut chosen = Vec::new();
                for w in &sorted {
                    if r.insert(vec![(w.index(), 1)]) {
                        chosen.push(*w);
                    }
                }
                EchelonSubspace::from_words(self.degree, self.field, &chosen)
            }
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.rows().iter().map(|v| v.to_string()).collect()
    }

    pub fn from_strings(degree: u32, field: FieldSpec, rows: &[String]) -> Result<Self> {
        let vs = rows.iter().map(|s| FreeVector::parse(s, &field, Some(degree))).collect::<Result<Vec<_>>>()?;
        Self::reduce(degree, field, &vs)
    }
}
