//! Exact row reduction over GF(p).
//!
//! Columns are `u128` indices; for subspaces of `A(n)` the index of a
//! column is the word's position in the fixed order, so "least pivot" means
//! "order-least word". Two backends produce the same reduced echelon form:
//! a sparse one for any `p`, and a bitset one for GF(2).

use std::collections::BTreeMap;

use crate::field::FieldSpec;

/// Sorted `(column, nonzero coefficient)` pairs.
pub type SparseRow = Vec<(u128, u32)>;

/// `a + c*b`
pub fn axpy(field: &FieldSpec, a: &[(u128, u32)], c: u32, b: &[(u128, u32)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = field.mul(c, b[j].1);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = field.mul_add(a[i].1, c, b[j].1);
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_row(field: &FieldSpec, row: &mut SparseRow, c: u32) {
    for e in row.iter_mut() {
        e.1 = field.mul(e.1, c);
    }
}

pub fn row_coeff(row: &[(u128, u32)], col: u128) -> u32 {
    match row.binary_search_by_key(&col, |e| e.0) {
        Ok(i) => row[i].1,
        Err(_) => 0,
    }
}

/// Incrementally maintained reduced row echelon form: every row has pivot
/// coefficient 1 at its least column and no other row touches that column.
#[derive(Debug, Clone)]
pub struct RowReducer {
    field: FieldSpec,
    rows: BTreeMap<u128, SparseRow>,
}

impl RowReducer {
    pub fn new(field: FieldSpec) -> Self {
        RowReducer { field, rows: BTreeMap::new() }
    }

    /// Wraps rows already in reduced echelon form.
    pub fn from_rref(field: FieldSpec, rows: impl IntoIterator<Item = SparseRow>) -> Self {
        let rows = rows.into_iter().map(|r| (r[0].0, r)).collect();
        RowReducer { field, rows }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = u128> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: u128) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.rows.values()
    }

    pub fn into_rows(self) -> Vec<SparseRow> {
        self.rows.into_values().collect()
    }

    /// Canonical representative of `v` modulo the row space: the result is
    /// zero on every pivot column.
    pub fn reduce(&self, mut v: SparseRow) -> SparseRow {
        let mut i = 0;
        while i < v.len() {
            let (col, c) = v[i];
            match self.rows.get(&col) {
                Some(row) => v = axpy(&self.field, &v, self.field.neg(c), row),
                None => i += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: &[(u128, u32)]) -> bool {
        self.reduce(v.to_vec()).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseRow) -> bool {
        let mut r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let inv = self.field.inv(r[0].1);
        scale_row(&self.field, &mut r, inv);
        let pivot = r[0].0;
        let field = self.field;
        for row in self.rows.values_mut() {
            let c = row_coeff(row, pivot);
            if c != 0 {
                *row = axpy(&field, row, field.neg(c), &r);
            }
        }
        self.rows.insert(pivot, r);
        true
    }
}

/// GF(2) reduction on dense bit rows of width `ncols`.
#[derive(Debug, Clone)]
pub struct Gf2Reducer {
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivot_row: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Gf2Reducer {
    pub fn new(ncols: usize) -> Self {
        Gf2Reducer { ncols, rows: Vec::new(), pivot_row: vec![NONE; ncols] }
    }

    fn words(&self) -> usize {
        self.ncols.div_ceil(64)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn next_set(bits: &[u64], from: usize) -> Option<usize> {
        let mut w = from / 64;
        if w >= bits.len() {
            return None;
        }
        let mut cur = bits[w] & (u64::MAX << (from % 64));
        loop {
            if cur != 0 {
                return Some(w * 64 + cur.trailing_zeros() as usize);
            }
            w += 1;
            if w == bits.len() {
                return None;
            }
            cur = bits[w];
        }
    }

    fn reduce_bits(&self, v: &mut [u64]) {
        let mut pos = 0;
        while let Some(b) = Self::next_set(v, pos) {
            let r = self.pivot_row[b];
            if r != NONE {
                for (x, y) in v.iter_mut().zip(&self.rows[r as usize]) {
                    *x ^= *y;
                }
            }
            pos = b + 1;
        }
    }

    pub fn insert_sparse(&mut self, v: &[(u128, u32)]) -> bool {
        let mut bits = vec![0u64; self.words()];
        for &(c, k) in v {
            if k & 1 == 1 {
                bits[(c / 64) as usize] ^= 1 << (c % 64);
            }
        }
        self.insert_bits(bits)
    }

    pub fn insert_bits(&mut self, mut bits: Vec<u64>) -> bool {
        self.reduce_bits(&mut bits);
        let Some(p) = Self::next_set(&bits, 0) else {
            return false;
        };
        let (w, m) = (p / 64, 1u64 << (p % 64));
        for row in self.rows.iter_mut() {
            if row[w] & m != 0 {
                for (x, y) in row.iter_mut().zip(&bits) {
                    *x ^= *y;
                }
            }
        }
        self.pivot_row[p] = self.rows.len() as u32;
        self.rows.push(bits);
        true
    }

    /// Rows in reduced echelon form, sorted by pivot.
    pub fn into_sparse_rows(self) -> Vec<SparseRow> {
        let mut out: Vec<SparseRow> = self
            .rows
            .iter()
            .map(|bits| {
                let mut row = Vec::new();
                let mut pos = 0;
                while let Some(b) = Self::next_set(bits, pos) {
                    row.push((b as u128, 1));
                    pos = b + 1;
                }
                row
            })
            .collect();
        out.sort_by_key(|r| r[0].0);
        out
    }
}

/// Basis of `{v : M v = 0}` for a dense `rows x ncols` matrix, in reduced
/// echelon form with respect to least-column pivots. The kernel vector of a
/// free column `f` is `e_f` plus multiples of pivot columns larger than `f`,
/// which is why the elimination below runs from the rightmost column.
pub fn kernel_rref(field: &FieldSpec, ncols: usize, matrix: Vec<Vec<u32>>) -> Vec<SparseRow> {
    let mut m = matrix;
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for col in (0..ncols).rev() {
        if r == m.len() {
            break;
        }
        let Some(sel) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(r, sel);
        let inv = field.inv(m[r][col]);
        for e in m[r].iter_mut() {
            *e = field.mul(*e, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let c = field.neg(row[col]);
                for (e, p) in row.iter_mut().zip(&pivot_row) {
                    if *p != 0 {
                        *e = field.mul_add(*e, c, *p);
                    }
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    let mut is_pivot = vec![false; ncols];
    for &(_, c) in &pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::with_capacity(ncols - pivots.len());
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut row: SparseRow = vec![(f as u128, 1)];
        for &(pr, pc) in &pivots {
            let c = m[pr][f];
            if c != 0 {
                debug_assert!(pc > f);
                row.push((pc as u128, field.neg(c)));
            }
        }
        row.sort_by_key(|e| e.0);
        out.push(row);
    }
    out
}

/// Dense matrix over GF(p), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, field: &FieldSpec, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(0u32, |acc, (a, b)| if *a == 0 || *b == 0 { acc } else { field.mul_add(acc, *a, *b) }))
            .collect()
    }

    pub fn mul(&self, field: &FieldSpec, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = field.mul_add(out.data[idx], a, b);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, field: &FieldSpec, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for a in 0..self.rows {
            for s in 0..self.cols {
                let x = self.get(a, s);
                if x == 0 {
                    continue;
                }
                for b in 0..other.rows {
                    for t in 0..other.cols {
                        let y = other.get(b, t);
                        if y != 0 {
                            out.set(a * other.rows + b, s * other.cols + t, field.mul(x, y));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn to_sparse(&self) -> SparseRow {
        self.data.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i as u128, v)).collect()
    }

    pub fn from_sparse(rows: usize, cols: usize, v: &[(u128, u32)]) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for &(i, c) in v {
            m.data[i as usize] = c;
        }
        m
    }
}

/// Kronecker product of coordinate vectors.
pub fn kron_vec(field: &FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0; a.len() * b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i * b.len() + j] = field.mul(x, y);
            }
        }
    }
    out
}

pub fn dense_to_sparse(v: &[u32]) -> SparseRow {
    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i as u128, c)).collect()
}

pub fn sparse_to_dense(v: &[(u128, u32)], len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for &(i, c) in v {
        out[i as usize] = c;
    }
    out
}
