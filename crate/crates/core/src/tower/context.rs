//! Linear dependence of `π_k` on fixed material placed inside free context.
//!
//! Fix disjoint slots inside a word of length `2^k` and let the remaining
//! positions range over all words. Cutting the dyadic tree at the slot
//! boundaries leaves three kinds of nodes: free nodes (every `V` vector is
//! reached, by surjectivity of `π`), blocks lying inside one slot (which
//! contribute their own projection), and mixed nodes, whose reachable maps
//! are obtained from their children through the level quotient. The result
//! is a finite family of matrices `M : Z -> V(2^k)`, where `Z` is the tensor
//! product of the `V` spaces of the slot blocks, such that the span of
//! `π_k` over all instantiations is `span{M z}` with `z` the image of the
//! slot contents.

use crate::echelon::EchelonSubspace;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{dense_to_sparse, kernel_rref, kron_vec, Mat, RowReducer, SparseRow};
use crate::vector::FreeVector;
use crate::word::{enumerate_words, Word};

use super::ProjectionTower;

/// Piece of a degree-`2^k` template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Fixed(FreeVector),
    /// All words of the given length.
    Free(u32),
}

impl Segment {
    pub fn len(&self) -> u32 {
        match self {
            Segment::Fixed(v) => v.degree(),
            Segment::Free(l) => *l,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// What the root of the tree computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Top {
    /// `π_k`.
    Project,
    /// `π_{k-1} ⊗ π_{k-1}` on the two halves.
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotRange {
    pub start: u32,
    pub len: u32,
}

impl SlotRange {
    fn end(&self) -> u32 {
        self.start + self.len
    }
}

/// A maximal dyadic block inside a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub slot: usize,
    pub level: u32,
    /// Start of the block relative to its slot.
    pub offset: u32,
}

struct Node {
    blocks: Vec<Block>,
    zdim: usize,
    maps: Vec<Mat>,
}

/// The family of maps `Z -> V` for one placement of slots.
#[derive(Debug, Clone)]
pub struct ContextMaps {
    pub level: u32,
    pub top: Top,
    pub slots: Vec<SlotRange>,
    pub blocks: Vec<Block>,
    pub zdim: usize,
    pub out_dim: usize,
    pub maps: Vec<Mat>,
}

impl ContextMaps {
    pub fn build(tower: &ProjectionTower, level: u32, top: Top, slots: &[SlotRange]) -> Result<Self> {
        tower.level(level)?;
        if top == Top::Pair && level == 0 {
            return Err(Error::InvalidParams("paired top needs level >= 1".into()));
        }
        let total = 1u32 << level;
        let mut prev_end = 0;
        for s in slots {
            if s.len == 0 || s.start < prev_end || s.end() > total {
                return Err(Error::InvalidParams(format!("slot [{}, {}) misplaced in length {total}", s.start, s.end())));
            }
            prev_end = s.end();
        }
        let node = Self::node(tower, level, 0, slots, top == Top::Pair)?;
        let out_dim = match top {
            Top::Project => tower.dim(level),
            Top::Pair => tower.dim(level - 1).pow(2),
        };
        Ok(ContextMaps { level, top, slots: slots.to_vec(), blocks: node.blocks, zdim: node.zdim, out_dim, maps: node.maps })
    }

    fn node(tower: &ProjectionTower, level: u32, offset: u32, slots: &[SlotRange], force_split: bool) -> Result<Node> {
        let end = offset + (1 << level);
        let d = tower.dim(level);
        let touching: Vec<usize> = (0..slots.len()).filter(|&s| slots[s].start < end && offset < slots[s].end()).collect();
        if touching.is_empty() && !force_split {
            let maps = (0..d)
                .map(|i| {
                    let mut m = Mat::zeros(d, 1);
                    m.set(i, 0, 1);
                    m
                })
                .collect();
            return Ok(Node { blocks: Vec::new(), zdim: 1, maps });
        }
        if let [s] = touching[..] {
            if slots[s].start <= offset && end <= slots[s].end() && !force_split {
                return Ok(Node {
                    blocks: vec![Block { slot: s, level, offset: offset - slots[s].start }],
                    zdim: d,
                    maps: vec![Mat::identity(d)],
                });
            }
        }
        if level == 0 {
            return Err(Error::Internal("single letter both inside and outside a slot".into()));
        }
        let half = 1 << (level - 1);
        let left = Self::node(tower, level - 1, offset, slots, false)?;
        let right = Self::node(tower, level - 1, offset + half, slots, false)?;
        let field = tower.field();
        let quotient = if force_split { None } else { tower.level(level)?.quotient() };
        let zdim = left.zdim * right.zdim;
        let out_rows = if force_split || quotient.is_none() { tower.dim(level - 1).pow(2) } else { d };
        let mut span = RowReducer::new(*field);
        for f in &left.maps {
            for g in &right.maps {
                let k = f.kron(field, g);
                let m = match quotient {
                    Some(q) => q.mul(field, &k),
                    None => k,
                };
                span.insert(m.to_sparse());
            }
        }
        let maps = span.into_rows().iter().map(|r| Mat::from_sparse(out_rows, zdim, r)).collect();
        let mut blocks = left.blocks;
        blocks.extend(right.blocks);
        Ok(Node { blocks, zdim, maps })
    }

    /// Blocks of one slot, in order.
    pub fn slot_blocks(&self, slot: usize) -> Vec<Block> {
        self.blocks.iter().filter(|b| b.slot == slot).copied().collect()
    }

    /// `Z`-coordinates of a word placed in `slot`.
    pub fn word_image(&self, tower: &ProjectionTower, slot: usize, w: &Word) -> Vec<u32> {
        let field = tower.field();
        let mut acc = vec![1u32];
        for b in self.blocks.iter().filter(|b| b.slot == slot) {
            let piece = w.slice(b.offset, 1 << b.level);
            acc = kron_vec(field, &acc, &tower.project_word_unchecked(b.level, &piece));
        }
        acc
    }

    /// `Z`-coordinates of a vector placed in `slot`.
    pub fn slot_image(&self, tower: &ProjectionTower, slot: usize, v: &FreeVector) -> Result<Vec<u32>> {
        if v.degree() != self.slots[slot].len {
            return Err(Error::DegreeMismatch { expected: self.slots[slot].len, found: v.degree() });
        }
        let field = tower.field();
        let dim: usize = self.slot_blocks(slot).iter().map(|b| tower.dim(b.level)).product();
        let mut out = vec![0u32; dim];
        for (w, &c) in v.terms() {
            for (o, x) in out.iter_mut().zip(self.word_image(tower, slot, w)) {
                *o = field.mul_add(*o, c, x);
            }
        }
        Ok(out)
    }

    /// Reduced echelon basis of the functionals on `Z` cut out by all maps:
    /// the content `z` is sent to zero in every instantiation iff every
    /// functional vanishes on it.
    pub fn functionals(&self, field: &FieldSpec) -> Vec<SparseRow> {
        let mut r = RowReducer::new(*field);
        for m in &self.maps {
            for i in 0..m.rows {
                let row = dense_to_sparse(m.row(i));
                if !row.is_empty() {
                    r.insert(row);
                }
            }
        }
        r.into_rows()
    }

    /// The functionals evaluated on every word of the single slot: one dense
    /// row of length `2^len` per functional.
    pub fn functionals_on_words(&self, tower: &ProjectionTower) -> Result<Vec<Vec<u32>>> {
        if self.slots.len() != 1 {
            return Err(Error::InvalidParams("word functionals need exactly one slot".into()));
        }
        let field = tower.field();
        let phis = self.functionals(field);
        let n = self.slots[0].len;
        let mut out = vec![vec![0u32; 1usize << n]; phis.len()];
        for w in enumerate_words(n)? {
            let z = self.word_image(tower, 0, &w);
            for (row, phi) in out.iter_mut().zip(&phis) {
                let v = phi.iter().fold(0u32, |acc, &(c, x)| field.mul_add(acc, x, z[c as usize]));
                row[w.index() as usize] = v;
            }
        }
        Ok(out)
    }
}

/// `{v in A(n) : every functional vanishes on v}` for word-functional rows
/// over the `2^n` words of `A(n)`.
pub fn word_kernel(field: &FieldSpec, n: u32, rows: Vec<Vec<u32>>) -> EchelonSubspace {
    let rows = kernel_rref(field, 1usize << n, rows);
    EchelonSubspace::from_rref_rows(n, *field, rows)
}

/// A subspace of a coordinate space, in reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordSubspace {
    ambient: usize,
    rows: Vec<SparseRow>,
}

impl CoordSubspace {
    pub fn from_vectors(field: &FieldSpec, ambient: usize, vs: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut r = RowReducer::new(*field);
        for v in vs {
            r.insert(dense_to_sparse(&v));
        }
        CoordSubspace { ambient, rows: r.into_rows() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn contains(&self, field: &FieldSpec, v: &[u32]) -> bool {
        RowReducer::from_rref(*field, self.rows.iter().cloned()).contains(&dense_to_sparse(v))
    }
}

/// Span of `π_k` over all instantiations of the free segments.
pub fn family_span(tower: &ProjectionTower, k: u32, pattern: &[Segment]) -> Result<CoordSubspace> {
    let total: u32 = pattern.iter().map(|s| s.len()).sum();
    if total != 1 << k {
        return Err(Error::DegreeMismatch { expected: 1 << k, found: total });
    }
    let mut slots = Vec::new();
    let mut fixed = Vec::new();
    let mut pos = 0;
    for seg in pattern {
        if let Segment::Fixed(v) = seg {
            if v.degree() > 0 {
                slots.push(SlotRange { start: pos, len: v.degree() });
                fixed.push(v);
            }
        }
        pos += seg.len();
    }
    let cm = ContextMaps::build(tower, k, Top::Project, &slots)?;
    let field = tower.field();
    let mut z = vec![1u32];
    for (s, v) in fixed.iter().enumerate() {
        z = kron_vec(field, &z, &cm.slot_image(tower, s, v)?);
    }
    Ok(CoordSubspace::from_vectors(field, cm.out_dim, cm.maps.iter().map(|m| m.mul_vec(field, &z))))
}

/// Exhaustive version of [`family_span`] for small patterns.
pub fn family_span_brute(tower: &ProjectionTower, k: u32, pattern: &[Segment]) -> Result<CoordSubspace> {
    let field = *tower.field();
    let mut partial: Vec<FreeVector> = vec![FreeVector::from_word(Word::EMPTY)];
    for seg in pattern {
        partial = match seg {
            Segment::Fixed(v) => partial.iter().map(|p| p.mul(&field, v)).collect::<Result<_>>()?,
            Segment::Free(l) => {
                let words: Vec<Word> = enumerate_words(*l)?.collect();
                let mut next = Vec::with_capacity(partial.len() * words.len());
                for p in &partial {
                    for w in &words {
                        next.push(p.mul(&field, &FreeVector::from_word(*w))?);
                    }
                }
                next
            }
        };
    }
    let vs = partial.iter().map(|v| tower.project(k, v)).collect::<Result<Vec<_>>>()?;
    Ok(CoordSubspace::from_vectors(&field, tower.dim(k), vs))
}
