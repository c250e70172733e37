//! The two-sided ideal `I = ⊕ I(n)`. A vector `v` of degree `n` lies in
//! `I(n)` when every placement `a v b` with `|a v b| = 2^{m+2}` falls into
//! `U A + A U` over the two halves of length `2^{m+1}`. That sum is the
//! kernel of `π_{m+1} ⊗ π_{m+1}`, so each placement is decided by a paired
//! context map with `v` in one slot.

use serde::Serialize;

use crate::echelon::EchelonSubspace;
use crate::error::{Error, Result};
use crate::linalg::{RowReducer, SparseRow};
use crate::tower::context::{word_kernel, ContextMaps, SlotRange, Top};
use crate::tower::ProjectionTower;
use crate::vector::FreeVector;
use crate::word::enumerate_words;

use super::context_level;

/// Largest `n` for which `I(n)` is materialized word by word.
pub const IDEAL_WORDS_MAX_N: u32 = 12;

struct Window {
    offset: u32,
    maps: ContextMaps,
    functionals: Vec<SparseRow>,
}

/// Membership test for `I(n)` at one degree.
pub struct IdealOracle<'a> {
    tower: &'a ProjectionTower,
    n: u32,
    level: u32,
    windows: Vec<Window>,
}

/// Outcome of one placement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WindowCheck {
    /// Length of the word to the left of `v`.
    pub offset: u32,
    /// Block levels of the slot, left to right.
    pub blocks: Vec<u32>,
    pub zdim: usize,
    pub functionals: usize,
    pub vanished: bool,
}

/// The full trail of a membership decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub degree: u32,
    /// Level whose halves carry the test: the ambient degree is `2^level`.
    pub level: u32,
    pub windows: Vec<WindowCheck>,
    pub member: bool,
}

impl<'a> IdealOracle<'a> {
    pub fn new(tower: &'a ProjectionTower, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("the ideal has no degree-0 part".into()));
        }
        let level = context_level(n) + 1;
        if level > tower.max_level() {
            return Err(Error::Depth { needed: level, built: tower.max_level() });
        }
        let total = 1u32 << level;
        let field = tower.field();
        let windows = (0..=total - n)
            .map(|offset| {
                let maps = ContextMaps::build(tower, level, Top::Pair, &[SlotRange { start: offset, len: n }])?;
                let functionals = maps.functionals(field);
                Ok(Window { offset, maps, functionals })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealOracle { tower, n, level, windows })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    fn window_vanishes(&self, w: &Window, z: &[u32]) -> bool {
        let field = self.tower.field();
        w.functionals.iter().all(|phi| phi.iter().fold(0u32, |acc, &(c, x)| field.mul_add(acc, x, z[c as usize])) == 0)
    }

    pub fn contains(&self, v: &FreeVector) -> Result<bool> {
        for w in &self.windows {
            let z = w.maps.slot_image(self.tower, 0, v)?;
            if !self.window_vanishes(w, &z) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Like [`contains`](Self::contains) but checks every placement and
    /// records each one.
    pub fn certify(&self, v: &FreeVector) -> Result<Certificate> {
        let mut windows = Vec::with_capacity(self.windows.len());
        for w in &self.windows {
            let z = w.maps.slot_image(self.tower, 0, v)?;
            windows.push(WindowCheck {
                offset: w.offset,
                blocks: w.maps.slot_blocks(0).iter().map(|b| b.level).collect(),
                zdim: w.maps.zdim,
                functionals: w.functionals.len(),
                vanished: self.window_vanishes(w, &z),
            });
        }
        let member = windows.iter().all(|c| c.vanished);
        Ok(Certificate { degree: self.n, level: self.level, windows, member })
    }

    /// All functionals of all placements evaluated on the words of `A(n)`,
    /// reduced.
    fn word_functionals(&self) -> Result<RowReducer> {
        if self.n > IDEAL_WORDS_MAX_N {
            return Err(Error::Capacity { degree: self.n, what: format!("I(n) is materialized up to n = {IDEAL_WORDS_MAX_N}") });
        }
        let field = self.tower.field();
        let mut r = RowReducer::new(*field);
        for w in &self.windows {
            let mut rows: Vec<SparseRow> = vec![Vec::new(); w.functionals.len()];
            for word in enumerate_words(self.n)? {
                let z = w.maps.word_image(self.tower, 0, &word);
                for (row, phi) in rows.iter_mut().zip(&w.functionals) {
                    let x = phi.iter().fold(0u32, |acc, &(c, a)| field.mul_add(acc, a, z[c as usize]));
                    if x != 0 {
                        row.push((word.index(), x));
                    }
                }
            }
            for row in rows {
                r.insert(row);
            }
        }
        Ok(r)
    }

    /// `I(n)` as a subspace of `A(n)`.
    pub fn component(&self) -> Result<EchelonSubspace> {
        let r = self.word_functionals()?;
        let rows = r.rows().map(|row| crate::linalg::sparse_to_dense(row, 1usize << self.n)).collect();
        Ok(word_kernel(self.tower.field(), self.n, rows))
    }

    /// `dim A(n) / I(n)`.
    pub fn quotient_dim(&self) -> Result<usize> {
        Ok(self.word_functionals()?.rank())
    }
}

pub fn ideal_contains(tower: &ProjectionTower, v: &FreeVector) -> Result<bool> {
    IdealOracle::new(tower, v.degree())?.contains(v)
}

pub fn ideal_certificate(tower: &ProjectionTower, v: &FreeVector) -> Result<Certificate> {
    IdealOracle::new(tower, v.degree())?.certify(v)
}
