//! Boundary spaces: `L(n)` is everything that falls into `U(2^{m+1})` when
//! followed by any word, `R(n)` the mirror image. Their complements are
//! picked greedily among products of `V` basis words along the binary
//! expansion of `n`.

use crate::echelon::EchelonSubspace;
use crate::error::{Error, Result};
use crate::linalg::RowReducer;
use crate::tower::context::{word_kernel, ContextMaps, SlotRange, Top};
use crate::tower::ProjectionTower;
use crate::word::Word;

use super::context_level;

/// Largest `n` for which the boundary spaces are materialized word by word.
pub const BOUNDARY_MAX_N: u32 = 14;

/// Which end of `A(2^{m+1})` the slot is glued to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `v · A(2^{m+1} - n)`: gives `L(n)`.
    Left,
    /// `A(2^{m+1} - n) · v`: gives `R(n)`.
    Right,
}

fn side_maps(tower: &ProjectionTower, n: u32, side: Side) -> Result<ContextMaps> {
    if n == 0 {
        return Err(Error::InvalidParams("boundary spaces need n >= 1".into()));
    }
    let k = context_level(n);
    let start = match side {
        Side::Left => 0,
        Side::Right => (1u32 << k) - n,
    };
    ContextMaps::build(tower, k, Top::Project, &[SlotRange { start, len: n }])
}

/// Complement data for one side, available at any `n` the tower reaches.
#[derive(Debug, Clone)]
pub struct ChainComplement {
    pub n: u32,
    pub side: Side,
    /// Levels of the blocks in left-to-right order.
    pub chain_levels: Vec<u32>,
    /// `dim` of the full `V` product along the chain.
    pub chain_dim: usize,
    /// Mixed-radix indices of the chosen chain words.
    pub chosen: Vec<usize>,
}

impl ChainComplement {
    pub fn dim(&self) -> usize {
        self.chosen.len()
    }

    /// Chosen words, each a product of `V` basis words along the chain.
    pub fn words(&self, tower: &ProjectionTower) -> Vec<Word> {
        self.chosen.iter().map(|&i| chain_word(tower, &self.chain_levels, i)).collect()
    }
}

/// The product of basis words at mixed-radix index `idx` (first block most
/// significant), which is also its position in word order.
pub fn chain_word(tower: &ProjectionTower, levels: &[u32], mut idx: usize) -> Word {
    let mut parts = Vec::with_capacity(levels.len());
    for &l in levels.iter().rev() {
        let d = tower.dim(l);
        parts.push(tower.level(l).expect("chain level").basis()[idx % d]);
        idx /= d;
    }
    parts.iter().rev().fold(Word::from_letters(&[]).expect("empty word"), |acc, w| acc.concat(w).expect("chain length"))
}

/// Greedy complement: every chain word maps to a unit vector of `Z`, so the
/// chain words independent modulo `L(n)` (or `R(n)`) are exactly the pivot
/// columns of the reduced functionals.
pub fn chain_complement(tower: &ProjectionTower, n: u32, side: Side) -> Result<ChainComplement> {
    let maps = side_maps(tower, n, side)?;
    let blocks = maps.slot_blocks(0);
    let chain_levels: Vec<u32> = blocks.iter().map(|b| b.level).collect();
    let functionals = maps.functionals(tower.field());
    let chosen = functionals.iter().map(|r| r[0].0 as usize).collect();
    Ok(ChainComplement { n, side, chain_levels, chain_dim: maps.zdim, chosen })
}

/// `L(n)`, `R(n)` and greedy complements `L'(n)`, `R'(n)`.
#[derive(Debug, Clone)]
pub struct BoundaryQuad {
    pub n: u32,
    pub left: EchelonSubspace,
    pub right: EchelonSubspace,
    pub left_comp: EchelonSubspace,
    pub right_comp: EchelonSubspace,
    /// Block levels of `L'(n)`'s chain (descending).
    pub left_chain: Vec<u32>,
    /// Block levels of `R'(n)`'s chain (ascending).
    pub right_chain: Vec<u32>,
}

/// `L(n)` or `R(n)` as the kernel of the word functionals of its context.
pub fn boundary_space(tower: &ProjectionTower, n: u32, side: Side) -> Result<EchelonSubspace> {
    if n > BOUNDARY_MAX_N {
        return Err(Error::Capacity { degree: n, what: format!("boundary spaces are materialized up to n = {BOUNDARY_MAX_N}") });
    }
    let maps = side_maps(tower, n, side)?;
    Ok(word_kernel(tower.field(), n, maps.functionals_on_words(tower)?))
}

pub fn boundary_spaces(tower: &ProjectionTower, n: u32) -> Result<BoundaryQuad> {
    let field = *tower.field();
    let left = boundary_space(tower, n, Side::Left)?;
    let right = boundary_space(tower, n, Side::Right)?;
    let lc = chain_complement(tower, n, Side::Left)?;
    let rc = chain_complement(tower, n, Side::Right)?;
    let left_comp = EchelonSubspace::from_words(n, field, &lc.words(tower))?;
    let right_comp = EchelonSubspace::from_words(n, field, &rc.words(tower))?;
    Ok(BoundaryQuad { n, left, right, left_comp, right_comp, left_chain: lc.chain_levels, right_chain: rc.chain_levels })
}

/// `dim(chain + space)` where the chain is the full product of `V` spaces
/// over `levels`; equals `2^n` exactly when the chain completes `space`.
pub fn chain_sum_dim(tower: &ProjectionTower, levels: &[u32], space: &EchelonSubspace) -> usize {
    let total: usize = levels.iter().map(|&l| tower.dim(l)).product();
    let mut r: RowReducer = space.reducer();
    for i in 0..total {
        r.insert(vec![(chain_word(tower, levels, i).index(), 1)]);
    }
    r.rank()
}

/// Whether every basis word of `sub` is a product of `V` basis words along
/// `levels`.
pub fn inside_chain(tower: &ProjectionTower, levels: &[u32], sub: &EchelonSubspace) -> bool {
    sub.rows().iter().all(|row| {
        row.support().all(|w| {
            let mut at = 0;
            levels.iter().all(|&l| {
                let piece = w.slice(at, 1 << l);
                at += 1 << l;
                tower.level(l).map(|lv| lv.basis().binary_search(&piece).is_ok()).unwrap_or(false)
            })
        })
    })
}

/// Does the `V` chain plus `space` fill `A(n)`?
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainSpanCheck {
    pub n: u32,
    pub ascending_plus_right: usize,
    pub descending_plus_left: usize,
    pub left_comp_inside: bool,
    pub right_comp_inside: bool,
    pub passed: bool,
}

pub fn check_chain_span(tower: &ProjectionTower, n: u32) -> Result<ChainSpanCheck> {
    let q = boundary_spaces(tower, n)?;
    let full = 1usize << n;
    let ascending_plus_right = chain_sum_dim(tower, &q.right_chain, &q.right);
    let descending_plus_left = chain_sum_dim(tower, &q.left_chain, &q.left);
    let left_comp_inside = inside_chain(tower, &q.left_chain, &q.left_comp);
    let right_comp_inside = inside_chain(tower, &q.right_chain, &q.right_comp);
    let direct = q.left.dim() + q.left_comp.dim() == full
        && q.right.dim() + q.right_comp.dim() == full
        && q.left.sum(&q.left_comp)?.dim() == full
        && q.right.sum(&q.right_comp)?.dim() == full;
    let passed = ascending_plus_right == full && descending_plus_left == full && left_comp_inside && right_comp_inside && direct;
    Ok(ChainSpanCheck { n, ascending_plus_right, descending_plus_left, left_comp_inside, right_comp_inside, passed })
}
