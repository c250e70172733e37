//! The tower of complementary pairs `U(2^n) ⊕ V(2^n) = A(2^n)` and the
//! projection `π_n` onto `V(2^n)` along `U(2^n)`.
//!
//! Only the small data is stored: each level keeps its word basis of `V`
//! and a quotient map from `V(2^{n-1}) ⊗ V(2^{n-1})` coordinates (index
//! `a * d + b` for the product of basis words `a` and `b`) onto `V(2^n)`
//! coordinates. Since `U A + A U` is the kernel of `π ⊗ π`, the projection
//! of a word is obtained by projecting its halves and applying the map.

pub mod context;
pub mod oracle;
pub mod params;
pub mod verify;

use serde::{Deserialize, Serialize};

use crate::echelon::EchelonSubspace;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{dense_to_sparse, kron_vec, Mat, RowReducer, SparseRow};
use crate::vector::FreeVector;
use crate::word::Word;

pub use context::{family_span, CoordSubspace, Segment};
pub use params::{t_set, RelationSlot, RelationSource, SlotSpec, TowerParams, TowerSpec, MAX_LEVEL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "ROOT")]
    Root,
    I,
    II,
    III,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    level: u32,
    case: CaseTag,
    basis: Vec<Word>,
    /// Product coordinates of the basis words (Cases II and III).
    kept: Vec<usize>,
    /// Reduced echelon basis, in product coordinates, of the part of
    /// `V ⊗ V` sent to zero: `w_2 V` in Case II, `Y` in Case III.
    kernel: Vec<SparseRow>,
    /// `dim V(2^n) x dim V(2^{n-1})^2`; absent for ROOT and Case I.
    quotient: Option<Mat>,
}

impl TowerLevel {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn case(&self) -> CaseTag {
        self.case
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn kernel_rows(&self) -> &[SparseRow] {
        &self.kernel
    }

    /// `(w_1, w_2)` for Cases II and III.
    pub fn chosen_words(&self) -> Option<(Word, Word)> {
        match self.case {
            CaseTag::II => {
                Some((self.basis[0].slice(0, 1 << (self.level - 1)), self.basis[1].slice(1 << (self.level - 1), 1 << (self.level - 1))))
            }
            CaseTag::III => Some((self.basis[0], self.basis[1])),
            _ => None,
        }
    }

    /// Applies the level map to a product-coordinate vector.
    pub fn apply(&self, field: &FieldSpec, vv: &[u32]) -> Vec<u32> {
        match &self.quotient {
            Some(q) => q.mul_vec(field, vv),
            None => vv.to_vec(),
        }
    }

    pub fn quotient(&self) -> Option<&Mat> {
        self.quotient.as_ref()
    }
}

/// Greedy choice for Case III: the two order-least product coordinates
/// independent of `ys` (and of each other), and the kernel
/// `span(ys) + span{e_c : c not a pivot of span(ys, e_{c1}, e_{c2})}`.
pub fn case_three_choice(field: &FieldSpec, dim: usize, ys: &[Vec<u32>]) -> Result<(Vec<usize>, Vec<SparseRow>)> {
    let mut span = RowReducer::new(*field);
    for y in ys {
        span.insert(dense_to_sparse(y));
    }
    let y_rank = span.rank();
    let mut kept = Vec::with_capacity(2);
    for c in 0..dim {
        if kept.len() == 2 {
            break;
        }
        if span.insert(vec![(c as u128, 1)]) {
            kept.push(c);
        }
    }
    if kept.len() < 2 {
        return Err(Error::Internal(format!("only {} free product coordinates beside {y_rank} relations", kept.len())));
    }
    let mut kernel = RowReducer::new(*field);
    for y in ys {
        kernel.insert(dense_to_sparse(y));
    }
    for c in 0..dim {
        if !span.is_pivot(c as u128) {
            kernel.insert(vec![(c as u128, 1)]);
        }
    }
    Ok((kept, kernel.into_rows()))
}

/// Matrix of the projection of product coordinates onto `span{e_c : c in
/// kept}` along the span of `kernel`, in the basis `kept`.
pub fn quotient_matrix(field: &FieldSpec, dim: usize, kernel: &[SparseRow], kept: &[usize]) -> Result<Mat> {
    let red = RowReducer::from_rref(*field, kernel.iter().cloned());
    let free: Vec<u128> = (0..dim as u128).filter(|&c| !red.is_pivot(c)).collect();
    if free.len() != kept.len() || red.rank() + kept.len() != dim {
        return Err(Error::Internal(format!(
            "kernel of rank {} leaves {} free coordinates for {} kept",
            red.rank(),
            free.len(),
            kept.len()
        )));
    }
    let pos = |c: u128| free.binary_search(&c).expect("residual on free coordinate");
    // residuals of the kept coordinates, tagged to read off the solution
    let r = kept.len();
    let tag = dim as u128;
    let mut solve = RowReducer::new(*field);
    for (k, &c) in kept.iter().enumerate() {
        let mut row: SparseRow = red.reduce(vec![(c as u128, 1)]).into_iter().map(|(i, v)| (pos(i) as u128, v)).collect();
        row.push((tag + k as u128, 1));
        if !solve.insert(row) {
            return Err(Error::Internal("kept coordinates are dependent modulo the kernel".into()));
        }
    }
    let mut q = Mat::zeros(r, dim);
    for c in 0..dim {
        let res: SparseRow = red.reduce(vec![(c as u128, 1)]).into_iter().map(|(i, v)| (pos(i) as u128, v)).collect();
        let left = solve.reduce(res);
        // left = -(sum alpha_k tag_k)
        for (i, v) in left {
            if i < tag {
                return Err(Error::Internal("residual outside the kept span".into()));
            }
            q.set((i - tag) as usize, c, field.neg(v));
        }
    }
    Ok(q)
}

/// Levels `0..=K` of the tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionTower {
    field: FieldSpec,
    levels: Vec<TowerLevel>,
    t_levels: Vec<u32>,
    /// Materialized relation spaces, by slot position.
    relations: Vec<Option<EchelonSubspace>>,
    params: Option<TowerParams>,
}

impl ProjectionTower {
    pub fn build(params: &TowerParams) -> Result<Self> {
        params.validate()?;
        let field = params.field;
        let k_max = params.max_level;
        let mut relations: Vec<Option<EchelonSubspace>> = vec![None; params.slots.len()];
        let mut levels = vec![TowerLevel {
            level: 0,
            case: CaseTag::Root,
            basis: vec![Word::x(), Word::y()],
            kept: Vec::new(),
            kernel: Vec::new(),
            quotient: None,
        }];
        let mut tower = ProjectionTower {
            field,
            levels: Vec::new(),
            t_levels: (0..=k_max + 1).filter(|&n| params.in_t(n)).collect(),
            relations: Vec::new(),
            params: Some(params.clone()),
        };
        for n in 0..k_max {
            let prev = &levels[n as usize];
            let d = prev.dim();
            let dd = d * d;
            let product_word = |c: usize| prev.basis[c / d].concat(&prev.basis[c % d]).expect("length bounded by MAX_LEVEL");
            let level = match (params.in_t(n), params.in_t(n + 1)) {
                (true, true) => TowerLevel {
                    level: n + 1,
                    case: CaseTag::I,
                    basis: (0..dd).map(product_word).collect(),
                    kept: Vec::new(),
                    kernel: Vec::new(),
                    quotient: None,
                },
                (false, _) => {
                    if d != 2 {
                        return Err(Error::Internal(format!("level {n} lies outside T but has dimension {d}")));
                    }
                    // w_1 = basis[0], w_2 = basis[1]; keep w_1 w_1, w_1 w_2 and kill w_2 V
                    let kept = vec![0, 1];
                    let kernel: Vec<SparseRow> = (d..dd).map(|c| vec![(c as u128, 1)]).collect();
                    let quotient = quotient_matrix(&field, dd, &kernel, &kept)?;
                    TowerLevel {
                        level: n + 1,
                        case: CaseTag::II,
                        basis: kept.iter().map(|&c| product_word(c)).collect(),
                        kept,
                        kernel,
                        quotient: Some(quotient),
                    }
                }
                (true, false) => {
                    let k =
                        params.slot_at(n + 1).ok_or_else(|| Error::Internal(format!("no relation slot ends a ramp at level {}", n + 1)))?;
                    let w = params.slots[k].materialize(n + 1, &field)?;
                    params.check_relation_dim(k, w.dim())?;
                    tower.levels = levels.clone();
                    let ys: Vec<Vec<u32>> = w.rows().iter().map(|x| tower.project_pair(n, x)).collect::<Result<_>>()?;
                    let (kept, kernel) = case_three_choice(&field, dd, &ys)?;
                    let quotient = quotient_matrix(&field, dd, &kernel, &kept)?;
                    relations[k] = Some(w);
                    TowerLevel {
                        level: n + 1,
                        case: CaseTag::III,
                        basis: kept.iter().map(|&c| product_word(c)).collect(),
                        kept,
                        kernel,
                        quotient: Some(quotient),
                    }
                }
            };
            levels.push(level);
        }
        tower.levels = levels;
        tower.relations = relations;
        Ok(tower)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn max_level(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn levels(&self) -> &[TowerLevel] {
        &self.levels
    }

    pub fn level(&self, k: u32) -> Result<&TowerLevel> {
        self.levels.get(k as usize).ok_or(Error::Depth { needed: k, built: self.levels.len() as u32 })
    }

    pub fn dim(&self, k: u32) -> usize {
        self.levels[k as usize].dim()
    }

    /// Levels `<= K + 1` that lie in `T`.
    pub fn t_levels(&self) -> &[u32] {
        &self.t_levels
    }

    pub fn in_t(&self, n: u32) -> bool {
        self.t_levels.contains(&n)
    }

    pub fn params(&self) -> Option<&TowerParams> {
        self.params.as_ref()
    }

    /// Relation spaces that were reached by the build, as `(slot, W_i)`.
    pub fn relations(&self) -> impl Iterator<Item = (usize, &EchelonSubspace)> {
        self.relations.iter().enumerate().filter_map(|(k, w)| w.as_ref().map(|w| (k, w)))
    }

    /// Records `w` as the relation space of a slot without rebuilding;
    /// lets the condition suite be run against relations the tower was not
    /// built for.
    pub fn attach_relation(&mut self, slot: usize, w: EchelonSubspace) {
        if self.relations.len() <= slot {
            self.relations.resize(slot + 1, None);
        }
        self.relations[slot] = Some(w);
    }

    /// `π_k(w)` in `V(2^k)` coordinates.
    pub fn project_word(&self, k: u32, w: &Word) -> Result<Vec<u32>> {
        if w.len() != 1 << k {
            return Err(Error::DegreeMismatch { expected: 1 << k, found: w.len() });
        }
        self.level(k)?;
        Ok(self.project_word_unchecked(k, w))
    }

    pub(crate) fn project_word_unchecked(&self, k: u32, w: &Word) -> Vec<u32> {
        if k == 0 {
            return if w.letter(0) { vec![0, 1] } else { vec![1, 0] };
        }
        let half = 1 << (k - 1);
        let (l, r) = w.split_at(half);
        let a = self.project_word_unchecked(k - 1, &l);
        let b = self.project_word_unchecked(k - 1, &r);
        self.levels[k as usize].apply(&self.field, &kron_vec(&self.field, &a, &b))
    }

    pub fn project(&self, k: u32, v: &FreeVector) -> Result<Vec<u32>> {
        if v.degree() != 1 << k {
            return Err(Error::DegreeMismatch { expected: 1 << k, found: v.degree() });
        }
        let mut out = vec![0u32; self.level(k)?.dim()];
        for (w, &c) in v.terms() {
            for (o, x) in out.iter_mut().zip(self.project_word_unchecked(k, w)) {
                *o = self.field.mul_add(*o, c, x);
            }
        }
        Ok(out)
    }

    /// `(π_k ⊗ π_k)(v)` for `v` of degree `2^{k+1}`, in product coordinates.
    pub fn project_pair(&self, k: u32, v: &FreeVector) -> Result<Vec<u32>> {
        let half = 1u32 << k;
        if v.degree() != 2 * half {
            return Err(Error::DegreeMismatch { expected: 2 * half, found: v.degree() });
        }
        let d = self.level(k)?.dim();
        let mut out = vec![0u32; d * d];
        for (w, &c) in v.terms() {
            let (l, r) = w.split_at(half);
            let t = kron_vec(&self.field, &self.project_word_unchecked(k, &l), &self.project_word_unchecked(k, &r));
            for (o, x) in out.iter_mut().zip(t) {
                *o = self.field.mul_add(*o, c, x);
            }
        }
        Ok(out)
    }

    pub fn to_dump(&self) -> TowerDump {
        TowerDump {
            p: self.field.characteristic(),
            t_levels: self.t_levels.clone(),
            levels: self
                .levels
                .iter()
                .map(|l| LevelDump {
                    n: l.level,
                    case: l.case,
                    basis: l.basis.clone(),
                    w2: match l.case {
                        CaseTag::II => Some(l.basis[1].slice(1 << (l.level - 1), 1 << (l.level - 1))),
                        _ => None,
                    },
                    kept: l.kept.clone(),
                    kernel: l.kernel.iter().map(|r| r.iter().map(|&(c, v)| (c as usize, v)).collect()).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a tower from its dump; the quotient maps are recomputed.
    pub fn from_dump(dump: &TowerDump) -> Result<Self> {
        let field = FieldSpec::new(dump.p as u64)?;
        let mut levels: Vec<TowerLevel> = Vec::with_capacity(dump.levels.len());
        for (k, l) in dump.levels.iter().enumerate() {
            if l.n as usize != k {
                return Err(Error::Parse(format!("level {} listed at position {k}", l.n)));
            }
            let kernel: Vec<SparseRow> = l.kernel.iter().map(|r| r.iter().map(|&(c, v)| (c as u128, v)).collect()).collect();
            let quotient = match l.case {
                CaseTag::Root | CaseTag::I => None,
                CaseTag::II | CaseTag::III => {
                    let d = levels.last().ok_or_else(|| Error::Parse("non-root first level".into()))?.dim();
                    Some(quotient_matrix(&field, d * d, &kernel, &l.kept)?)
                }
            };
            levels.push(TowerLevel { level: l.n, case: l.case, basis: l.basis.clone(), kept: l.kept.clone(), kernel, quotient });
        }
        if levels.is_empty() {
            return Err(Error::Parse("empty tower".into()));
        }
        Ok(ProjectionTower { field, levels, t_levels: dump.t_levels.clone(), relations: Vec::new(), params: None })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDump {
    pub n: u32,
    pub case: CaseTag,
    pub basis: Vec<Word>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w2: Option<Word>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub kept: Vec<usize>,
    /// Rows of `w_2 V` (Case II) or `Y` (Case III) as `(coordinate, coefficient)`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub kernel: Vec<Vec<(usize, u32)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDump {
    pub p: u32,
    pub t_levels: Vec<u32>,
    pub levels: Vec<LevelDump>,
}
