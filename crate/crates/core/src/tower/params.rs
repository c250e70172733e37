//! Tower parameters: the sequences `f`, `g`, the relation slots, and the
//! ramp set `T`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::echelon::EchelonSubspace;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::power::{build_y, WordSet};
use crate::vector::FreeVector;
use crate::word::{Word, MAX_WORD_LEN};

/// Levels above this would need words longer than [`MAX_WORD_LEN`].
pub const MAX_LEVEL: u32 = 7;

/// Most elements `t_set` will list.
const MAX_T_ELEMENTS: usize = 1 << 20;

/// Where the relations `W_i` of degree `2^{f(i)}` come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationSource {
    Explicit(EchelonSubspace),
    /// `Y(S, 2^{f(i)})`, built only when the slot is reached.
    Recipe(WordSet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSlot {
    pub index: usize,
    pub source: RelationSource,
}

impl RelationSlot {
    pub fn explicit(index: usize, w: EchelonSubspace) -> Self {
        RelationSlot { index, source: RelationSource::Explicit(w) }
    }

    pub fn recipe(index: usize, s: WordSet) -> Self {
        RelationSlot { index, source: RelationSource::Recipe(s) }
    }

    /// The relation space in degree `2^f`.
    pub fn materialize(&self, f: u32, field: &FieldSpec) -> Result<EchelonSubspace> {
        if f > MAX_LEVEL {
            return Err(Error::WordTooLong(1u32.checked_shl(f).unwrap_or(u32::MAX)));
        }
        let degree = 1u32 << f;
        match &self.source {
            RelationSource::Explicit(w) => {
                if w.degree() != degree {
                    return Err(Error::DegreeMismatch { expected: degree, found: w.degree() });
                }
                if w.field() != field {
                    return Err(Error::InvalidParams(format!("relation {} is over another field", self.index)));
                }
                Ok(w.clone())
            }
            RelationSource::Recipe(s) => build_y(s, degree, field),
        }
    }
}

/// `2^{2^g} - 2`, the largest allowed dimension of `W_i`.
pub fn relation_dim_bound(g: &BigUint) -> Option<BigUint> {
    let e = g.to_u32().filter(|&e| e < 32)?;
    Some((BigUint::one() << (1u64 << e)) - 2u32)
}

/// Checks `f(i-1) < f(i) - g(i) - 1` for every `i`, reading `f(0)` as `-1`
/// so that a ramp may start at level 0.
pub fn check_ramp_spacing(f: &[BigUint], g: &[BigUint]) -> Result<()> {
    if f.len() != g.len() {
        return Err(Error::InvalidParams(format!("f has {} entries but g has {}", f.len(), g.len())));
    }
    let mut prev = BigInt::from(-1);
    for (i, (fi, gi)) in f.iter().zip(g).enumerate() {
        if fi.is_zero() || gi.is_zero() {
            return Err(Error::InvalidParams(format!("f({0}) and g({0}) must be positive", i + 1)));
        }
        let start = BigInt::from(fi.clone()) - BigInt::from(gi.clone()) - 1;
        if prev >= start {
            return Err(Error::InvalidParams(format!(
                "ramp spacing fails at i = {}: f({}) = {prev} is not below f({}) - g({}) - 1 = {start}",
                i + 1,
                i,
                i + 1,
                i + 1
            )));
        }
        prev = BigInt::from(fi.clone());
    }
    Ok(())
}

/// Union over `i <= i_max` of `{f(i) - g(i) - 1, ..., f(i) - 1}`.
pub fn t_set(f: &[BigUint], g: &[BigUint], i_max: usize) -> Result<BTreeSet<BigUint>> {
    check_ramp_spacing(f, g)?;
    let mut out = BTreeSet::new();
    for (fi, gi) in f.iter().zip(g).take(i_max) {
        let len = gi
            .to_usize()
            .filter(|&l| out.len() + l < MAX_T_ELEMENTS)
            .ok_or(Error::Capacity { degree: 0, what: format!("ramp of length {} in T", gi + 1u32) })?;
        let start = fi - gi - 1u32;
        for k in 0..=len {
            out.insert(&start + k);
        }
    }
    Ok(out)
}

/// Inputs of a tower build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerParams {
    pub f: Vec<BigUint>,
    pub g: Vec<BigUint>,
    pub slots: Vec<RelationSlot>,
    pub max_level: u32,
    pub field: FieldSpec,
}

impl TowerParams {
    pub fn new(f: Vec<BigUint>, g: Vec<BigUint>, slots: Vec<RelationSlot>, max_level: u32, field: FieldSpec) -> Result<Self> {
        let p = TowerParams { f, g, slots, max_level, field };
        p.validate()?;
        Ok(p)
    }

    /// Small-integer convenience constructor.
    pub fn small(f: &[u64], g: &[u64], slots: Vec<RelationSlot>, max_level: u32, field: FieldSpec) -> Result<Self> {
        Self::new(f.iter().map(|&x| BigUint::from(x)).collect(), g.iter().map(|&x| BigUint::from(x)).collect(), slots, max_level, field)
    }

    pub fn validate(&self) -> Result<()> {
        check_ramp_spacing(&self.f, &self.g)?;
        if self.max_level > MAX_LEVEL {
            return Err(Error::Capacity {
                degree: 1u32.checked_shl(self.max_level).unwrap_or(u32::MAX),
                what: format!("tower levels above {MAX_LEVEL}"),
            });
        }
        if self.slots.len() != self.f.len() {
            return Err(Error::InvalidParams(format!("{} relation slots for {} entries of f", self.slots.len(), self.f.len())));
        }
        for (k, slot) in self.slots.iter().enumerate() {
            if slot.index != k + 1 {
                return Err(Error::InvalidParams(format!("relation slot {} listed at position {}", slot.index, k + 1)));
            }
            if let RelationSource::Explicit(w) = &slot.source {
                let f = self.f[k].to_u32().filter(|&f| f <= MAX_LEVEL);
                if f.map(|f| 1u32 << f) != Some(w.degree()) {
                    return Err(Error::InvalidParams(format!("W_{} has degree {}, not 2^f({})", k + 1, w.degree(), k + 1)));
                }
                self.check_relation_dim(k, w.dim())?;
            }
        }
        Ok(())
    }

    pub(crate) fn check_relation_dim(&self, k: usize, dim: usize) -> Result<()> {
        if let Some(bound) = relation_dim_bound(&self.g[k]) {
            if BigUint::from(dim) > bound {
                return Err(Error::InvalidParams(format!("dim W_{} = {dim} exceeds 2^(2^{}) - 2 = {bound}", k + 1, self.g[k])));
            }
        }
        Ok(())
    }

    /// Whether level `n` lies in `T`.
    pub fn in_t(&self, n: u32) -> bool {
        let n = BigUint::from(n);
        self.f.iter().zip(&self.g).any(|(fi, gi)| {
            let end = fi - 1u32;
            fi > gi && (fi - gi - 1u32) <= n && n <= end
        })
    }

    /// Index (0-based) of the slot with `f(i) = n`, if any.
    pub fn slot_at(&self, n: u32) -> Option<usize> {
        let n = BigUint::from(n);
        self.f.iter().position(|fi| *fi == n)
    }
}

/// JSON form of a relation slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotSpec {
    Words(Vec<Word>),
    Vectors(Vec<String>),
    /// Comma-separated word set for `Y(S, 2^f)`.
    Recipe(String),
}

/// JSON form of [`TowerParams`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    #[serde(with = "crate::bignum::vec")]
    pub f: Vec<BigUint>,
    #[serde(with = "crate::bignum::vec")]
    pub g: Vec<BigUint>,
    pub slots: Vec<SlotSpec>,
}

impl TowerSpec {
    pub fn to_params(&self, max_level: u32, field: FieldSpec) -> Result<TowerParams> {
        let mut slots = Vec::with_capacity(self.slots.len());
        for (k, s) in self.slots.iter().enumerate() {
            let degree = || -> Result<u32> {
                self.f
                    .get(k)
                    .and_then(|f| f.to_u32())
                    .filter(|&f| f <= MAX_LEVEL)
                    .map(|f| 1u32 << f)
                    .ok_or_else(|| Error::InvalidParams(format!("explicit W_{} needs f({}) <= {MAX_LEVEL}", k + 1, k + 1)))
            };
            let source = match s {
                SlotSpec::Words(ws) => RelationSource::Explicit(EchelonSubspace::from_words(degree()?, field, ws)?),
                SlotSpec::Vectors(vs) => {
                    let d = degree()?;
                    let vs = vs.iter().map(|v| FreeVector::parse(v, &field, Some(d))).collect::<Result<Vec<_>>>()?;
                    RelationSource::Explicit(EchelonSubspace::reduce(d, field, &vs)?)
                }
                SlotSpec::Recipe(s) => RelationSource::Recipe(s.parse()?),
            };
            slots.push(RelationSlot { index: k + 1, source });
        }
        TowerParams::new(self.f.clone(), self.g.clone(), slots, max_level, field)
    }
}

const _: () = assert!(1u32 << MAX_LEVEL == MAX_WORD_LEN);
