//! Checks of the eight tower conditions and of the shifted-containment
//! property `A(q 2^m) U(2^m) A(2^p - (q+1) 2^m) ⊆ U(2^p)`.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::echelon::EchelonSubspace;
use crate::error::Result;
use crate::vector::FreeVector;
use crate::word::{enumerate_words, Word};

use super::context::{family_span, Segment};
use super::oracle::{explicit_levels, ORACLE_DEFAULT_DEGREE, ORACLE_EXTENDED_DEGREE};
use super::{CaseTag, ProjectionTower};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub k_max: u32,
    pub dense_max: u32,
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

struct Tally {
    name: &'static str,
    checks: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 16 {
            self.failures.push(what());
        }
    }

    fn finish(self) -> ConditionResult {
        ConditionResult { name: self.name.into(), passed: self.failures.is_empty(), checks: self.checks, failures: self.failures }
    }
}

/// Deterministic sample of word indices in `0..2^len`.
fn sample_words(len: u32, count: usize) -> Vec<Word> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ len as u64;
    let mut out = vec![Word::from_index(len, 0).unwrap()];
    let mask = if len >= 128 { u128::MAX } else { (1u128 << len) - 1 };
    while out.len() < count {
        let mut idx = 0u128;
        for _ in 0..2 {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            idx = (idx << 64) | (z ^ (z >> 31)) as u128;
        }
        out.push(Word::from_index(len, idx & mask).unwrap());
    }
    out
}

/// `w - sum_i π_k(w)_i b_i`, an element of `ker π_k`.
fn kernel_element(tower: &ProjectionTower, k: u32, w: &Word) -> Result<FreeVector> {
    let field = *tower.field();
    let coords = tower.project_word(k, w)?;
    let mut v = FreeVector::from_word(*w);
    for (c, b) in coords.iter().zip(tower.level(k)?.basis()) {
        if *c != 0 {
            v.add_term(&field, *b, field.neg(*c))?;
        }
    }
    Ok(v)
}

/// Runs the condition suite on levels `<= k_max`; conditions needing `U`
/// itself use the dense oracle up to degree 8 (16 when `extended`).
pub fn verify_conditions(tower: &ProjectionTower, k_max: u32, extended: bool) -> Result<ConditionReport> {
    let k_max = k_max.min(tower.max_level());
    let field = *tower.field();
    let cap = if extended { ORACLE_EXTENDED_DEGREE } else { ORACLE_DEFAULT_DEGREE };
    let dense_max = (0..=k_max).filter(|&k| (1u32 << k) <= cap).max().unwrap_or(0);
    let dense = explicit_levels(tower, dense_max, extended)?;
    let mut out = Vec::new();

    // (1) U ⊕ V = A
    let mut c = Tally::new("(1)");
    for (k, dl) in dense.iter().enumerate() {
        let v = EchelonSubspace::from_words(1 << k, field, &dl.v_basis)?;
        let total = 1usize << (1 << k);
        c.check(dl.u.sum(&v)?.dim() == total && dl.u.dim() + v.dim() == total, || {
            format!("level {k}: U + V is not direct or not everything")
        });
    }
    for k in 1..=k_max {
        let level = tower.level(k)?;
        if let Some(q) = level.quotient() {
            for (i, &col) in level.kept().iter().enumerate() {
                let ok = (0..q.rows).all(|r| q.get(r, col) == u32::from(r == i));
                c.check(ok, || format!("level {k}: quotient does not fix kept coordinate {col}"));
            }
        }
    }
    out.push(c.finish());

    // (2) dim V = 2 off T
    let mut c = Tally::new("(2)");
    for k in 0..=k_max {
        if !tower.in_t(k) {
            c.check(tower.dim(k) == 2, || format!("level {k} not in T has dim {}", tower.dim(k)));
        }
    }
    out.push(c.finish());

    // (3) doubling exponent along ramps
    let mut c = Tally::new("(3)");
    if let Some(p) = tower.params() {
        for (fi, gi) in p.f.iter().zip(&p.g) {
            let (Some(fi), Some(gi)) = (fi.to_u64(), gi.to_u64()) else { continue };
            let start = fi - gi - 1;
            for j in 0..=gi {
                let k = start + j;
                if k > k_max as u64 {
                    break;
                }
                let want = 1u128.checked_shl(1u32 << j).map(|x| x as usize);
                c.check(Some(tower.dim(k as u32)) == want, || format!("level {k} = ramp start + {j} has dim {}", tower.dim(k as u32)));
            }
        }
    }
    out.push(c.finish());

    // (4) word bases fixed by π
    let mut c = Tally::new("(4)");
    for k in 0..=k_max {
        for (i, b) in tower.level(k)?.basis().iter().enumerate() {
            let coords = tower.project_word(k, b)?;
            let ok = coords.iter().enumerate().all(|(j, &x)| x == u32::from(i == j));
            c.check(ok, || format!("level {k}: basis word {b} is not fixed"));
        }
        if let Some(dl) = dense.get(k as usize) {
            c.check(dl.v_basis == tower.level(k)?.basis(), || format!("level {k}: dense V basis differs"));
        }
    }
    out.push(c.finish());

    // (5) W_i ⊆ U(2^{f(i)})
    let mut c = Tally::new("(5)");
    for (slot, w) in tower.relations() {
        let k = w.degree().trailing_zeros();
        if k > k_max {
            continue;
        }
        for row in w.rows() {
            let zero = tower.project(k, &row)?.iter().all(|&x| x == 0);
            c.check(zero, || format!("W_{}: {row} survives projection", slot + 1));
            if let Some(dl) = dense.get(k as usize) {
                c.check(dl.u.contains(&row)?, || format!("W_{}: {row} outside dense U", slot + 1));
            }
        }
    }
    out.push(c.finish());

    // (6) A U + U A ⊆ U at the next level
    let mut c = Tally::new("(6)");
    for k in 0..k_max {
        let half = 1u32 << k;
        if let Some(dl) = dense.get(k as usize).filter(|_| 2 * half <= cap && k < dense_max) {
            let words: Vec<Word> = enumerate_words(half)?.collect();
            for u in dl.u.rows() {
                for a in &words {
                    let av = FreeVector::from_word(*a);
                    for prod in [u.mul(&field, &av)?, av.mul(&field, &u)?] {
                        let zero = tower.project(k + 1, &prod)?.iter().all(|&x| x == 0);
                        c.check(zero, || format!("level {}: {prod} not killed", k + 1));
                    }
                }
            }
        } else {
            for w in sample_words(half, 6) {
                let u = kernel_element(tower, k, &w)?;
                for pattern in [vec![Segment::Fixed(u.clone()), Segment::Free(half)], vec![Segment::Free(half), Segment::Fixed(u.clone())]]
                {
                    let span = family_span(tower, k + 1, &pattern)?;
                    c.check(span.dim() == 0, || format!("level {}: context of {u} not killed", k + 1));
                }
            }
        }
    }
    out.push(c.finish());

    // (7) V(2^{k+1}) ⊆ V(2^k) V(2^k)
    let mut c = Tally::new("(7)");
    for k in 0..k_max {
        let prev = tower.level(k)?.basis();
        for b in tower.level(k + 1)?.basis() {
            let (l, r) = b.split_at(1 << k);
            c.check(prev.contains(&l) && prev.contains(&r), || format!("level {}: {b} not a product of level-{k} basis words", k + 1));
        }
    }
    out.push(c.finish());

    // (8) witness w with w A(2^n) ⊆ U(2^{n+1}) off T
    let mut c = Tally::new("(8)");
    for n in 0..k_max {
        if tower.in_t(n) {
            continue;
        }
        let next = tower.level(n + 1)?;
        let witness = match (next.case(), next.chosen_words()) {
            (CaseTag::II, Some((_, w2))) => w2,
            _ => {
                c.check(false, || format!("level {} off T is not built by the doubling-free rule", n + 1));
                continue;
            }
        };
        let span = family_span(tower, n + 1, &[Segment::Fixed(FreeVector::from_word(witness)), Segment::Free(1 << n)])?;
        c.check(span.dim() == 0, || format!("level {n}: witness {witness} times A is not killed"));
    }
    out.push(c.finish());

    // shifted containment, densely where U(2^m) is known, else on sampled kernel elements
    let mut c = Tally::new("eq13");
    for p in 1..=k_max {
        for m in 0..p {
            let blocks = 1u32 << (p - m);
            let width = 1u32 << m;
            let us: Vec<FreeVector> = match dense.get(m as usize) {
                Some(dl) if (1u32 << p) <= cap => dl.u.rows(),
                _ => sample_words(width, 3).iter().map(|w| kernel_element(tower, m, w)).collect::<Result<_>>()?,
            };
            for q in 0..blocks {
                for u in us.iter().filter(|u| !u.is_zero()) {
                    let pattern = vec![Segment::Free(q * width), Segment::Fixed(u.clone()), Segment::Free((blocks - q - 1) * width)];
                    let pattern: Vec<Segment> = pattern.into_iter().filter(|s| !s.is_empty()).collect();
                    let span = family_span(tower, p, &pattern)?;
                    c.check(span.dim() == 0, || format!("p={p} m={m} q={q}: {u} escapes"));
                }
            }
        }
    }
    out.push(c.finish());

    Ok(ConditionReport { k_max, dense_max, conditions: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::tower::{RelationSlot, TowerParams};

    fn toy() -> ProjectionTower {
        let f = FieldSpec::gf2();
        let w = EchelonSubspace::from_words(4, f, &["xxxx".parse().unwrap()]).unwrap();
        ProjectionTower::build(&TowerParams::small(&[2], &[1], vec![RelationSlot::explicit(1, w)], 5, f).unwrap()).unwrap()
    }

    #[test]
    fn toy_tower_passes() {
        let r = verify_conditions(&toy(), 5, false).unwrap();
        for c in &r.conditions {
            assert!(c.passed, "{c:?}");
            assert!(c.checks > 0 || c.name == "(3)", "{c:?}");
        }
        assert_eq!(r.dense_max, 3);
    }

    #[test]
    fn corrupted_basis_fails_product_condition() {
        let plain = ProjectionTower::build(&TowerParams::small(&[], &[], vec![], 3, FieldSpec::gf2()).unwrap()).unwrap();
        assert!(verify_conditions(&plain, 3, false).unwrap().passed());
        let mut dump = plain.to_dump();
        dump.levels[1].basis[1] = "yy".parse().unwrap();
        let bad = ProjectionTower::from_dump(&dump).unwrap();
        let r = verify_conditions(&bad, 3, false).unwrap();
        assert!(!r.get("(7)").unwrap().passed);
    }

    #[test]
    fn foreign_relation_fails_containment() {
        let f = FieldSpec::gf2();
        let mut t = toy();
        t.attach_relation(0, EchelonSubspace::from_words(4, f, &["xxxy".parse().unwrap()]).unwrap());
        let r = verify_conditions(&t, 3, false).unwrap();
        assert!(!r.get("(5)").unwrap().passed);
    }

    #[test]
    fn samples_are_deterministic() {
        assert_eq!(sample_words(64, 5), sample_words(64, 5));
        assert_eq!(sample_words(128, 3).len(), 3);
    }
}
