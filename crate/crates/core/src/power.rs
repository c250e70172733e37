//! Spaces `Y` of degree `n` whose shifted copies absorb every `2n`-th power
//! of elements spanned by a finite word set, and a brute-force check of that
//! absorption.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::echelon::{vector_to_row, EchelonSubspace};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::SparseRow;
use crate::vector::FreeVector;
use crate::word::{enumerate_words, Word, MAX_WORD_LEN};

/// A finite set of distinct nonempty words, kept in word order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Word>", into = "Vec<Word>")]
pub struct WordSet {
    words: Vec<Word>,
}

impl WordSet {
    pub fn new(mut words: Vec<Word>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidParams("word set must be nonempty".into()));
        }
        if words.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidParams("word set contains the empty word".into()));
        }
        words.sort();
        if words.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidParams("word set contains a repeated word".into()));
        }
        Ok(WordSet { words })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn card(&self) -> usize {
        self.words.len()
    }

    /// Length of the longest word.
    pub fn deg(&self) -> u32 {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn total_len(&self) -> u32 {
        self.words.iter().map(|w| w.len()).sum()
    }

    /// `sum_e lambda_e w_e` split by degree.
    pub fn combination(&self, field: &FieldSpec, lambda: &[u32]) -> BTreeMap<u32, FreeVector> {
        let mut out: BTreeMap<u32, FreeVector> = BTreeMap::new();
        for (w, &c) in self.words.iter().zip(lambda) {
            out.entry(w.len()).or_insert_with(|| FreeVector::zero(w.len())).add_term(field, *w, c).expect("degree matches");
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl TryFrom<Vec<Word>> for WordSet {
    type Error = Error;
    fn try_from(words: Vec<Word>) -> Result<Self> {
        WordSet::new(words)
    }
}

impl From<WordSet> for Vec<Word> {
    fn from(s: WordSet) -> Vec<Word> {
        s.words
    }
}

impl FromStr for WordSet {
    type Err = Error;

    /// Comma-separated words, e.g. `"x,xy"`.
    fn from_str(s: &str) -> Result<Self> {
        let words = s.split(',').map(|t| t.trim()).filter(|t| !t.is_empty()).map(|t| t.parse::<Word>()).collect::<Result<Vec<_>>>()?;
        WordSet::new(words)
    }
}

impl fmt::Display for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}

/// Multiplicities `(i_1, ..., i_d)` of the words of a [`WordSet`].
pub type ExponentSeq = Vec<u32>;

/// All `seq` with `sum i_e = m` and `sum i_e |w_e| = n - j`, in
/// lexicographic order.
pub fn exponent_sequences(s: &WordSet, n: u32, m: u32, j: u32) -> Vec<ExponentSeq> {
    let mut out = Vec::new();
    if j > n {
        return out;
    }
    let lens: Vec<u32> = s.words().iter().map(|w| w.len()).collect();
    let mut cur = vec![0u32; lens.len()];
    fn go(lens: &[u32], e: usize, left_count: u32, left_len: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentSeq>) {
        if e + 1 == lens.len() {
            if left_count * lens[e] == left_len {
                cur[e] = left_count;
                out.push(cur.clone());
            }
            return;
        }
        for i in 0..=left_count {
            if i * lens[e] > left_len {
                break;
            }
            cur[e] = i;
            go(lens, e + 1, left_count - i, left_len - i * lens[e], cur, out);
        }
        cur[e] = 0;
    }
    go(&lens, 0, m, n - j, &mut cur, &mut out);
    out
}

/// Sum over all orderings of the multiset `{w_e repeated i_e times}` of
/// their concatenations, with coefficients in the field.
pub fn coeff_c(s: &WordSet, seq: &[u32], m: u32, field: &FieldSpec) -> Result<FreeVector> {
    if seq.len() != s.card() || seq.iter().sum::<u32>() != m {
        return Err(Error::InvalidParams(format!("exponent sequence {seq:?} does not sum to {m}")));
    }
    let degree: u32 = seq.iter().zip(s.words()).map(|(i, w)| i * w.len()).sum();
    if degree > MAX_WORD_LEN {
        return Err(Error::WordTooLong(degree));
    }
    let mut memo: HashMap<Vec<u32>, FreeVector> = HashMap::new();
    fn go(s: &WordSet, c: &[u32], field: &FieldSpec, memo: &mut HashMap<Vec<u32>, FreeVector>) -> FreeVector {
        if c.iter().all(|&i| i == 0) {
            return FreeVector::from_word(Word::EMPTY);
        }
        if let Some(v) = memo.get(c) {
            return v.clone();
        }
        let degree: u32 = c.iter().zip(s.words()).map(|(i, w)| i * w.len()).sum();
        let mut acc = FreeVector::zero(degree);
        let mut rest = c.to_vec();
        for e in 0..c.len() {
            if c[e] == 0 {
                continue;
            }
            rest[e] -= 1;
            let tail = go(s, &rest, field, memo);
            rest[e] += 1;
            let head = FreeVector::from_word(s.words()[e]);
            acc = acc.add(field, &head.mul(field, &tail).expect("bounded degree")).expect("same degree");
        }
        memo.insert(c.to_vec(), acc.clone());
        acc
    }
    Ok(go(s, seq, field, &mut memo))
}

/// `(n+1)^d (2 p^2) 4^p` for `d = card(S)`, `p = deg(S)`.
pub fn dim_bound(s: &WordSet, n: u32) -> BigUint {
    let p = s.deg();
    BigUint::from(n + 1).pow(s.card() as u32) * BigUint::from(2u32 * p * p) * BigUint::from(4u32).pow(p)
}

/// The space `Y(S, n)` spanned by `A(i) C(seq) A(j - i)` over `1 <= m <= n`,
/// `0 <= j < 2p`, `0 <= i <= max(j, p - 1)` and `seq` in `E(m, j)`.
pub fn build_y(s: &WordSet, n: u32, field: &FieldSpec) -> Result<EchelonSubspace> {
    if n == 0 {
        return Err(Error::InvalidParams("build_Y needs n >= 1".into()));
    }
    if n > MAX_WORD_LEN {
        return Err(Error::WordTooLong(n));
    }
    let p = s.deg();
    let mut gens: Vec<SparseRow> = Vec::new();
    for m in 1..=n {
        for j in 0..(2 * p).min(n + 1) {
            for seq in exponent_sequences(s, n, m, j) {
                let c = coeff_c(s, &seq, m, field)?;
                if c.is_zero() {
                    continue;
                }
                // i also ranges up to p - 1, but A(j - i) is empty for i > j
                for i in 0..=j {
                    for a in enumerate_words(i)? {
                        for b in enumerate_words(j - i)? {
                            let left = FreeVector::from_word(a).mul(field, &c)?;
                            gens.push(vector_to_row(&left.mul(field, &FreeVector::from_word(b))?));
                        }
                    }
                }
            }
        }
    }
    let y = EchelonSubspace::reduce_rows(n, *field, gens);
    if BigUint::from(y.dim()) > dim_bound(s, n) {
        return Err(Error::Internal(format!("dim Y({s}, {n}) = {} exceeds its bound", y.dim())));
    }
    Ok(y)
}

/// `sum_k A(kn) Y A(D - kn - n)` over `k >= 0` with `kn + n <= D`, built
/// from the full ambient spaces.
pub fn power_span(y: &EchelonSubspace, d: u32, cap: u32) -> Result<EchelonSubspace> {
    let n = y.degree();
    let field = *y.field();
    if d > cap {
        return Err(Error::Capacity { degree: d, what: "power span".into() });
    }
    let mut acc = EchelonSubspace::zero(d, field);
    let mut k = 0;
    while k * n + n <= d {
        let left = EchelonSubspace::full(k * n, field, cap)?;
        let right = EchelonSubspace::full(d - k * n - n, field, cap)?;
        acc = acc.sum(&left.span_product(y)?.span_product(&right)?)?;
        k += 1;
    }
    Ok(acc)
}

/// Membership in `sum_k A(kn) Y A` without materializing the ambient space.
///
/// The blocks `[kn, kn + n)` are disjoint, so the quotient of `A(D)` by the
/// sum is the tensor product of `A(n)/Y` over the full blocks with the free
/// tail; a vector lies in the sum iff its image there vanishes. The image of
/// a word is the tensor product of the normal forms of its blocks.
pub struct PowerContainment {
    y: EchelonSubspace,
    cache: HashMap<u128, SparseRow>,
}

impl PowerContainment {
    pub fn new(y: EchelonSubspace) -> Self {
        PowerContainment { y, cache: HashMap::new() }
    }

    pub fn y(&self) -> &EchelonSubspace {
        &self.y
    }

    fn block_nf(&mut self, idx: u128) -> SparseRow {
        let y = &self.y;
        self.cache.entry(idx).or_insert_with(|| y.reduce_row(vec![(idx, 1)])).clone()
    }

    pub fn contains(&mut self, v: &FreeVector) -> bool {
        let n = self.y.degree();
        let d = v.degree();
        let blocks = d / n;
        if blocks == 0 {
            return v.is_zero();
        }
        let field = *self.y.field();
        let mut image: HashMap<(Vec<u128>, u128), u32> = HashMap::new();
        for (w, &c) in v.terms() {
            let mut partial: Vec<(Vec<u128>, u32)> = vec![(Vec::new(), c)];
            for k in 0..blocks {
                let nf = self.block_nf(w.slice(k * n, n).index());
                let mut next = Vec::with_capacity(partial.len() * nf.len());
                for (key, a) in &partial {
                    for &(col, b) in &nf {
                        let mut key = key.clone();
                        key.push(col);
                        next.push((key, field.mul(*a, b)));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            let tail = w.slice(blocks * n, d - blocks * n).index();
            for (key, a) in partial {
                let e = image.entry((key, tail)).or_insert(0);
                *e = field.add(*e, a);
            }
        }
        image.values().all(|&c| c == 0)
    }
}

/// Multiplicative weight of a word written as a product of `S`-letters: the
/// product of the corresponding `lambda` values.
pub fn lambda_weight(field: &FieldSpec, lambda: &[u32], letters: &[usize]) -> u32 {
    letters.iter().fold(1, |acc, &e| field.mul(acc, lambda[e]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFailure {
    pub lambda: Vec<u32>,
    pub a: Word,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PowerReport {
    #[serde(rename = "S")]
    pub s: WordSet,
    pub n: u32,
    pub p: u32,
    pub d: usize,
    pub dim_y: usize,
    pub bound: String,
    pub checks_run: u64,
    pub failures: Vec<PowerFailure>,
}

impl PowerReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Homogeneous components of `y^e` for an inhomogeneous `y` given by degree.
fn power_components(field: &FieldSpec, y: &BTreeMap<u32, FreeVector>, e: u32) -> Result<BTreeMap<u32, FreeVector>> {
    let mut acc: BTreeMap<u32, FreeVector> = BTreeMap::new();
    acc.insert(0, FreeVector::from_word(Word::EMPTY));
    for _ in 0..e {
        let mut next: BTreeMap<u32, FreeVector> = BTreeMap::new();
        for (da, a) in &acc {
            for (db, b) in y {
                let prod = a.mul(field, b)?;
                let slot = next.entry(da + db).or_insert_with(|| FreeVector::zero(da + db));
                *slot = slot.add(field, &prod)?;
            }
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    Ok(acc)
}

/// Checks `a * y^(2n)` against `sum_k A(kn) Y A` for every word `a` with
/// `|a| < n` and every `y = sum lambda_e w_e` in the sweep.
pub fn verify_power_containment(s: &WordSet, n: u32, field: &FieldSpec, mode: SweepMode) -> Result<PowerReport> {
    let y = build_y(s, n, field)?;
    let top = (n - 1) + 2 * n * s.deg();
    if top > MAX_WORD_LEN {
        return Err(Error::Capacity { degree: top, what: "power containment sweep".into() });
    }
    let d = s.card();
    let q = field.characteristic() as u64;
    let lambdas: Vec<Vec<u32>> = match mode {
        SweepMode::Exhaustive => {
            let total = q
                .checked_pow(d as u32)
                .filter(|&t| t <= 1 << 16)
                .ok_or(Error::Capacity { degree: top, what: format!("{q}^{d} coefficient vectors") })?;
            (0..total)
                .map(|mut k| {
                    (0..d)
                        .map(|_| {
                            let c = (k % q) as u32;
                            k /= q;
                            c
                        })
                        .collect()
                })
                .collect()
        }
        SweepMode::Sample { count, seed } => {
            let mut rng = StdRng::seed_from_u64(seed);
            (0..count).map(|_| (0..d).map(|_| rng.gen_range(0..field.characteristic())).collect()).collect()
        }
    };
    let prefixes: Vec<Word> = (0..n).flat_map(|i| enumerate_words(i).expect("small")).collect();
    let results: Vec<Result<(u64, Vec<PowerFailure>)>> = lambdas
        .par_iter()
        .map(|lambda| {
            let comps = power_components(field, &s.combination(field, lambda), 2 * n)?;
            let mut oracle = PowerContainment::new(y.clone());
            let mut runs = 0u64;
            let mut failures = Vec::new();
            for a in &prefixes {
                let av = FreeVector::from_word(*a);
                for (deg, comp) in &comps {
                    runs += 1;
                    if !oracle.contains(&av.mul(field, comp)?) {
                        failures.push(PowerFailure { lambda: lambda.clone(), a: *a, degree: a.len() + deg });
                    }
                }
            }
            Ok((runs, failures))
        })
        .collect();
    let mut checks_run = 0;
    let mut failures = Vec::new();
    for r in results {
        let (c, f) = r?;
        checks_run += c;
        failures.extend(f);
    }
    Ok(PowerReport {
        s: s.clone(),
        n,
        p: field.characteristic(),
        d,
        dim_y: y.dim(),
        bound: dim_bound(s, n).to_string(),
        checks_run,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(s: &str) -> WordSet {
        s.parse().unwrap()
    }

    #[test]
    fn exponent_sequence_examples() {
        assert_eq!(exponent_sequences(&ws("x,xy"), 4, 2, 1), vec![vec![1, 1]]);
        assert_eq!(exponent_sequences(&ws("x"), 4, 4, 0), vec![vec![4]]);
        assert!(exponent_sequences(&ws("x"), 4, 2, 0).is_empty());
    }

    #[test]
    fn coeff_examples() {
        let f = FieldSpec::gf2();
        let c = coeff_c(&ws("x,xy"), &[1, 1], 2, &f).unwrap();
        assert_eq!(c.to_string(), "xxy + xyx");
        assert_eq!(coeff_c(&ws("x"), &[2], 2, &f).unwrap().to_string(), "xx");
        assert_eq!(coeff_c(&ws("x,y"), &[1, 1], 2, &f).unwrap().to_string(), "xy + yx");
        // two copies of each letter: xxyy-type orderings appear once each, no cancellation
        assert_eq!(coeff_c(&ws("x,y"), &[2, 2], 4, &f).unwrap().len(), 6);
        assert!(coeff_c(&ws("x,y"), &[1, 1], 3, &f).is_err());
    }

    #[test]
    fn build_y_examples() {
        let f = FieldSpec::gf2();
        let y = build_y(&ws("x"), 2, &f).unwrap();
        assert_eq!(y.to_strings(), vec!["xx", "xy", "yx"]);
        assert_eq!(dim_bound(&ws("x"), 2), BigUint::from(24u32));
        let y16 = build_y(&ws("x"), 16, &f).unwrap();
        assert_eq!(y16.dim(), 3);
        let expect: Vec<String> = ["x".repeat(16), format!("{}y", "x".repeat(15)), format!("y{}", "x".repeat(15))].into_iter().collect();
        assert_eq!(y16.to_strings(), expect);
    }

    #[test]
    fn power_span_examples() {
        let f = FieldSpec::gf2();
        let y = build_y(&ws("x"), 2, &f).unwrap();
        let ps = power_span(&y, 4, 16).unwrap();
        assert!(ps.contains_word(&"xxxx".parse().unwrap()).unwrap());
        assert_eq!(power_span(&y, 2, 16).unwrap(), y);
        assert_eq!(power_span(&y, 1, 16).unwrap().dim(), 0);
    }

    #[test]
    fn tensor_membership_matches_power_span() {
        for p in [2u64, 3] {
            let f = FieldSpec::new(p).unwrap();
            let y = build_y(&ws("x,xy"), 3, &f).unwrap();
            for d in 3..=8 {
                let ps = power_span(&y, d, 16).unwrap();
                let mut oracle = PowerContainment::new(y.clone());
                for w in enumerate_words(d).unwrap() {
                    let v = FreeVector::from_word(w);
                    assert_eq!(oracle.contains(&v), ps.contains(&v).unwrap(), "{w}");
                }
                // a few two-term vectors
                for (a, b) in enumerate_words(d).unwrap().zip(enumerate_words(d).unwrap().skip(3)) {
                    let v = FreeVector::from_terms(d, &f, [(a, 1), (b, f.neg(1))]).unwrap();
                    assert_eq!(oracle.contains(&v), ps.contains(&v).unwrap());
                }
            }
        }
    }

    #[test]
    fn lambda_weight_is_multiplicative() {
        let f = FieldSpec::new(5).unwrap();
        let lambda = [2, 3, 4];
        let u = [0usize, 2, 1];
        let v = [2usize, 2];
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        assert_eq!(lambda_weight(&f, &lambda, &uv), f.mul(lambda_weight(&f, &lambda, &u), lambda_weight(&f, &lambda, &v)));
        assert_eq!(lambda_weight(&f, &lambda, &[]), 1);
    }

    #[test]
    fn small_containment_passes() {
        let f = FieldSpec::gf2();
        let r = verify_power_containment(&ws("x"), 2, &f, SweepMode::Exhaustive).unwrap();
        assert!(r.passed());
        assert_eq!(r.dim_y, 3);
        assert!(r.checks_run > 0);
    }
}
