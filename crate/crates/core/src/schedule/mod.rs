//! Relation schedules: the enumerated word sets `S_i`, the ramp ends
//! `f(i)` and lengths `g(i)`, and the inequality chain that turns them into
//! the growth bound `n^{α(n)}`.
//!
//! Toy schedules are small enough to build towers from and only keep the
//! hypotheses the tower needs. Theorem schedules satisfy every constraint
//! and are checked symbolically.

pub mod alpha;
pub mod bounds;
pub mod sets;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::power::{build_y, dim_bound, WordSet};
use crate::tower::params::{check_ramp_spacing, relation_dim_bound};
use crate::word::MAX_WORD_LEN;

pub use alpha::{AlphaSpec, Rational};
pub use bounds::{g_formula, LogInterval};
pub use sets::{enumerate_sets, set_iter};

use bounds::{decide_le, deg_factor};

/// `α(n)` must reach this for `n^{5 + 16 α(n) / 17} <= n^{α(n)}`.
pub const ABSORPTION_THRESHOLD: u32 = 85;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Toy,
    Theorem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub i: usize,
    #[serde(rename = "S")]
    pub s: WordSet,
    #[serde(with = "crate::bignum")]
    pub f: BigUint,
    #[serde(with = "crate::bignum")]
    pub g: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseSchedule {
    pub grade: Grade,
    pub alpha: AlphaSpec,
    pub entries: Vec<ScheduleEntry>,
}

impl SparseSchedule {
    pub fn f(&self) -> Vec<BigUint> {
        self.entries.iter().map(|e| e.f.clone()).collect()
    }

    pub fn g(&self) -> Vec<BigUint> {
        self.entries.iter().map(|e| e.g.clone()).collect()
    }
}

/// User-chosen toy parameters. Missing sets default to the enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ToyOverrides {
    pub f: Vec<BigUint>,
    pub g: Vec<BigUint>,
    pub sets: Vec<WordSet>,
    pub field: FieldSpec,
}

/// `f(1) > g(1) + 1` and `f(i+1) > g(i+1) + f(i) + 1`.
pub fn check_sparse(f: &[BigUint], g: &[BigUint]) -> Result<()> {
    let mut prev = BigUint::zero();
    for (k, (fi, gi)) in f.iter().zip(g).enumerate() {
        if *fi <= gi + &prev + 1u32 {
            return Err(Error::InvalidParams(format!(
                "f({}) = {fi} must exceed g({}) + f({}) + 1 = {}",
                k + 1,
                k + 1,
                k,
                gi + &prev + 1u32
            )));
        }
        prev = fi.clone();
    }
    Ok(())
}

/// `dim W_i` for the toy relation `Y(S_i, 2^{f(i)})`, or the Lemma 4.1
/// bound when the degree is out of reach.
fn toy_relation_dim(s: &WordSet, f: &BigUint, field: &FieldSpec) -> Result<BigUint> {
    match f.to_u32().filter(|&f| f < 32 && (1u32 << f) <= MAX_WORD_LEN) {
        Some(f) => Ok(BigUint::from(build_y(s, 1 << f, field)?.dim())),
        None => match f.to_u32().filter(|&f| f < 32) {
            Some(f) => Ok(dim_bound(s, 1 << f)),
            None => Err(Error::Capacity { degree: u32::MAX, what: format!("relation degree 2^{f}") }),
        },
    }
}

fn check_toy_entry(s: &WordSet, f: &BigUint, g: &BigUint, field: &FieldSpec, i: usize) -> Result<()> {
    if g.is_zero() {
        return Err(Error::InvalidParams(format!("g({i}) must be positive")));
    }
    let dim = toy_relation_dim(s, f, field)?;
    if let Some(bound) = relation_dim_bound(g) {
        if dim > bound {
            return Err(Error::InvalidParams(format!("dim Y({s}, 2^{f}) = {dim} exceeds 2^(2^{g}) - 2 = {bound}")));
        }
    }
    Ok(())
}

/// Smallest toy `(f, g)` for `S`, after `f_prev`: scans `f` upward and
/// takes the least `g` that both fits the sparseness gap and bounds
/// `dim Y(S, 2^f)`.
pub fn smallest_toy_entry(s: &WordSet, f_prev: u32, field: &FieldSpec) -> Result<(u32, u32)> {
    for f in (f_prev + 2)..=7 {
        let dim = toy_relation_dim(s, &BigUint::from(f), field)?;
        for g in 1..f.saturating_sub(f_prev + 1) {
            if relation_dim_bound(&BigUint::from(g)).is_none_or(|b| dim <= b) {
                return Ok((f, g));
            }
        }
    }
    Err(Error::Capacity { degree: 128, what: format!("no toy entry for {s} below level 8") })
}

fn theorem_entry_ok(alpha: &AlphaSpec, s: &WordSet, f: &BigUint, prev: Option<(&BigUint, &BigUint)>) -> bool {
    if *f <= deg_factor(s).pow(16) {
        return false;
    }
    if alpha.lower_at_pow2(f) <= Ratio::from_integer(BigUint::from(17 * s.card())) {
        return false;
    }
    let g = g_formula(f, s);
    match prev {
        None => *f > &g + 1u32,
        Some((fp, gp)) => g > *gp && *f > &g + fp + 1u32,
    }
}

/// Least `f` with `theorem_entry_ok`, by doubling then bisection; the
/// predicate is monotone in `f`.
fn minimal_theorem_f(alpha: &AlphaSpec, s: &WordSet, prev: Option<(&BigUint, &BigUint)>) -> Result<BigUint> {
    let ok = |f: &BigUint| theorem_entry_ok(alpha, s, f, prev);
    let lo = deg_factor(s).pow(16).max(prev.map(|(fp, _)| fp.clone()).unwrap_or_default());
    let mut step = BigUint::one();
    let mut hi = &lo + &step;
    let mut rounds = 0;
    while !ok(&hi) {
        step <<= 1u32;
        hi = &lo + &step;
        rounds += 1;
        if rounds > 4096 {
            return Err(Error::Capacity { degree: u32::MAX, what: format!("no theorem-grade f for {s} below 2^4096") });
        }
    }
    let mut bad = lo;
    while &hi - &bad > BigUint::one() {
        let mid = (&bad + &hi) >> 1u32;
        if ok(&mid) {
            hi = mid;
        } else {
            bad = mid;
        }
    }
    Ok(hi)
}

pub fn build_schedule(alpha: &AlphaSpec, i_max: usize, grade: Grade, overrides: Option<&ToyOverrides>) -> Result<SparseSchedule> {
    alpha.validate()?;
    let entries = match grade {
        Grade::Toy => {
            let o = overrides.ok_or_else(|| Error::InvalidParams("toy schedules need explicit f and g".into()))?;
            if o.f.len() != o.g.len() || o.f.len() < i_max {
                return Err(Error::InvalidParams(format!("toy schedule needs {i_max} values of f and g")));
            }
            let mut entries = Vec::new();
            for k in 0..i_max {
                let s = o.sets.get(k).cloned().unwrap_or_else(|| enumerate_sets(k + 1));
                check_toy_entry(&s, &o.f[k], &o.g[k], &o.field, k + 1)?;
                entries.push(ScheduleEntry { i: k + 1, s, f: o.f[k].clone(), g: o.g[k].clone() });
            }
            let (f, g): (Vec<_>, Vec<_>) = entries.iter().map(|e| (e.f.clone(), e.g.clone())).unzip();
            check_sparse(&f, &g)?;
            entries
        }
        Grade::Theorem => {
            let mut entries: Vec<ScheduleEntry> = Vec::new();
            for k in 0..i_max {
                let s = enumerate_sets(k + 1);
                let prev = entries.last().map(|e| (&e.f, &e.g));
                let f = minimal_theorem_f(alpha, &s, prev)?;
                let g = g_formula(&f, &s);
                entries.push(ScheduleEntry { i: k + 1, s, f, g });
            }
            entries
        }
    };
    let sched = SparseSchedule { grade, alpha: alpha.clone(), entries };
    check_ramp_spacing(&sched.f(), &sched.g())?;
    if grade == Grade::Theorem {
        for e in &sched.entries {
            if relation_bound_holds(e) != Some(true) {
                return Err(Error::Internal(format!("relation bound fails for entry {}", e.i)));
            }
        }
    }
    Ok(sched)
}

/// `(2^f + 1)^card (2 deg^2) 4^deg + 2 <= 2^{2^g}`, which makes every
/// `Y(S_i, 2^{f(i)})` fit the relation budget `2^{2^g} - 2`.
pub fn relation_bound_holds(e: &ScheduleEntry) -> Option<bool> {
    let budget = LogInterval::int(BigUint::one() << e.g.to_u64()?);
    decide_le(|k| (LogInterval::of_formula_argument(&e.f, &e.s, k), budget.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainLink {
    pub name: String,
    pub holds: bool,
    /// False when the enclosures could not separate the two sides; the
    /// link is then reported as failing.
    pub decided: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainSample {
    pub i: usize,
    /// The sample is `n = 2^m`.
    #[serde(with = "crate::bignum")]
    pub log2_n: BigUint,
    /// Certified lower bound of `α(n)`, as `p/q`.
    pub alpha_lower: String,
    pub links: Vec<ChainLink>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainReport {
    pub grade: Grade,
    pub alpha: AlphaSpec,
    pub samples: Vec<ChainSample>,
    /// Every link up to `n^{5 + 16 α(n) / 17}` holds at every sample.
    pub chain_holds: bool,
    /// The final step into `n^{α(n)}` holds at every sample.
    pub absorbed: bool,
    pub absorption_threshold: u32,
    /// Least `m` with `α(2^m) >= 85` (certified), if reached.
    pub threshold_log2_n: Option<String>,
}

fn link(name: &str, verdict: Option<bool>) -> ChainLink {
    ChainLink { name: name.into(), holds: verdict == Some(true), decided: verdict.is_some() }
}

fn ratio_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Checks each link of
/// `n^4 2^{2^{g+2}} <= n^4 N^8 <= n^{4 + 16 card} D^16 <= n^{5 + 16α/17} <= n^α`
/// at `n = 2^m` for `f(i) <= m < f(i+1)`, where
/// `N = (2^f + 1)^card (2 deg^2) 4^deg + 2` and `D = deg 2^{deg + 1}`.
pub fn verify_schedule(sched: &SparseSchedule, alpha: &AlphaSpec, n_samples: usize) -> ChainReport {
    let len = sched.entries.len();
    let mut samples = Vec::new();
    if len > 0 {
        let rounds = n_samples.div_ceil(len).max(1);
        for t in 0..n_samples {
            let k = t % len;
            let r = t / len;
            let e = &sched.entries[k];
            let upper = sched.entries.get(k + 1).map(|n| n.f.clone()).unwrap_or_else(|| &e.f * 2u32 + 1u32);
            let m = &e.f + (&upper - &e.f) * BigUint::from(r) / BigUint::from(rounds);
            samples.push(chain_sample(e, alpha, &m));
        }
    }
    let chain_holds = samples.iter().all(|s| s.links[..3].iter().all(|l| l.holds));
    let absorbed = samples.iter().all(|s| s.links[3].holds);
    let threshold_log2_n = alpha.threshold_log2(&Ratio::from_integer(BigUint::from(ABSORPTION_THRESHOLD))).map(|m| m.to_string());
    ChainReport {
        grade: sched.grade,
        alpha: alpha.clone(),
        samples,
        chain_holds,
        absorbed,
        absorption_threshold: ABSORPTION_THRESHOLD,
        threshold_log2_n,
    }
}

fn chain_sample(e: &ScheduleEntry, alpha: &AlphaSpec, m: &BigUint) -> ChainSample {
    let card = BigUint::from(e.s.card());
    let a = alpha.lower_at_pow2(m);
    let mr = Ratio::from_integer(m.clone());
    let int = |v: u32| Ratio::from_integer(BigUint::from(v));
    let d = deg_factor(&e.s);
    let log_n = LogInterval::exact(mr.clone());
    // all sides as log2 of the quantity
    let l1 = match e.g.to_u64() {
        Some(g) => {
            decide_le(|k| (LogInterval::int(BigUint::one() << (g + 2)), LogInterval::of_formula_argument(&e.f, &e.s, k).scale(&int(8))))
        }
        None => None,
    };
    let l2 = decide_le(|k| {
        let lhs = LogInterval::of_formula_argument(&e.f, &e.s, k).scale(&int(8));
        let rhs = log_n.scale(&(Ratio::from_integer(&card * 16u32))) + LogInterval::of(&d, k).scale(&int(16));
        (lhs, rhs)
    });
    let exp_mid = Ratio::from_integer(&card * 16u32 + 4u32);
    let exp_top = int(5) + &a * int(16) / int(17);
    let l3 = decide_le(|k| (log_n.scale(&exp_mid) + LogInterval::of(&d, k).scale(&int(16)), log_n.scale(&exp_top)));
    let l4 = Some(exp_top <= a);
    ChainSample {
        i: e.i,
        log2_n: m.clone(),
        alpha_lower: ratio_str(&a),
        links: vec![
            link("n^4 2^(2^(g+2)) <= n^4 N^8", l1),
            link("n^4 N^8 <= n^(4+16 card) D^16", l2),
            link("n^(4+16 card) D^16 <= n^(5+16 alpha/17)", l3),
            link("n^(5+16 alpha/17) <= n^alpha", l4),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn toy(f: &[u64], g: &[u64], sets: &[&str]) -> ToyOverrides {
        ToyOverrides {
            f: f.iter().map(|&x| big(x)).collect(),
            g: g.iter().map(|&x| big(x)).collect(),
            sets: sets.iter().map(|s| s.parse().unwrap()).collect(),
            field: FieldSpec::gf2(),
        }
    }

    #[test]
    fn toy_acceptance_and_rejection() {
        let a = AlphaSpec::Log2Log2;
        let err = build_schedule(&a, 1, Grade::Toy, Some(&toy(&[2], &[1], &["x"]))).unwrap_err();
        assert!(err.to_string().contains("= 3 exceeds"), "{err}");
        let s = build_schedule(&a, 1, Grade::Toy, Some(&toy(&[4], &[2], &["x"]))).unwrap();
        assert_eq!(s.entries[0].f, big(4));
        assert!(build_schedule(&a, 1, Grade::Toy, Some(&toy(&[3], &[2], &["x"]))).is_err());
        assert!(build_schedule(&a, 1, Grade::Toy, None).is_err());
    }

    #[test]
    fn toy_chain_of_two() {
        // f = (4, k) is sparse iff k > g(2) + 5
        for g2 in 1..=3u64 {
            for k in 5..=12u64 {
                let ok = check_sparse(&[big(4), big(k)], &[big(2), big(g2)]).is_ok();
                assert_eq!(ok, k > g2 + 5, "k={k} g2={g2}");
            }
        }
    }

    #[test]
    fn smallest_toy() {
        let f = FieldSpec::gf2();
        assert_eq!(smallest_toy_entry(&"x".parse().unwrap(), 0, &f).unwrap(), (4, 2));
    }

    #[test]
    fn theorem_first_entry() {
        let s = build_schedule(&AlphaSpec::Log2Log2, 1, Grade::Theorem, None).unwrap();
        let e = &s.entries[0];
        assert_eq!(e.s.to_string(), "{x}");
        assert_eq!(e.f, (big(1) << 32u32) + 1u32);
        assert_eq!(e.g, big(33));
        assert_eq!(relation_bound_holds(e), Some(true));
    }

    #[test]
    fn theorem_schedule_is_sparse_and_chain_holds() {
        let a = AlphaSpec::Log2Log2;
        let s = build_schedule(&a, 4, Grade::Theorem, None).unwrap();
        check_sparse(&s.f(), &s.g()).unwrap();
        for w in s.entries.windows(2) {
            assert!(w[1].g > w[0].g);
        }
        let r = verify_schedule(&s, &a, 10);
        assert_eq!(r.samples.len(), 10);
        assert!(r.chain_holds, "{r:#?}");
        assert!(!r.absorbed);
        assert_eq!(r.threshold_log2_n, Some((big(1) << 85u32).to_string()));
    }

    #[test]
    fn toy_chain_reports_alpha_links() {
        let a = AlphaSpec::Log2Log2;
        let s = build_schedule(&a, 1, Grade::Toy, Some(&toy(&[4], &[2], &["x"]))).unwrap();
        let r = verify_schedule(&s, &a, 4);
        assert!(!r.chain_holds);
        assert!(r.samples.iter().all(|s| !s.links[2].holds));
    }

    #[test]
    fn serde_shape() {
        let s = build_schedule(&AlphaSpec::Log2Log2, 1, Grade::Theorem, None).unwrap();
        let j = serde_json::to_value(&s).unwrap();
        assert_eq!(j["grade"], "theorem");
        assert_eq!(j["alpha"], "log2log2");
        assert_eq!(j["entries"][0]["f"], "4294967297");
        assert_eq!(j["entries"][0]["S"][0], "x");
        let back: SparseSchedule = serde_json::from_value(j).unwrap();
        assert_eq!(back, s);
    }
}
