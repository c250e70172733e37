//! Verification suites over toy towers, shared by the command line driver
//! and the acceptance tests. Every report is deterministic: no timings, no
//! unordered containers.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::echelon::EchelonSubspace;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::growth::{check_chain_span, dense_ideal_component, growth_check, hilbert_upper_bounds, nil_check, quotient_dim, IdealOracle};
use crate::power::{verify_power_containment, SweepMode, WordSet};
use crate::schedule::bounds::formula_argument;
use crate::schedule::{build_schedule, g_formula, smallest_toy_entry, verify_schedule, AlphaSpec, Grade};
use crate::tower::oracle::explicit_levels;
use crate::tower::verify::verify_conditions;
use crate::tower::{ProjectionTower, RelationSlot, SlotSpec, TowerParams, TowerSpec};
use crate::vector::FreeVector;
use crate::word::{enumerate_words, Word};

pub const SUITES: [&str; 8] = ["prop31", "equivalence", "lemma33", "lemma41", "ideal", "nil", "prop36", "schedule"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: Vec<String>,
    pub details: Value,
}

struct Tally {
    checks: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 32 {
            self.failures.push(what());
        }
    }

    fn report(self, suite: &str, details: Value) -> SuiteReport {
        SuiteReport { suite: suite.into(), passed: self.failures.is_empty(), checks: self.checks, failures: self.failures, details }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedTowerSpec {
    pub name: String,
    pub tower: TowerSpec,
}

fn spec(name: &str, f: &[u64], g: &[u64], slots: Vec<SlotSpec>) -> NamedTowerSpec {
    NamedTowerSpec {
        name: name.into(),
        tower: TowerSpec { f: f.iter().map(|&x| x.into()).collect(), g: g.iter().map(|&x| x.into()).collect(), slots },
    }
}

/// The toy parameter sets the suites sweep by default.
pub fn default_tower_specs() -> Vec<NamedTowerSpec> {
    vec![
        spec("plain", &[], &[], vec![]),
        spec("x^4", &[2], &[1], vec![SlotSpec::Words(vec!["xxxx".parse().expect("word")])]),
        spec("xxxx+xyxy", &[2], &[1], vec![SlotSpec::Vectors(vec!["xxxx + xyxy".into()])]),
        spec("Y(x,16)", &[4], &[2], vec![SlotSpec::Recipe("x".into())]),
    ]
}

pub struct NamedTower {
    pub name: String,
    pub tower: ProjectionTower,
}

/// Builds every spec over every field.
pub fn build_towers(specs: &[NamedTowerSpec], primes: &[u64], max_level: u32) -> Result<Vec<NamedTower>> {
    let mut out = Vec::new();
    for &p in primes {
        let field = FieldSpec::new(p)?;
        for s in specs {
            let tower = ProjectionTower::build(&s.tower.to_params(max_level, field)?)?;
            out.push(NamedTower { name: format!("{}/p={p}", s.name), tower });
        }
    }
    Ok(out)
}

/// Tower conditions at every level up to `k_max`, dense where the oracle
/// reaches and structural above; plus the rejection of a relation space
/// too large for its ramp.
pub fn suite_tower_conditions(towers: &[NamedTower], k_max: u32, extended: bool) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut details = Vec::new();
    for nt in towers {
        let r = verify_conditions(&nt.tower, k_max, extended)?;
        for c in &r.conditions {
            t.check(c.passed, || format!("{}: condition {} failed: {:?}", nt.name, c.name, c.failures));
        }
        details.push(json!({
            "tower": nt.name,
            "kMax": r.k_max,
            "denseMax": r.dense_max,
            "conditions": r.conditions.iter().map(|c| json!({"name": c.name, "passed": c.passed, "checks": c.checks})).collect::<Vec<_>>(),
        }));
    }
    let field = towers.first().map(|t| *t.tower.field()).unwrap_or_default();
    let s: WordSet = "x".parse()?;
    let oversized = TowerParams::small(&[2], &[1], vec![RelationSlot::recipe(1, s)], 3, field).and_then(|p| ProjectionTower::build(&p));
    t.check(oversized.is_err(), || "f=(2), g=(1), W = Y({x}, 4) was not rejected".into());
    let rejection = match &oversized {
        Err(e) => e.to_string(),
        Ok(_) => "accepted".into(),
    };
    Ok(t.report("prop31", json!({ "towers": details, "oversizedRelation": rejection })))
}

/// `π_k(w) = 0` exactly when `w` lies in the densely built `U(2^k)`.
pub fn suite_projection_oracle(towers: &[NamedTower], k_max: u32) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut details = Vec::new();
    for nt in towers {
        let k_top = k_max.min(nt.tower.max_level());
        let levels = explicit_levels(&nt.tower, k_top, false)?;
        let mut words = 0u64;
        let mut mismatches = 0u64;
        for k in 0..=k_top {
            let u = &levels[k as usize].u;
            for w in enumerate_words(1 << k)? {
                let zero = nt.tower.project_word(k, &w)?.iter().all(|&c| c == 0);
                let inside = u.contains_word(&w)?;
                words += 1;
                if zero != inside {
                    mismatches += 1;
                }
                t.check(zero == inside, || format!("{}: word {w} projects to zero = {zero}, in U = {inside}", nt.name));
            }
        }
        details.push(json!({"tower": nt.name, "words": words, "mismatches": mismatches}));
    }
    Ok(t.report("equivalence", json!({ "towers": details })))
}

/// The `V` chains together with `L(n)` / `R(n)` fill `A(n)`, and the
/// chosen complements sit inside the chains.
pub fn suite_chain_span(towers: &[NamedTower], n_max: u32) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut details = Vec::new();
    for nt in towers {
        let mut rows = Vec::new();
        for n in 1..=n_max {
            let c = check_chain_span(&nt.tower, n)?;
            t.check(c.passed, || format!("{}: {c:?}", nt.name));
            rows.push(serde_json::to_value(&c).expect("serializable"));
        }
        details.push(json!({"tower": nt.name, "rows": rows}));
    }
    Ok(t.report("lemma33", json!({ "towers": details })))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerCase {
    #[serde(rename = "S")]
    pub s: String,
    pub n: u32,
    pub p: u64,
    /// Sampled `λ` count; exhaustive when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

pub fn default_power_cases() -> Vec<PowerCase> {
    let case = |s: &str, n, p, samples| PowerCase { s: s.into(), n, p, samples };
    vec![case("x", 2, 2, None), case("x,y", 4, 2, None), case("x,xy", 4, 2, None), case("x,y", 4, 3, Some(20))]
}

/// Whether any case samples and so needs a seed.
pub fn power_cases_need_seed(cases: &[PowerCase]) -> bool {
    cases.iter().any(|c| c.samples.is_some())
}

pub fn suite_power_containment(cases: &[PowerCase], seed: Option<u64>) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut details = Vec::new();
    for c in cases {
        let s: WordSet = c.s.parse()?;
        let field = FieldSpec::new(c.p)?;
        let mode = match c.samples {
            None => SweepMode::Exhaustive,
            Some(count) => {
                let seed = seed.ok_or_else(|| Error::InvalidParams("sampled power checks need a seed".into()))?;
                SweepMode::Sample { count, seed }
            }
        };
        let r = verify_power_containment(&s, c.n, &field, mode)?;
        let within = BigUint::from(r.dim_y) <= r.bound.parse::<BigUint>().map_err(|_| Error::Internal("bound".into()))?;
        t.check(within, || format!("{s}, n={}: dim Y = {} above bound {}", c.n, r.dim_y, r.bound));
        t.check(r.passed(), || format!("{s}, n={}, p={}: {} containment failures", c.n, c.p, r.failures.len()));
        details.push(serde_json::to_value(&r).expect("serializable"));
    }
    Ok(t.report("lemma41", json!({ "cases": details })))
}

/// Two-sidedness, `V(2^k) ⊄ I`, the quotient bound and agreement of the
/// projected membership test with the dense ideal, for `n <= n_max`.
pub fn suite_ideal(towers: &[NamedTower], n_max: u32) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut details = Vec::new();
    for nt in towers {
        let tower = &nt.tower;
        let field = *tower.field();
        let mut comps = vec![EchelonSubspace::zero(0, field)];
        for n in 1..=n_max {
            comps.push(dense_ideal_component(tower, n)?);
        }
        let letters = [FreeVector::from_word(Word::x()), FreeVector::from_word(Word::y())];
        for n in 1..n_max as usize {
            for v in comps[n].rows() {
                for l in &letters {
                    t.check(comps[n + 1].contains(&l.mul(&field, &v)?)?, || format!("{}: {l}·({v}) not in I", nt.name));
                    t.check(comps[n + 1].contains(&v.mul(&field, l)?)?, || format!("{}: ({v})·{l} not in I", nt.name));
                }
            }
        }
        for k in 0..32 {
            let d = 1u32 << k;
            if d > n_max {
                break;
            }
            let v = EchelonSubspace::from_words(d, field, tower.level(k)?.basis())?;
            t.check(!v.is_subspace_of(&comps[d as usize])?, || format!("{}: V({d}) inside I", nt.name));
        }
        let bounds = hilbert_upper_bounds(tower, n_max)?;
        let mut dims = Vec::new();
        for n in 0..=n_max {
            let q = quotient_dim(tower, n)?.ok_or_else(|| Error::Internal(format!("no exact dimension at {n}")))?;
            t.check(BigUint::from(q) <= bounds[n as usize], || {
                format!("{}: dim A({n})/I({n}) = {q} above {}", nt.name, bounds[n as usize])
            });
            dims.push(q);
        }
        let mut words = 0u64;
        for n in 1..=n_max {
            let oracle = IdealOracle::new(tower, n)?;
            for w in enumerate_words(n)? {
                words += 1;
                let dense = comps[n as usize].contains_word(&w)?;
                let projected = oracle.contains(&FreeVector::from_word(w))?;
                t.check(dense == projected, || format!("{}: {w} dense {dense}, projected {projected}", nt.name));
            }
        }
        details.push(json!({
            "tower": nt.name,
            "quotientDims": dims,
            "upperBounds": bounds.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "wordsCompared": words,
        }));
    }
    Ok(t.report("ideal", json!({ "towers": details })))
}

/// The smallest toy tower accepted for `S_1 = {x}`, with `x^{2·2^f}` in `I`
/// and `x` outside it.
pub fn suite_nil(field: FieldSpec, max_level: u32) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let s: WordSet = "x".parse()?;
    let (f, g) = smallest_toy_entry(&s, 0, &field)?;
    let overrides = crate::schedule::ToyOverrides { f: vec![f.into()], g: vec![g.into()], sets: vec![s.clone()], field };
    let sched = build_schedule(&AlphaSpec::Log2Log2, 1, Grade::Toy, Some(&overrides))?;
    let params = TowerParams::new(sched.f(), sched.g(), vec![RelationSlot::recipe(1, s)], max_level, field)?;
    let tower = ProjectionTower::build(&params)?;
    let x = FreeVector::from_word(Word::x());
    let e = 2u32 << f;
    let yes = nil_check(&tower, &x, e)?;
    t.check(yes.nil, || format!("x^{e} not in I"));
    t.check(!yes.certificate.windows.is_empty() && yes.certificate.windows.iter().all(|w| w.vanished), || "incomplete certificate".into());
    let no = nil_check(&tower, &x, 1)?;
    t.check(!no.nil, || "x in I".into());
    Ok(t.report("nil", json!({ "f": f, "g": g, "positive": yes, "negative": no })))
}

/// The published chain-dimension estimate at every level `n >= 1` of every
/// tower.
/// The recount that charges started ramps is reported alongside.
pub fn suite_chain_estimate(towers: &[NamedTower]) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut details = Vec::new();
    for nt in towers {
        let mut rows = Vec::new();
        for n in 1..=nt.tower.max_level() {
            let r = growth_check(&nt.tower, n)?;
            t.check(r.published_holds, || format!("{}: n={n} chain {} exceeds {}", nt.name, r.chain_dim, r.published_bound));
            rows.push(serde_json::to_value(&r).expect("serializable"));
        }
        details.push(json!({"tower": nt.name, "rows": rows}));
    }
    Ok(t.report("prop36", json!({ "towers": details })))
}

/// `g` values against direct power comparison, the theorem-grade `f(1)`,
/// and the inequality chain at sampled `n`.
pub fn suite_schedule(alpha: &AlphaSpec, samples: usize) -> Result<SuiteReport> {
    let mut t = Tally::new();
    let mut g_rows = Vec::new();
    for (f, s, want) in [(3u64, "x", 3u64), (6, "x", 4), (6, "x,y", 4)] {
        let set: WordSet = s.parse()?;
        let arg = formula_argument(f, &set);
        // least g with arg <= 2^{2^g}
        let direct = (0u64..).find(|&g| arg <= BigUint::one() << (1u64 << g)).expect("finite");
        let g = g_formula(&BigUint::from(f), &set);
        t.check(g == BigUint::from(want) && direct == want, || format!("g({f}, {set}) = {g}, direct {direct}, expected {want}"));
        g_rows.push(json!({"f": f, "S": s, "argument": arg.to_string(), "g": g.to_string()}));
    }
    let sched = build_schedule(alpha, 3, Grade::Theorem, None)?;
    let f1 = &sched.entries[0].f;
    t.check(*f1 > BigUint::one() << 32u32, || format!("theorem-grade f(1) = {f1} is not above 2^32"));
    let chain = verify_schedule(&sched, alpha, samples);
    t.check(chain.samples.len() == samples, || "missing samples".into());
    t.check(chain.chain_holds, || "a link of the chain failed".into());
    t.check(chain.absorption_threshold == 85 && chain.threshold_log2_n.is_some(), || "absorption threshold not reported".into());
    Ok(t.report("schedule", json!({ "g": g_rows, "schedule": sched, "chain": chain })))
}
