//! Growth of the quotient `A / I`: boundary spaces, the ideal `I`, Hilbert
//! data with its upper bound, the chain-dimension estimate, and nil checks.

pub mod boundary;
pub mod dense;
pub mod ideal;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::schedule::AlphaSpec;
use crate::tower::ProjectionTower;
use crate::vector::FreeVector;

pub use boundary::{boundary_spaces, chain_complement, check_chain_span, BoundaryQuad, ChainComplement, ChainSpanCheck, Side};
pub use dense::{dense_boundary, dense_ideal_component, DENSE_MAX_N};
pub use ideal::{ideal_certificate, ideal_contains, Certificate, IdealOracle, WindowCheck};

pub(crate) use crate::tower::context::word_kernel;

/// `m + 1` where `2^m <= n < 2^{m+1}`.
pub fn context_level(n: u32) -> u32 {
    32 - n.leading_zeros()
}

/// `dim A(n) / I(n)`: dense for `n <= 7`, projected above while the tower
/// is deep enough and `2^n` words can be enumerated. `None` otherwise.
pub fn quotient_dim(tower: &ProjectionTower, n: u32) -> Result<Option<usize>> {
    if n == 0 {
        return Ok(Some(1));
    }
    if n <= DENSE_MAX_N && context_level(n) <= tower.max_level() {
        return Ok(Some((1usize << n) - dense_ideal_component(tower, n)?.dim()));
    }
    if n <= ideal::IDEAL_WORDS_MAX_N && context_level(n) < tower.max_level() {
        return Ok(Some(IdealOracle::new(tower, n)?.quotient_dim()?));
    }
    Ok(None)
}

/// `(dim L'(n), dim R'(n))`, with `(1, 1)` at `n = 0`.
pub fn complement_dims(tower: &ProjectionTower, n: u32) -> Result<(usize, usize)> {
    if n == 0 {
        return Ok((1, 1));
    }
    Ok((chain_complement(tower, n, Side::Left)?.dim(), chain_complement(tower, n, Side::Right)?.dim()))
}

/// `Σ_j dim L'(j) · dim R'(n - j)` for every `n <= n_max`.
pub fn hilbert_upper_bounds(tower: &ProjectionTower, n_max: u32) -> Result<Vec<BigUint>> {
    let dims: Vec<(usize, usize)> = (0..=n_max).into_par_iter().map(|j| complement_dims(tower, j)).collect::<Result<_>>()?;
    Ok((0..=n_max as usize).map(|n| (0..=n).map(|j| BigUint::from(dims[j].0) * BigUint::from(dims[n - j].1)).sum()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HilbertRow {
    pub n: u32,
    pub exact_dim: Option<usize>,
    #[serde(with = "crate::bignum")]
    pub upper_bound: BigUint,
    #[serde(with = "crate::bignum")]
    pub n_pow_alpha: BigUint,
    /// `exact_dim <= upper_bound`, vacuous when the exact value is missing.
    pub within_bound: bool,
}

pub fn hilbert_rows(tower: &ProjectionTower, n_max: u32, exact_max: u32, alpha: &AlphaSpec) -> Result<Vec<HilbertRow>> {
    let bounds = hilbert_upper_bounds(tower, n_max)?;
    let exact: Vec<Option<usize>> =
        (0..=n_max).into_par_iter().map(|n| if n <= exact_max { quotient_dim(tower, n) } else { Ok(None) }).collect::<Result<_>>()?;
    Ok((0..=n_max)
        .map(|n| {
            let upper_bound = bounds[n as usize].clone();
            let exact_dim = exact[n as usize];
            let within_bound = exact_dim.is_none_or(|e| BigUint::from(e) <= upper_bound);
            HilbertRow { n, exact_dim, upper_bound, n_pow_alpha: alpha.n_pow_alpha_floor(u64::from(n)), within_bound }
        })
        .collect())
}

pub fn hilbert_csv(rows: &[HilbertRow]) -> String {
    let mut out = String::from("n,exact_dim,upper_bound,n_pow_alpha,within_bound\n");
    for r in rows {
        let exact = r.exact_dim.map(|e| e.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{},{}\n", r.n, exact, r.upper_bound, r.n_pow_alpha, u8::from(r.within_bound)));
    }
    out
}

/// A maximal run of consecutive levels in `T`, as `(start, end)`.
fn ramps(tower: &ProjectionTower) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &t in tower.t_levels() {
        match out.last_mut() {
            Some((_, e)) if *e + 1 == t => *e = t,
            _ => out.push((t, t)),
        }
    }
    out
}

/// Chain dimension `dim V(1) V(2) ⋯ V(2^n)` against two bounds: the
/// published one, which charges `2^{2^g}` for each completed ramp
/// (`f ≤ n`), and a recount that charges `2^{2^{g+1}}` for every ramp
/// already entered and `2` for every other level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GrowthReport {
    pub n: u32,
    pub completed_ramps: usize,
    pub started_ramps: usize,
    #[serde(with = "crate::bignum")]
    pub chain_dim: BigUint,
    #[serde(with = "crate::bignum")]
    pub reversed_chain_dim: BigUint,
    #[serde(with = "crate::bignum")]
    pub published_bound: BigUint,
    #[serde(with = "crate::bignum")]
    pub corrected_bound: BigUint,
    pub published_holds: bool,
    pub corrected_holds: bool,
}

pub fn growth_check(tower: &ProjectionTower, n: u32) -> Result<GrowthReport> {
    tower.level(n)?;
    let chain_dim: BigUint = (0..=n).map(|k| BigUint::from(tower.dim(k))).product();
    let reversed_chain_dim: BigUint = (0..=n).rev().map(|k| BigUint::from(tower.dim(k))).product();
    let mut published_exp = BigUint::from(2 * n);
    let mut corrected_exp = BigUint::from(n + 1);
    let (mut completed_ramps, mut started_ramps) = (0, 0);
    for (s, e) in ramps(tower) {
        let g = e - s;
        if e < n {
            completed_ramps += 1;
            published_exp += BigUint::one() << g;
        }
        if s <= n {
            started_ramps += 1;
            corrected_exp += BigUint::one() << (g + 1);
        }
    }
    let pow2 = |e: &BigUint| -> Result<BigUint> {
        let e = u32::try_from(e).map_err(|_| Error::Capacity { degree: n, what: "bound exponent".into() })?;
        Ok(BigUint::one() << e)
    };
    let published_bound = pow2(&published_exp)?;
    let corrected_bound = pow2(&corrected_exp)?;
    Ok(GrowthReport {
        n,
        completed_ramps,
        started_ramps,
        published_holds: chain_dim <= published_bound && reversed_chain_dim <= published_bound,
        corrected_holds: chain_dim <= corrected_bound && reversed_chain_dim <= corrected_bound,
        chain_dim,
        reversed_chain_dim,
        published_bound,
        corrected_bound,
    })
}

/// Verdict of `y^e ∈ I` with its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NilVerdict {
    pub element: String,
    pub exponent: u32,
    pub nil: bool,
    pub certificate: Certificate,
}

pub fn nil_check(tower: &ProjectionTower, y: &FreeVector, e: u32) -> Result<NilVerdict> {
    if y.degree() == 0 || e == 0 {
        return Err(Error::InvalidParams("nil check needs positive degree and exponent".into()));
    }
    let power = y.pow(tower.field(), e)?;
    let certificate = if power.is_zero() {
        Certificate { degree: y.degree() * e, level: 0, windows: Vec::new(), member: true }
    } else {
        ideal_certificate(tower, &power)?
    };
    Ok(NilVerdict { element: y.to_string(), exponent: e, nil: certificate.member, certificate })
}
