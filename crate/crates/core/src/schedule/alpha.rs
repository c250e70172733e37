//! Slowly growing exponent functions `α`, evaluated as exact rational lower
//! bounds so that every comparison built on them is a proof.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonnegative exact rational.
pub type Rational = Ratio<BigUint>;

/// Denominator of the built-in lower bounds.
const PRECISION: u32 = 256;
/// Above this many bits `n^256` is not formed and `log2 n` is bounded by
/// its bit length alone.
const FINE_LOG_BITS: u64 = 1 << 16;

/// One step of a user table: `α(n) = value` for `n >= from` up to the next
/// step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableStep {
    pub from: BigUint,
    /// `"p/q"` or `"p"`.
    pub value: String,
}

/// Serialized as its textual form, see [`FromStr`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AlphaSpec {
    Log2Log2,
    Log2,
    SqrtLog,
    Table(Vec<TableStep>),
}

fn parse_ratio(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<BigUint>().map_err(|_| bad())?, q.trim().parse::<BigUint>().map_err(|_| bad())?),
        None => (s.trim().parse::<BigUint>().map_err(|_| bad())?, BigUint::one()),
    };
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Ratio::new(p, q))
}

/// `floor(PRECISION * log2 n)` for `n >= 1`.
fn log2_floor_scaled(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let bits = n.bits();
    if n.count_ones() == 1 {
        return BigUint::from(bits - 1) * PRECISION;
    }
    if bits > FINE_LOG_BITS {
        return BigUint::from(bits - 1) * PRECISION;
    }
    BigUint::from(n.pow(PRECISION).bits() - 1)
}

/// `floor(PRECISION * log2 x)` for a rational `x = a / PRECISION` given by
/// its scaled numerator, clamped at zero.
fn log2_of_scaled(a: &BigUint) -> BigUint {
    let l = log2_floor_scaled(a);
    let shift = BigUint::from(PRECISION) * 8u32;
    if l > shift {
        l - shift
    } else {
        BigUint::zero()
    }
}

impl AlphaSpec {
    pub fn validate(&self) -> Result<()> {
        if let AlphaSpec::Table(steps) = self {
            if steps.is_empty() {
                return Err(Error::InvalidParams("empty alpha table".into()));
            }
            let values = steps.iter().map(|s| parse_ratio(&s.value)).collect::<Result<Vec<_>>>()?;
            for w in steps.windows(2) {
                if w[0].from >= w[1].from {
                    return Err(Error::InvalidParams("alpha table steps must have increasing starts".into()));
                }
            }
            if values.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidParams("alpha table must be weakly increasing".into()));
            }
            if values.first() == values.last() {
                return Err(Error::InvalidParams("a constant alpha does not tend to infinity".into()));
            }
        }
        Ok(())
    }

    /// Exact lower bound of `α(n)`.
    pub fn lower(&self, n: &BigUint) -> Rational {
        let p = BigUint::from(PRECISION);
        if *n <= BigUint::one() {
            return self.table_value(n).unwrap_or_else(Rational::zero);
        }
        let log = log2_floor_scaled(n);
        match self {
            AlphaSpec::Log2 => Ratio::new(log, p),
            AlphaSpec::Log2Log2 => Ratio::new(log2_of_scaled(&log), p),
            AlphaSpec::SqrtLog => Ratio::new((log * &p).sqrt(), p),
            AlphaSpec::Table(_) => self.table_value(n).unwrap_or_else(Rational::zero),
        }
    }

    /// Exact lower bound of `α(2^m)`.
    pub fn lower_at_pow2(&self, m: &BigUint) -> Rational {
        let p = BigUint::from(PRECISION);
        match self {
            AlphaSpec::Log2 => Ratio::from_integer(m.clone()),
            AlphaSpec::Log2Log2 => {
                if m.is_zero() {
                    Rational::zero()
                } else {
                    Ratio::new(log2_floor_scaled(m), p)
                }
            }
            AlphaSpec::SqrtLog => Ratio::new((m * &p * &p).sqrt(), p),
            AlphaSpec::Table(steps) => {
                let mut val = Rational::zero();
                for s in steps {
                    // from <= 2^m
                    let fits = s.from.bits() <= m.to_u64().unwrap_or(u64::MAX)
                        || (s.from.count_ones() == 1 && BigUint::from(s.from.bits() - 1) == *m);
                    if fits {
                        val = parse_ratio(&s.value).unwrap_or_else(|_| Rational::zero());
                    }
                }
                val
            }
        }
    }

    fn table_value(&self, n: &BigUint) -> Option<Rational> {
        match self {
            AlphaSpec::Table(steps) => Some(
                steps.iter().take_while(|s| s.from <= *n).last().and_then(|s| parse_ratio(&s.value).ok()).unwrap_or_else(Rational::zero),
            ),
            _ => None,
        }
    }

    /// `floor(n^{α_lo(n)})`, with the value `1` at `n = 0`.
    pub fn n_pow_alpha_floor(&self, n: u64) -> BigUint {
        if n <= 1 {
            return BigUint::one();
        }
        let a = self.lower(&BigUint::from(n));
        let (num, den) = (a.numer(), a.denom());
        let (Some(num), Some(den)) = (num.to_u32(), den.to_u32()) else {
            return BigUint::one();
        };
        BigUint::from(n).pow(num).nth_root(den)
    }

    /// Least `m` with `α_lo(2^m) >= target`, if the function gets there.
    pub fn threshold_log2(&self, target: &Rational) -> Option<BigUint> {
        let reaches = |m: &BigUint| self.lower_at_pow2(m) >= *target;
        let mut hi = BigUint::one();
        let mut steps = 0;
        while !reaches(&hi) {
            hi <<= 1u32;
            steps += 1;
            if steps > 4096 {
                return None;
            }
        }
        let mut lo = BigUint::zero();
        if reaches(&lo) {
            return Some(lo);
        }
        // reaches(hi) and !reaches(lo)
        while &hi - &lo > BigUint::one() {
            let mid = (&lo + &hi) >> 1u32;
            if reaches(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Log2Log2 => f.write_str("log2log2"),
            AlphaSpec::Log2 => f.write_str("log2"),
            AlphaSpec::SqrtLog => f.write_str("sqrt-log"),
            AlphaSpec::Table(steps) => {
                f.write_str("table:")?;
                for (i, s) in steps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}={}", s.from, s.value)?;
                }
                Ok(())
            }
        }
    }
}

impl From<AlphaSpec> for String {
    fn from(a: AlphaSpec) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for AlphaSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// `log2log2`, `log2`, `sqrt-log`, or `table:FROM=VALUE,...`.
impl FromStr for AlphaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = match s.trim() {
            "log2log2" => AlphaSpec::Log2Log2,
            "log2" => AlphaSpec::Log2,
            "sqrt-log" => AlphaSpec::SqrtLog,
            other => {
                let body = other.strip_prefix("table:").ok_or_else(|| Error::Parse(format!("unknown alpha {other:?}")))?;
                let steps = body
                    .split(',')
                    .map(|part| {
                        let (from, value) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad table step {part:?}")))?;
                        let from = from.trim().parse().map_err(|_| Error::Parse(format!("bad table start {from:?}")))?;
                        parse_ratio(value)?;
                        Ok(TableStep { from, value: value.trim().to_string() })
                    })
                    .collect::<Result<Vec<_>>>()?;
                AlphaSpec::Table(steps)
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: u64, q: u64) -> Rational {
        Ratio::new(BigUint::from(p), BigUint::from(q))
    }

    #[test]
    fn lower_bounds_below_true_values() {
        for n in 2u64..2000 {
            let nb = BigUint::from(n);
            let l2 = (n as f64).log2();
            let a = AlphaSpec::Log2.lower(&nb);
            assert!(a.to_integer() <= BigUint::from(l2 as u64));
            let v = a.numer().to_f64().unwrap() / a.denom().to_f64().unwrap();
            assert!(v <= l2 + 1e-12 && v > l2 - 1.0 / 256.0 - 1e-9, "n={n}");
            let ll = AlphaSpec::Log2Log2.lower(&nb);
            let v = ll.numer().to_f64().unwrap() / ll.denom().to_f64().unwrap();
            assert!(v <= l2.log2().max(0.0) + 1e-12, "n={n}");
            let sq = AlphaSpec::SqrtLog.lower(&nb);
            let v = sq.numer().to_f64().unwrap() / sq.denom().to_f64().unwrap();
            assert!(v <= l2.sqrt() + 1e-12, "n={n}");
        }
    }

    #[test]
    fn pow2_arguments() {
        let m = (BigUint::one() << 32u32) + 1u32;
        assert_eq!(AlphaSpec::Log2Log2.lower_at_pow2(&m).to_integer(), BigUint::from(32u32));
        assert_eq!(AlphaSpec::Log2.lower_at_pow2(&BigUint::from(9u32)), r(9, 1));
        assert_eq!(AlphaSpec::SqrtLog.lower_at_pow2(&BigUint::from(9u32)), r(3, 1));
        assert_eq!(AlphaSpec::Log2Log2.lower_at_pow2(&BigUint::from(16u32)), r(4, 1));
    }

    #[test]
    fn thresholds() {
        let t = r(85, 1);
        assert_eq!(AlphaSpec::Log2.threshold_log2(&t), Some(BigUint::from(85u32)));
        assert_eq!(AlphaSpec::SqrtLog.threshold_log2(&t), Some(BigUint::from(85u32 * 85)));
        assert_eq!(AlphaSpec::Log2Log2.threshold_log2(&t), Some(BigUint::one() << 85u32));
    }

    #[test]
    fn table_parsing_and_rejection() {
        let a: AlphaSpec = "table:1=1,16=2,256=5/2".parse().unwrap();
        assert_eq!(a.lower(&BigUint::from(20u32)), r(2, 1));
        assert_eq!(a.lower_at_pow2(&BigUint::from(8u32)), r(5, 2));
        assert_eq!(a.lower_at_pow2(&BigUint::from(7u32)), r(2, 1));
        assert!("table:1=3,10=3".parse::<AlphaSpec>().is_err());
        assert!("table:10=1,5=2".parse::<AlphaSpec>().is_err());
        assert!("table:1=2,5=1".parse::<AlphaSpec>().is_err());
        assert_eq!(a.to_string().parse::<AlphaSpec>().unwrap(), a);
    }

    #[test]
    fn n_pow_alpha() {
        assert_eq!(AlphaSpec::Log2.n_pow_alpha_floor(0), BigUint::one());
        assert_eq!(AlphaSpec::Log2.n_pow_alpha_floor(4), BigUint::from(16u32));
        assert_eq!(AlphaSpec::Log2Log2.n_pow_alpha_floor(16), BigUint::from(256u32));
        assert_eq!(AlphaSpec::Log2Log2.n_pow_alpha_floor(2), BigUint::one());
    }
}
