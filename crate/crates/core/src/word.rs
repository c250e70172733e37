//! Words over the alphabet `{x, y}`, bit-packed into a `u128`.
//!
//! Letter `x` is bit 0, `y` is bit 1, and the first letter is the most
//! significant of the `len` low bits. With that packing the derived ordering
//! on `(len, bits)` is exactly length-lexicographic order with `x < y`, and
//! the bit value of a length-`n` word is its position in [`enumerate_words`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_WORD_LEN: u32 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u32,
    bits: u128,
}

#[inline]
fn mask(len: u32) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn x() -> Word {
        Word { len: 1, bits: 0 }
    }

    pub fn y() -> Word {
        Word { len: 1, bits: 1 }
    }

    /// The word of length `len` whose position in the fixed order is `index`.
    pub fn from_index(len: u32, index: u128) -> Result<Word> {
        if len > MAX_WORD_LEN {
            return Err(Error::WordTooLong(len));
        }
        debug_assert!(index & !mask(len) == 0);
        Ok(Word { len, bits: index & mask(len) })
    }

    pub fn from_letters(letters: &[bool]) -> Result<Word> {
        let len = letters.len() as u32;
        if len > MAX_WORD_LEN {
            return Err(Error::WordTooLong(len));
        }
        let bits = letters.iter().fold(0u128, |acc, &b| (acc << 1) | b as u128);
        Ok(Word { len, bits })
    }

    /// `x^k`
    pub fn power_of_x(k: u32) -> Result<Word> {
        Word::from_index(k, 0)
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Position among the words of the same length.
    #[inline]
    pub fn index(&self) -> u128 {
        self.bits
    }

    /// Letter at position `i` (`false` = x, `true` = y).
    pub fn letter(&self, i: u32) -> bool {
        assert!(i < self.len);
        (self.bits >> (self.len - 1 - i)) & 1 == 1
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        let len = self.len + other.len;
        if len > MAX_WORD_LEN {
            return Err(Error::WordTooLong(len));
        }
        let hi = if other.len >= 128 { 0 } else { self.bits << other.len };
        Ok(Word { len, bits: hi | other.bits })
    }

    /// Subword `[start, start + len)`.
    pub fn slice(&self, start: u32, len: u32) -> Word {
        assert!(start + len <= self.len, "slice out of range");
        let shift = self.len - start - len;
        let bits = if shift >= 128 { 0 } else { (self.bits >> shift) & mask(len) };
        Word { len, bits }
    }

    pub fn split_at(&self, at: u32) -> (Word, Word) {
        (self.slice(0, at), self.slice(at, self.len - at))
    }

    pub fn pow(&self, k: u32) -> Result<Word> {
        let mut acc = Word::EMPTY;
        for _ in 0..k {
            acc = acc.concat(self)?;
        }
        Ok(acc)
    }

    pub fn letters(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.letter(i))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return f.write_str("1");
        }
        for b in self.letters() {
            f.write_str(if b { "y" } else { "x" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts strings over `{x, y}`; `""` and `"1"` denote the empty word.
    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::EMPTY);
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'x' => Ok(false),
                'y' => Ok(true),
                other => Err(Error::Parse(format!("unexpected letter {other:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_letters(&letters)
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All `2^n` words of length `n` in the fixed order.
pub fn enumerate_words(n: u32) -> Result<impl Iterator<Item = Word>> {
    if n > 40 {
        return Err(Error::Capacity { degree: n, what: "word enumeration".into() });
    }
    Ok((0..(1u128 << n)).map(move |i| Word { len: n, bits: i }))
}

/// Exponents of the binary expansion of `n`, strictly increasing.
pub fn binary_expansion(n: u64) -> Result<Vec<u32>> {
    if n == 0 {
        return Err(Error::InvalidParams("binary expansion of 0".into()));
    }
    Ok((0..64).filter(|i| (n >> i) & 1 == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_small_degrees() {
        let e: Vec<String> = enumerate_words(0).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(e, vec!["1"]);
        let e: Vec<String> = enumerate_words(1).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(e, vec!["x", "y"]);
        let e: Vec<String> = enumerate_words(2).unwrap().map(|w| w.to_string()).collect();
        assert_eq!(e, vec!["xx", "xy", "yx", "yy"]);
        assert_eq!(enumerate_words(10).unwrap().count(), 1024);
    }

    #[test]
    fn binary_expansions() {
        assert_eq!(binary_expansion(13).unwrap(), vec![0, 2, 3]);
        assert_eq!(binary_expansion(1).unwrap(), vec![0]);
        assert_eq!(binary_expansion(6).unwrap(), vec![1, 2]);
        assert!(binary_expansion(0).is_err());
    }

    #[test]
    fn order_is_length_lex() {
        assert!(w("y") < w("xx"));
        assert!(w("xy") < w("yx"));
        assert!(Word::EMPTY < w("x"));
    }

    #[test]
    fn concat_limits() {
        let long = Word::power_of_x(100).unwrap();
        assert!(long.concat(&long).is_err());
        let full = Word::from_index(128, u128::MAX).unwrap();
        assert_eq!(full.slice(127, 1), Word::y());
        assert_eq!(Word::EMPTY.concat(&full).unwrap(), full);
    }

    #[test]
    fn parse_rejects_junk() {
        assert!("xz".parse::<Word>().is_err());
    }

    proptest! {
        #[test]
        fn concat_is_associative(a in 0u128..64, la in 0u32..7, b in 0u128..64, lb in 0u32..7, c in 0u128..64, lc in 0u32..7) {
            let a = Word::from_index(la, a & mask(la)).unwrap();
            let b = Word::from_index(lb, b & mask(lb)).unwrap();
            let c = Word::from_index(lc, c & mask(lc)).unwrap();
            let left = a.concat(&b).unwrap().concat(&c).unwrap();
            let right = a.concat(&b.concat(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(left.len(), la + lb + lc);
            prop_assert_eq!(a.concat(&Word::EMPTY).unwrap(), a);
            let (p, q) = left.split_at(la);
            prop_assert_eq!(p, a);
            prop_assert_eq!(q, b.concat(&c).unwrap());
        }

        #[test]
        fn display_parse_roundtrip(bits in any::<u128>(), len in 0u32..=128) {
            let w = Word::from_index(len, bits & mask(len)).unwrap();
            prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
    }
}
