//! Degree-homogeneous elements of the free algebra.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::word::Word;

/// A homogeneous element `sum c_w w` with every `w` of length `degree`.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeVector {
    degree: u32,
    terms: BTreeMap<Word, u32>,
}

impl FreeVector {
    pub fn zero(degree: u32) -> Self {
        FreeVector { degree, terms: BTreeMap::new() }
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, 1);
        FreeVector { degree: w.len(), terms }
    }

    /// Builds a vector from `(word, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(degree: u32, field: &FieldSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, u32)>,
    {
        let mut v = FreeVector::zero(degree);
        for (w, c) in terms {
            v.add_term(field, w, c)?;
        }
        Ok(v)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> u32 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &u32)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    /// Order-least support word.
    pub fn leading_word(&self) -> Option<Word> {
        self.terms.keys().next().copied()
    }

    pub fn add_term(&mut self, field: &FieldSpec, w: Word, c: u32) -> Result<()> {
        if w.len() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: w.len() });
        }
        let c = c % field.characteristic();
        if c == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(w).or_insert(0);
        *entry = field.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&w);
        }
        Ok(())
    }

    pub fn add(&self, field: &FieldSpec, other: &FreeVector) -> Result<FreeVector> {
        self.add_scaled(field, 1, other)
    }

    /// `self + c * other`
    pub fn add_scaled(&self, field: &FieldSpec, c: u32, other: &FreeVector) -> Result<FreeVector> {
        if other.degree != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (w, d) in &other.terms {
            out.add_term(field, *w, field.mul(c, *d))?;
        }
        Ok(out)
    }

    pub fn scale(&self, field: &FieldSpec, c: u32) -> FreeVector {
        let c = c % field.characteristic();
        if c == 0 {
            return FreeVector::zero(self.degree);
        }
        FreeVector { degree: self.degree, terms: self.terms.iter().map(|(w, d)| (*w, field.mul(c, *d))).collect() }
    }

    /// Product in the free algebra (bilinear extension of concatenation).
    pub fn mul(&self, field: &FieldSpec, other: &FreeVector) -> Result<FreeVector> {
        let mut out = FreeVector::zero(self.degree + other.degree);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(field, u.concat(v)?, field.mul(*a, *b))?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, field: &FieldSpec, e: u32) -> Result<FreeVector> {
        let mut acc = FreeVector::from_word(Word::EMPTY);
        for _ in 0..e {
            acc = acc.mul(field, self)?;
        }
        Ok(acc)
    }

    /// Parses `"c*w + c*w - w ..."`. A bare word has coefficient 1; `"0"`
    /// denotes the zero vector, whose degree is taken from `degree_hint`.
    pub fn parse(s: &str, field: &FieldSpec, degree_hint: Option<u32>) -> Result<FreeVector> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty vector".into()));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                pieces.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if ch == '-' && i == 0 {
                negative = true;
            } else if ch == '+' && i == 0 {
            } else {
                current.push(ch);
            }
        }
        pieces.push((negative, current));

        let mut parsed: Vec<(Word, u32)> = Vec::new();
        for (neg, piece) in pieces {
            if piece.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            if piece == "0" {
                continue;
            }
            let (coeff, word) = match piece.split_once('*') {
                Some((c, w)) => {
                    let c: u64 = c.parse().map_err(|_| Error::Parse(format!("bad coefficient {c:?} in {s:?}")))?;
                    (field.from_u64(c), w.parse::<Word>()?)
                }
                None => (1, piece.parse::<Word>()?),
            };
            let coeff = if neg { field.neg(coeff) } else { coeff };
            parsed.push((word, coeff));
        }
        let degree = match (parsed.first(), degree_hint) {
            (Some((w, _)), _) => w.len(),
            (None, Some(d)) => d,
            (None, None) => return Err(Error::Parse("cannot infer the degree of 0".into())),
        };
        if let Some((w, _)) = parsed.iter().find(|(w, _)| w.len() != degree) {
            return Err(Error::Parse(format!("non-homogeneous element: {w} has length {}, expected {degree}", w.len())));
        }
        FreeVector::from_terms(degree, field, parsed)
    }
}

impl fmt::Display for FreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c == 1 {
                write!(f, "{w}")?;
            } else {
                write!(f, "{c}*{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let f = FieldSpec::new(3).unwrap();
        let v = FreeVector::parse("x + 2*y", &f, None).unwrap();
        assert_eq!(v.to_string(), "x + 2*y");
        let v = FreeVector::parse("xy - yx", &f, None).unwrap();
        assert_eq!(v.to_string(), "xy + 2*yx");
        let z = FreeVector::parse("x - x", &f, None).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 1);
        assert!(FreeVector::parse("0", &f, None).is_err());
        assert_eq!(FreeVector::parse("0", &f, Some(4)).unwrap().degree(), 4);
    }

    #[test]
    fn non_homogeneous_is_rejected() {
        let f = FieldSpec::gf2();
        assert!(matches!(FreeVector::parse("x + xy", &f, None), Err(Error::Parse(_))));
    }

    #[test]
    fn bilinear_product_over_gf2() {
        let f = FieldSpec::gf2();
        let s = FreeVector::parse("x + y", &f, None).unwrap();
        let sq = s.mul(&f, &s).unwrap();
        assert_eq!(sq.to_string(), "xx + xy + yx + yy");
        let p = s.pow(&f, 3).unwrap();
        assert_eq!(p.len(), 8);
    }
}
