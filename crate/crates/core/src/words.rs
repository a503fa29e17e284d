//! Words in the Dehn-twist letters `C_i`, `B_{2j}` and the named elements
//! built from them.
//!
//! Words compose functionally: in `C_2 C_1` the twist `C_1` is applied first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::Genus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LetterKind {
    C,
    B,
}

/// A twist letter `C_i^{±1}` or `B_{2j}^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub kind: LetterKind,
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn c(index: usize) -> Self {
        Letter { kind: LetterKind::C, index, inverse: false }
    }

    pub fn c_inv(index: usize) -> Self {
        Letter { kind: LetterKind::C, index, inverse: true }
    }

    pub fn b(index: usize) -> Self {
        Letter { kind: LetterKind::B, index, inverse: false }
    }

    pub fn inv(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }

    pub fn positive(self) -> Self {
        Letter { inverse: false, ..self }
    }

    /// Name of the underlying positive letter, e.g. `C3` or `B4`.
    pub fn name(&self) -> String {
        match self.kind {
            LetterKind::C => format!("C{}", self.index),
            LetterKind::B => format!("B{}", self.index),
        }
    }

    pub fn validate(&self, genus: Genus) -> Result<()> {
        let g = genus.get();
        let ok = match self.kind {
            LetterKind::C => (1..=2 * g + 1).contains(&self.index),
            LetterKind::B => g >= 3 && self.index.is_multiple_of(2) && (4..=2 * g - 2).contains(&self.index),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLetter(format!("{self} in genus {g}")))
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// A finite product of letters; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GenWord {
    letters: Vec<Letter>,
}

impl GenWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GenWord { letters }
    }

    pub fn identity() -> Self {
        GenWord::default()
    }

    /// Positive word `C_{i_1} C_{i_2} ⋯`.
    pub fn from_c(indices: &[usize]) -> Self {
        GenWord { letters: indices.iter().map(|&i| Letter::c(i)).collect() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GenWord { letters }
    }

    pub fn inverse(&self) -> GenWord {
        GenWord { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn pow(&self, k: i64) -> GenWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = GenWord::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Cancels adjacent `L L^{-1}` pairs.
    pub fn free_reduce(&self) -> GenWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last().is_some_and(|&last| last == l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GenWord { letters: out }
    }

    pub fn only_c_letters(&self) -> bool {
        self.letters.iter().all(|l| l.kind == LetterKind::C)
    }

    pub fn validate(&self, genus: Genus) -> Result<()> {
        self.letters.iter().try_for_each(|l| l.validate(genus))
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for GenWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GenWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_word_unchecked(&s).map_err(serde::de::Error::custom)
    }
}

/// The named elements built from twist letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedElement {
    /// `X_i = C_{i+1} C_i C_{i+1}^{-1}`
    X(usize),
    /// `X*_i = C_{i+1}^{-1} C_i C_{i+1}`
    XStar(usize),
    /// `Y_{2j} = C_{2j} B_{2j} C_{2j}^{-1}`, carrying the even index `2j`
    Y(usize),
    /// `Y*_{2j} = C_{2j}^{-1} B_{2j} C_{2j}`
    YStar(usize),
    /// `D_i = C_i^2`
    D(usize),
    /// `DB_{2j} = B_{2j}^2`
    DB(usize),
    /// `T = C_1 C_3 C_5` (genus 2)
    T,
    /// `T_1 = C_1 C_3 B_4` (genus >= 3)
    T1,
    /// `T_2 = B_4 C_5 C_7 ⋯ C_{2g+1}` (genus >= 3)
    T2,
}

impl NamedElement {
    fn genus_error(&self, genus: Genus) -> Error {
        Error::NamedGenus { name: self.to_string(), genus: genus.get() }
    }

    pub fn validate(&self, genus: Genus) -> Result<()> {
        let g = genus.get();
        let ok = match *self {
            NamedElement::X(i) | NamedElement::XStar(i) => (1..=2 * g).contains(&i),
            NamedElement::Y(k) | NamedElement::YStar(k) | NamedElement::DB(k) => {
                g >= 3 && k % 2 == 0 && (4..=2 * g - 2).contains(&k)
            }
            NamedElement::D(i) => (1..=2 * g + 1).contains(&i),
            NamedElement::T => g == 2,
            NamedElement::T1 | NamedElement::T2 => g >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(self.genus_error(genus))
        }
    }

    /// The defining word.
    pub fn expand(&self, genus: Genus) -> Result<GenWord> {
        self.validate(genus)?;
        let g = genus.get();
        use Letter as L;
        let letters = match *self {
            NamedElement::X(i) => vec![L::c(i + 1), L::c(i), L::c_inv(i + 1)],
            NamedElement::XStar(i) => vec![L::c_inv(i + 1), L::c(i), L::c(i + 1)],
            NamedElement::Y(k) => vec![L::c(k), L::b(k), L::c_inv(k)],
            NamedElement::YStar(k) => vec![L::c_inv(k), L::b(k), L::c(k)],
            NamedElement::D(i) => vec![L::c(i), L::c(i)],
            NamedElement::DB(k) => vec![L::b(k), L::b(k)],
            NamedElement::T => vec![L::c(1), L::c(3), L::c(5)],
            NamedElement::T1 => vec![L::c(1), L::c(3), L::b(4)],
            NamedElement::T2 => {
                let mut v = vec![L::b(4)];
                v.extend((5..=2 * g + 1).step_by(2).map(L::c));
                v
            }
        };
        Ok(GenWord::new(letters))
    }

    /// The listed generators of `G_g`: for `g = 2` the `X_i`, `D_j` and `T`;
    /// for `g >= 3` the `X_i`, `Y_{2j}`, `D_i`, `DB_{2j}`, `T_1`, `T_2`.
    pub fn generators(genus: Genus) -> Vec<NamedElement> {
        let g = genus.get();
        let mut out: Vec<NamedElement> = (1..=2 * g).map(NamedElement::X).collect();
        if g >= 3 {
            out.extend((2..g).map(|j| NamedElement::Y(2 * j)));
        }
        out.extend((1..=2 * g + 1).map(NamedElement::D));
        if g == 2 {
            out.push(NamedElement::T);
        }
        if g >= 3 {
            out.extend((2..g).map(|j| NamedElement::DB(2 * j)));
            out.push(NamedElement::T1);
            out.push(NamedElement::T2);
        }
        out
    }

    /// Every named element defined in this genus, including the starred ones.
    pub fn all(genus: Genus) -> Vec<NamedElement> {
        let g = genus.get();
        let mut out = NamedElement::generators(genus);
        out.extend((1..=2 * g).map(NamedElement::XStar));
        if g >= 3 {
            out.extend((2..g).map(|j| NamedElement::YStar(2 * j)));
        }
        out
    }
}

impl fmt::Display for NamedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedElement::X(i) => write!(f, "X{i}"),
            NamedElement::XStar(i) => write!(f, "Xs{i}"),
            NamedElement::Y(k) => write!(f, "Y{k}"),
            NamedElement::YStar(k) => write!(f, "Ys{k}"),
            NamedElement::D(i) => write!(f, "D{i}"),
            NamedElement::DB(k) => write!(f, "DB{k}"),
            NamedElement::T => write!(f, "T"),
            NamedElement::T1 => write!(f, "T1"),
            NamedElement::T2 => write!(f, "T2"),
        }
    }
}

impl Serialize for NamedElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NamedElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for NamedElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { token: s.to_string(), reason: "unknown named element".into() };
        match s {
            "T" => return Ok(NamedElement::T),
            "T1" => return Ok(NamedElement::T1),
            "T2" => return Ok(NamedElement::T2),
            _ => {}
        }
        let (head, num) = split_index(s).ok_or_else(err)?;
        Ok(match head {
            "X" => NamedElement::X(num),
            "Xs" => NamedElement::XStar(num),
            "Y" => NamedElement::Y(num),
            "Ys" => NamedElement::YStar(num),
            "D" => NamedElement::D(num),
            "DB" => NamedElement::DB(num),
            _ => return Err(err()),
        })
    }
}

fn split_index(s: &str) -> Option<(&str, usize)> {
    let pos = s.find(|c: char| c.is_ascii_digit())?;
    let (head, digits) = s.split_at(pos);
    if head.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((head, digits.parse().ok()?))
}

/// One token of the textual word syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WordToken {
    Letter(Letter),
    Named(NamedElement, i64),
    Identity,
}

impl WordToken {
    pub fn expand(&self, genus: Genus) -> Result<GenWord> {
        match *self {
            WordToken::Letter(l) => {
                l.validate(genus)?;
                Ok(GenWord::new(vec![l]))
            }
            WordToken::Named(n, k) => Ok(n.expand(genus)?.pow(k)),
            WordToken::Identity => Ok(GenWord::identity()),
        }
    }
}

fn parse_token(tok: &str) -> Result<Vec<WordToken>> {
    let bad = |reason: &str| Error::Parse { token: tok.to_string(), reason: reason.to_string() };
    if tok == "1" {
        return Ok(vec![WordToken::Identity]);
    }
    let (base, exp) = match tok.split_once('^') {
        Some((b, e)) => {
            let k: i64 = e.parse().map_err(|_| bad("exponent must be an integer"))?;
            if k == 0 {
                return Err(bad("exponent must be nonzero"));
            }
            (b, k)
        }
        None => (tok, 1),
    };
    if let Some((head, idx)) = split_index(base) {
        let kind = match head {
            "C" => Some(LetterKind::C),
            "B" => Some(LetterKind::B),
            _ => None,
        };
        if let Some(kind) = kind {
            if idx == 0 {
                return Err(bad("letter index must be positive"));
            }
            let letter = Letter { kind, index: idx, inverse: exp < 0 };
            return Ok(vec![WordToken::Letter(letter); exp.unsigned_abs() as usize]);
        }
    }
    let named: NamedElement = base.parse().map_err(|_| bad("unknown token"))?;
    Ok(vec![WordToken::Named(named, exp)])
}

/// Tokenizes a whitespace-separated word without expanding named elements.
pub fn tokenize(input: &str) -> Result<Vec<WordToken>> {
    let mut out = Vec::new();
    for tok in input.split_whitespace() {
        out.extend(parse_token(tok)?);
    }
    Ok(out)
}

/// Parses and expands a word, validating every letter for the genus.
pub fn parse_word(input: &str, genus: Genus) -> Result<GenWord> {
    let mut word = GenWord::identity();
    for t in tokenize(input)? {
        word = word.concat(&t.expand(genus)?);
    }
    Ok(word)
}

/// Parses a word of plain letters without genus checks; named tokens are rejected.
pub fn parse_word_unchecked(input: &str) -> Result<GenWord> {
    let mut word = GenWord::identity();
    for t in tokenize(input)? {
        match t {
            WordToken::Letter(l) => word.push(l),
            WordToken::Identity => {}
            WordToken::Named(n, _) => {
                return Err(Error::Parse { token: n.to_string(), reason: "named elements need a genus".into() })
            }
        }
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(NamedElement::X(1).expand(g(2)).unwrap().to_string(), "C2 C1 C2^-1");
        assert_eq!(NamedElement::T.expand(g(2)).unwrap(), GenWord::from_c(&[1, 3, 5]));
        assert_eq!(NamedElement::D(3).expand(g(3)).unwrap(), GenWord::from_c(&[3, 3]));
        assert_eq!(NamedElement::XStar(2).expand(g(2)).unwrap().to_string(), "C3^-1 C2 C3");
        assert_eq!(NamedElement::T2.expand(g(4)).unwrap().to_string(), "B4 C5 C7 C9");
        assert_eq!(NamedElement::T1.expand(g(3)).unwrap().to_string(), "C1 C3 B4");
        assert_eq!(NamedElement::Y(4).expand(g(3)).unwrap().to_string(), "C4 B4 C4^-1");
        assert_eq!(NamedElement::YStar(4).expand(g(3)).unwrap().to_string(), "C4^-1 B4 C4");
        assert_eq!(NamedElement::DB(4).expand(g(3)).unwrap().to_string(), "B4 B4");
    }

    #[test]
    fn genus_mismatches() {
        assert!(NamedElement::T.expand(g(3)).is_err());
        assert!(NamedElement::Y(4).expand(g(2)).is_err());
        assert!(NamedElement::T1.expand(g(2)).is_err());
        assert!(NamedElement::X(5).expand(g(2)).is_err());
        assert!(NamedElement::D(6).expand(g(2)).is_err());
        assert!(NamedElement::Y(5).expand(g(4)).is_err());
    }

    #[test]
    fn generator_lists() {
        assert_eq!(NamedElement::generators(g(2)).len(), 4 + 5 + 1);
        // X: 6, Y: 1, D: 7, DB: 1, T1, T2
        assert_eq!(NamedElement::generators(g(3)).len(), 6 + 1 + 7 + 1 + 2);
    }

    #[test]
    fn parsing() {
        let w = parse_word("C3 C3^-1 B4 X2 Xs2 D5 T1", g(3)).unwrap();
        assert_eq!(w.to_string(), "C3 C3^-1 B4 C3 C2 C3^-1 C3^-1 C2 C3 C5 C5 C1 C3 B4");
        assert_eq!(parse_word("T D5^-1", g(2)).unwrap().to_string(), "C1 C3 C5 C5^-1 C5^-1");
        assert_eq!(parse_word("1", g(2)).unwrap(), GenWord::identity());
        assert_eq!(parse_word("", g(2)).unwrap(), GenWord::identity());
        assert_eq!(parse_word("C2^2", g(2)).unwrap(), GenWord::from_c(&[2, 2]));
        for bad in ["Q1", "C0", "C2^x", "C2^0", "C6", "B4"] {
            let err = parse_word(bad, g(2)).unwrap_err();
            assert!(matches!(err, Error::Parse { .. } | Error::InvalidLetter(_)), "{bad}: {err}");
        }
        let msg = parse_word("C1 Z7", g(2)).unwrap_err().to_string();
        assert!(msg.contains("Z7"));
    }

    #[test]
    fn inverse_and_reduction() {
        let w = parse_word("C1 C2^-1 C3", g(2)).unwrap();
        assert_eq!(w.inverse().to_string(), "C3^-1 C2 C1^-1");
        assert!(w.concat(&w.inverse()).free_reduce().is_empty());
        assert_eq!(GenWord::from_c(&[1, 2]).pow(-1).to_string(), "C2^-1 C1^-1");
    }

    #[test]
    fn letter_validation() {
        assert!(Letter::b(4).validate(g(3)).is_ok());
        assert!(Letter::b(4).validate(g(2)).is_err());
        assert!(Letter::b(5).validate(g(4)).is_err());
        assert!(Letter::b(6).validate(g(3)).is_err());
        assert!(Letter::c(7).validate(g(3)).is_ok());
        assert!(Letter::c(8).validate(g(3)).is_err());
    }
}
