//! Rewriting `W C_i^2 W^{-1}` for a word `W` in the chain twists
//! `C_1, ..., C_{2g+1}` as a product of the generators `X_j`, `X*_j`, `D_j`.
//!
//! The recursion works on words and follows the classical induction:
//! strip rightmost letters that commute with `C_i`, peel squares, and then
//! distinguish words without jumps or turns, words whose rightmost special
//! position is a jump, and words whose rightmost special position is a turn.
//! Letters of a word `x_l ⋯ x_1` are numbered from the right.
//!
//! The recursion measure is the lexicographic triple (normalized length,
//! number of jumps, position of the rightmost turn). Every recursive call is
//! made on a word whose measure is strictly below that of the current word,
//! where "current" means after the in-place commutation and braid moves.
//! Debug builds assert this.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::curves::CurveClassTable;
use crate::error::{Error, Result};
use crate::symplectic::{Genus, Matrix};
use crate::words::{GenWord, Letter, LetterKind, NamedElement};

const MAX_DEPTH: usize = 10_000;
const MAX_TOKENS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GTokenKind {
    X,
    XStar,
    D,
}

/// `X_j^{±1}`, `X*_j^{±1}` or `D_j^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GToken {
    pub kind: GTokenKind,
    pub index: usize,
    pub inverse: bool,
}

impl GToken {
    pub fn new(kind: GTokenKind, index: usize, inverse: bool) -> Self {
        GToken { kind, index, inverse }
    }

    pub fn inv(self) -> Self {
        GToken { inverse: !self.inverse, ..self }
    }

    pub fn named(&self) -> NamedElement {
        match self.kind {
            GTokenKind::X => NamedElement::X(self.index),
            GTokenKind::XStar => NamedElement::XStar(self.index),
            GTokenKind::D => NamedElement::D(self.index),
        }
    }

    pub fn expand(&self, genus: Genus) -> Result<GenWord> {
        let w = self.named().expand(genus)?;
        Ok(if self.inverse { w.inverse() } else { w })
    }
}

impl fmt::Display for GToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.named())?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl FromStr for GToken {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, inverse) = match s.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let (kind, index) = match body.parse::<NamedElement>()? {
            NamedElement::X(j) => (GTokenKind::X, j),
            NamedElement::XStar(j) => (GTokenKind::XStar, j),
            NamedElement::D(j) => (GTokenKind::D, j),
            _ => return Err(Error::Parse { token: s.into(), reason: "not an X, Xs or D token".into() }),
        };
        Ok(GToken { kind, index, inverse })
    }
}

impl Serialize for GToken {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GToken {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Expands a token list into letters.
pub fn expand_tokens(tokens: &[GToken], genus: Genus) -> Result<GenWord> {
    let mut letters = Vec::new();
    for t in tokens {
        letters.extend_from_slice(t.expand(genus)?.letters());
    }
    Ok(GenWord::new(letters))
}

/// Formats a token list in the usual notation, `1` when empty.
pub fn tokens_to_string(tokens: &[GToken]) -> String {
    if tokens.is_empty() {
        return "1".into();
    }
    tokens.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewriteCert {
    pub input_word: GenWord,
    pub index: usize,
    pub tokens: Vec<GToken>,
}

impl RewriteCert {
    /// `W C_i C_i W^{-1}` as a word.
    pub fn target_word(&self) -> GenWord {
        let mut w = self.input_word.clone();
        w.push(Letter::c(self.index));
        w.push(Letter::c(self.index));
        w.concat(&self.input_word.inverse())
    }

    pub fn token_string(&self) -> String {
        tokens_to_string(&self.tokens)
    }
}

/// One item of a word after replacing inverse letters by marked
/// inverse squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormItem {
    Pos(usize),
    /// `C_j^{-1} C_j^{-1}`
    InvSquare(usize),
}

impl fmt::Display for NormItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormItem::Pos(j) => write!(f, "C{j}"),
            NormItem::InvSquare(j) => write!(f, "(C{j}^-1 C{j}^-1)"),
        }
    }
}

/// Replaces each `C_j^{-1}` by `(C_j^{-1} C_j^{-1}) C_j`; an existing pair
/// `C_j^{-1} C_j^{-1}` becomes a single marker.
pub fn normalize_negatives(w: &GenWord) -> Result<Vec<NormItem>> {
    Ok(normalize(&signed(w)?))
}

fn normalize(w: &[i64]) -> Vec<NormItem> {
    let mut out = Vec::with_capacity(w.len() * 2);
    let mut k = 0;
    while k < w.len() {
        let a = w[k];
        if a > 0 {
            out.push(NormItem::Pos(a as usize));
            k += 1;
        } else if k + 1 < w.len() && w[k + 1] == a {
            out.push(NormItem::InvSquare((-a) as usize));
            k += 2;
        } else {
            out.push(NormItem::InvSquare((-a) as usize));
            out.push(NormItem::Pos((-a) as usize));
            k += 1;
        }
    }
    out
}

fn norm_len(items: &[NormItem]) -> usize {
    items
        .iter()
        .map(|it| match it {
            NormItem::Pos(_) => 1,
            NormItem::InvSquare(_) => 2,
        })
        .sum()
}

fn denormalize(items: &[NormItem]) -> Vec<i64> {
    let mut out = Vec::with_capacity(items.len() * 2);
    for it in items {
        match *it {
            NormItem::Pos(j) => out.push(j as i64),
            NormItem::InvSquare(j) => {
                out.push(-(j as i64));
                out.push(-(j as i64));
            }
        }
    }
    out
}

fn signed(w: &GenWord) -> Result<Vec<i64>> {
    w.letters()
        .iter()
        .map(|l| {
            if l.kind != LetterKind::C {
                return Err(Error::InvalidLetter(format!("{l} (only chain twists C_i are allowed)")));
            }
            let j = l.index as i64;
            Ok(if l.inverse { -j } else { j })
        })
        .collect()
}

fn adjacent(a: usize, b: usize) -> bool {
    a.abs_diff(b) == 1
}

/// Positions `k` (numbered from the right, `k >= 2`) with `x_k`, `x_{k-1}`
/// not adjacent.
pub fn detect_jump(w: &GenWord) -> Result<Vec<usize>> {
    Ok(jumps(&positive(w)?))
}

/// Positions `k >= 3` where neither `x_k` nor `x_{k-1}` is a jump and
/// `x_k = x_{k-2}`.
pub fn detect_turn(w: &GenWord) -> Result<Vec<usize>> {
    Ok(turns(&positive(w)?))
}

fn positive(w: &GenWord) -> Result<Vec<usize>> {
    let s = signed(w)?;
    if s.iter().any(|&a| a < 0) {
        return Err(Error::Rewrite("jumps and turns are defined for positive words".into()));
    }
    Ok(s.into_iter().map(|a| a as usize).collect())
}

// x_k for a word stored left to right.
fn x(w: &[usize], k: usize) -> usize {
    w[w.len() - k]
}

fn is_jump(w: &[usize], k: usize) -> bool {
    k >= 2 && k <= w.len() && !adjacent(x(w, k), x(w, k - 1))
}

fn jumps(w: &[usize]) -> Vec<usize> {
    (2..=w.len()).filter(|&k| is_jump(w, k)).collect()
}

fn turns(w: &[usize]) -> Vec<usize> {
    (3..=w.len()).filter(|&k| !is_jump(w, k) && !is_jump(w, k - 1) && x(w, k) == x(w, k - 2)).collect()
}

type Measure = (usize, usize, usize);

fn measure(w: &[i64]) -> Measure {
    let items = normalize(w);
    let len = norm_len(&items);
    if w.iter().any(|&a| a < 0) {
        return (len, 0, 0);
    }
    let pos: Vec<usize> = w.iter().map(|&a| a as usize).collect();
    let turn = turns(&pos).first().copied().unwrap_or(0);
    (len, jumps(&pos).len(), turn)
}

fn free_reduce(w: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(w.len());
    for &a in w {
        if out.last() == Some(&-a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

fn conj_token(a: usize, b: usize) -> GToken {
    // a b a^{-1} for adjacent a, b
    debug_assert!(adjacent(a, b));
    if a == b + 1 {
        GToken::new(GTokenKind::X, b, false)
    } else {
        GToken::new(GTokenKind::XStar, a, false)
    }
}

fn inverse_tokens(t: &[GToken]) -> Vec<GToken> {
    t.iter().rev().map(|t| t.inv()).collect()
}

struct Rewriter {
    memo: HashMap<(Vec<i64>, usize), Rc<Vec<GToken>>>,
    depth: usize,
}

impl Rewriter {
    fn new() -> Self {
        Rewriter { memo: HashMap::new(), depth: 0 }
    }

    fn call(&mut self, current: Measure, w: Vec<i64>, i: usize) -> Result<Rc<Vec<GToken>>> {
        debug_assert!(
            measure(&w) < current,
            "recursion measure did not decrease: {:?} -> {:?} on {:?}",
            current,
            measure(&w),
            w
        );
        self.conj(w, i)
    }

    /// Tokens for `W C_i^2 W^{-1}`.
    fn conj(&mut self, w: Vec<i64>, i: usize) -> Result<Rc<Vec<GToken>>> {
        let mut w = free_reduce(&w);
        while let Some(&a) = w.last() {
            if adjacent(a.unsigned_abs() as usize, i) {
                break;
            }
            w.pop();
        }
        if w.is_empty() {
            return Ok(Rc::new(vec![GToken::new(GTokenKind::D, i, false)]));
        }
        let key = (w, i);
        if let Some(t) = self.memo.get(&key) {
            return Ok(t.clone());
        }
        if self.depth >= MAX_DEPTH {
            return Err(Error::Rewrite("recursion depth exceeded".into()));
        }
        self.depth += 1;
        let result = self.conj_stripped(&key.0, i);
        self.depth -= 1;
        let tokens = Rc::new(result?);
        if tokens.len() > MAX_TOKENS {
            return Err(Error::Rewrite("token list too long".into()));
        }
        self.memo.insert(key, tokens.clone());
        Ok(tokens)
    }

    fn conj_stripped(&mut self, w: &[i64], i: usize) -> Result<Vec<GToken>> {
        let items = normalize(w);
        let here = measure(w);
        let square = items.iter().enumerate().find_map(|(k, it)| match *it {
            NormItem::InvSquare(j) => Some((k, j, 1, true)),
            NormItem::Pos(j) if items.get(k + 1) == Some(&NormItem::Pos(j)) => Some((k, j, 2, false)),
            _ => None,
        });
        if let Some((k, j, width, inverse)) = square {
            // W = W1 X X W2 with X = C_j^{±1}
            let w1 = denormalize(&items[..k]);
            let mut w12 = w1.clone();
            w12.extend(denormalize(&items[k + width..]));
            let outer = self.call(here, w1, j)?;
            let middle = self.call(here, w12, i)?;
            let (left, right) = if inverse {
                (inverse_tokens(&outer), outer.to_vec())
            } else {
                (outer.to_vec(), inverse_tokens(&outer))
            };
            let mut out = left;
            out.extend_from_slice(&middle);
            out.extend(right);
            return Ok(out);
        }
        let pos: Vec<usize> = w.iter().map(|&a| a as usize).collect();
        self.positive_case(&pos, i)
    }

    /// `W` positive, square-free, with `x_1` adjacent to `C_i`.
    fn positive_case(&mut self, w: &[usize], i: usize) -> Result<Vec<GToken>> {
        let l = w.len();
        debug_assert!(adjacent(x(w, 1), i));
        let here = measure(&as_signed(w));
        if l == 1 {
            let t = conj_token(w[0], i);
            return Ok(vec![t, t]);
        }
        let jump = jumps(w).first().copied();
        let turn = turns(w).first().copied();
        match (jump, turn) {
            (None, None) => {
                // x_l x_{l-1} x_l^{-1} · x_l x_{l-2} ⋯ x_1 C_i^2 ⋯ · x_l x_{l-1}^{-1} x_l^{-1}
                let t = conj_token(x(w, l), x(w, l - 1));
                let mut shorter = w.to_vec();
                shorter.remove(1);
                let middle = self.call(here, as_signed(&shorter), i)?;
                let mut out = vec![t];
                out.extend_from_slice(&middle);
                out.push(t.inv());
                Ok(out)
            }
            (Some(j), t) if t.is_none_or(|t| j < t) => self.jump_case(w, i, j),
            (_, Some(t)) => self.turn_case(w, i, t),
            (Some(_), None) => unreachable!(),
        }
    }

    fn jump_case(&mut self, w: &[usize], i: usize, j: usize) -> Result<Vec<GToken>> {
        let xj = x(w, j);
        // leftmost x_p among x_{j-1}, ..., x_1 adjacent to x_j
        let p = (1..j).rev().find(|&p| adjacent(x(w, p), xj));
        let mut rest = w.to_vec();
        rest.remove(w.len() - j);
        let moved = match p {
            None => xj,
            Some(1) => {
                // x_1 is adjacent to x_j, x_2 and C_i, so C_i is x_2 or x_j
                // (after x_j commutes down next to x_1). Either way
                // C_i x_1 C_i^2 x_1^{-1} C_i^{-1} = x_1^2.
                let here = measure(&as_signed(w));
                let v = if x(w, 2) == i {
                    as_signed(&w[..w.len() - 2])
                } else if xj == i {
                    as_signed(&rest[..rest.len() - 1])
                } else {
                    return Err(Error::Rewrite(format!("jump at x_{j} of {w:?} next to x_1 away from C{i}")));
                };
                return Ok(self.call(here, v, x(w, 1))?.to_vec());
            }
            Some(p) => {
                if p < 2 || x(w, p - 1) != xj {
                    return Err(Error::Rewrite(format!("jump at x_{j} of {w:?} has no braid partner")));
                }
                let xp = x(w, p);
                // x_p must commute with x_{p-2}, ..., x_1 to reach the right end
                if (1..p - 1).any(|k| adjacent(x(w, k), xp)) {
                    return Err(Error::Rewrite(format!("cannot move x_{p} of {w:?} to the right end")));
                }
                xp
            }
        };
        // The word now reads (W without x_j) · moved.
        if !adjacent(moved, i) {
            let here = measure(&as_signed(w));
            return Ok(self.call(here, as_signed(&rest), i)?.to_vec());
        }
        let mut migrated = rest.clone();
        migrated.push(moved);
        if adjacent(x(&migrated, 2), moved) {
            return Err(Error::Rewrite(format!("migration of {w:?} did not produce a jump")));
        }
        // W' x_2 x_1 with x_1, x_2 on both sides of C_i:
        // (W' x_2 C_i^2 ⋯)^{-1} · W' x_2 C_i x_1^2 C_i^{-1} ⋯ · W' x_2 C_i^2 ⋯
        let here = measure(&as_signed(&migrated));
        let outer = self.call(here, as_signed(&rest), i)?;
        let mut through = rest;
        through.push(i);
        let middle = self.call(here, as_signed(&through), moved)?;
        let mut out = inverse_tokens(&outer);
        out.extend_from_slice(&middle);
        out.extend_from_slice(&outer);
        Ok(out)
    }

    fn turn_case(&mut self, w: &[usize], i: usize, t: usize) -> Result<Vec<GToken>> {
        let here = measure(&as_signed(w));
        let l = w.len();
        if x(w, 2) == i {
            // V C_i x_1 C_i^2 x_1^{-1} C_i^{-1} V^{-1} = V x_1^2 V^{-1}
            let v = as_signed(&w[..l - 2]);
            return Ok(self.call(here, v, x(w, 1))?.to_vec());
        }
        // x_t x_{t-1} x_{t-2} = x_{t-1} x_{t-2} x_{t-1}, then x_{t-1} travels right
        let m = x(w, t - 1);
        if (1..t - 2).any(|k| adjacent(x(w, k), m)) {
            return Err(Error::Rewrite(format!("x_{} of {w:?} does not commute to the right end", t - 1)));
        }
        if adjacent(m, i) {
            return Err(Error::Rewrite(format!("x_{} of {w:?} is adjacent to C{i}", t - 1)));
        }
        let mut rest = w.to_vec();
        rest.remove(l - t);
        Ok(self.call(here, as_signed(&rest), i)?.to_vec())
    }
}

fn as_signed(w: &[usize]) -> Vec<i64> {
    w.iter().map(|&a| a as i64).collect()
}

/// Writes `W C_i^2 W^{-1}` as a product of `X_j`, `X*_j`, `D_j` and their
/// inverses.
pub fn rewrite_square_conjugate(w: &GenWord, i: usize, genus: Genus) -> Result<RewriteCert> {
    let n = 2 * genus.get() + 1;
    if !(1..=n).contains(&i) {
        return Err(Error::InvalidLetter(format!("C{i} in genus {}", genus.get())));
    }
    w.validate(genus)?;
    let s = signed(w)?;
    let tokens = Rewriter::new().conj(s, i)?.to_vec();
    Ok(RewriteCert { input_word: w.clone(), index: i, tokens })
}

/// True iff every token is an `X_j`, `X*_j` or `D_j` valid in the genus.
pub fn tokens_are_pure(tokens: &[GToken], genus: Genus) -> bool {
    tokens.iter().all(|t| t.named().validate(genus).is_ok())
}

/// Compares `Φ` of the token product with `Φ(W C_i^2 W^{-1})`.
pub fn check_rewrite(cert: &RewriteCert, genus: Genus) -> bool {
    let n = 2 * genus.get() + 1;
    if !(1..=n).contains(&cert.index) || cert.input_word.validate(genus).is_err() {
        return false;
    }
    if !cert.input_word.only_c_letters() || !tokens_are_pure(&cert.tokens, genus) {
        return false;
    }
    let Ok(rhs) = expand_tokens(&cert.tokens, genus) else {
        return false;
    };
    let lhs = cert.target_word();
    let table = CurveClassTable::canonical(genus);
    match same_image::<i64>(&table, &lhs, &rhs) {
        Ok(b) => b,
        Err(Error::Overflow) => same_image::<BigInt>(&table, &lhs, &rhs).unwrap_or(false),
        Err(_) => false,
    }
}

fn same_image<T: crate::IntScalar>(table: &CurveClassTable, a: &GenWord, b: &GenWord) -> Result<bool> {
    let ma: Matrix<T> = table.eval_int(a)?;
    let mb: Matrix<T> = table.eval_int(b)?;
    Ok(ma == mb)
}
