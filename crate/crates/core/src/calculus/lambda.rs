//! The set `Λ_g = {z : q_0(z) = 1}`, its `□` operation and the reduction of
//! any element to one of the `3g - 2` standard generators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{quad_eval, Genus, QuadForm, Z2Matrix, Z2Vec};

/// A mod-2 class on which `q_0` takes the value 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LambdaVec(Z2Vec);

impl LambdaVec {
    pub fn new(z: Z2Vec) -> Result<Self> {
        if quad_eval(&QuadForm::zero(z.genus()), &z)? {
            Ok(LambdaVec(z))
        } else {
            Err(Error::NotInLambda(z.to_string()))
        }
    }

    pub fn vector(&self) -> Z2Vec {
        self.0
    }

    pub fn genus(&self) -> Genus {
        self.0.genus()
    }

    /// All of `Λ_g` in increasing bit order.
    pub fn all(genus: Genus) -> impl Iterator<Item = LambdaVec> {
        Z2Vec::all(genus).filter_map(|z| LambdaVec::new(z).ok())
    }
}

impl<'de> Deserialize<'de> for LambdaVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LambdaVec::new(Z2Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for LambdaVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The transvection `x ↦ x + (z, x)_2 z` about `z ∈ Λ_g`; it preserves `q_0`.
pub fn z2_transvection(z: &LambdaVec) -> Z2Matrix {
    Z2Matrix::transvection_unchecked(&z.0)
}

/// `z1 □ z2 = z1 + (z2, z1)_2 z2`, so that `𝕋_{z1 □ z2} = 𝕋_{z2} 𝕋_{z1} 𝕋_{z2}`.
pub fn square_op(z1: &LambdaVec, z2: &LambdaVec) -> Result<LambdaVec> {
    z1.genus().ensure_same(z2.genus())?;
    let v = if z2.0.pair(&z1.0) { z1.0.xor(&z2.0) } else { z1.0 };
    Ok(LambdaVec(v))
}

/// The generators `x_i + y_i`, `x_i + y_i + x_{i+1}` and `x_i + x_{i+1} + y_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LambdaGenerator {
    /// `x_i + y_i`
    Handle(usize),
    /// `x_i + y_i + x_{i+1}`
    Forward(usize),
    /// `x_i + x_{i+1} + y_{i+1}`
    Backward(usize),
}

impl LambdaGenerator {
    /// All `3g - 2` generators: handles first, then the two bridging families.
    pub fn all(genus: Genus) -> Vec<LambdaGenerator> {
        let g = genus.get();
        let mut out: Vec<_> = (1..=g).map(LambdaGenerator::Handle).collect();
        out.extend((1..g).map(LambdaGenerator::Forward));
        out.extend((1..g).map(LambdaGenerator::Backward));
        out
    }

    pub fn validate(&self, genus: Genus) -> Result<()> {
        let g = genus.get();
        let ok = match *self {
            LambdaGenerator::Handle(i) => (1..=g).contains(&i),
            LambdaGenerator::Forward(i) | LambdaGenerator::Backward(i) => (1..g).contains(&i),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NamedGenus { name: self.to_string(), genus: g })
        }
    }

    pub fn vector(&self, genus: Genus) -> Result<LambdaVec> {
        self.validate(genus)?;
        let x = |i| Z2Vec::x(genus, i);
        let y = |i| Z2Vec::y(genus, i);
        let v = match *self {
            LambdaGenerator::Handle(i) => x(i).xor(&y(i)),
            LambdaGenerator::Forward(i) => x(i).xor(&y(i)).xor(&x(i + 1)),
            LambdaGenerator::Backward(i) => x(i).xor(&x(i + 1)).xor(&y(i + 1)),
        };
        Ok(LambdaVec(v))
    }

    /// The generator whose vector is `z`, if any.
    pub fn recognize(z: &Z2Vec) -> Option<LambdaGenerator> {
        LambdaGenerator::all(z.genus())
            .into_iter()
            .find(|gen| gen.vector(z.genus()).map(|v| v.0 == *z).unwrap_or(false))
    }
}

impl fmt::Display for LambdaGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LambdaGenerator::Handle(i) => write!(f, "x{i}+y{i}"),
            LambdaGenerator::Forward(i) => write!(f, "x{i}+y{i}+x{}", i + 1),
            LambdaGenerator::Backward(i) => write!(f, "x{i}+x{}+y{}", i + 1, i + 1),
        }
    }
}

impl FromStr for LambdaGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { token: s.to_string(), reason: "expected a generator such as x1+y1+x2".into() };
        let terms: Vec<(char, usize)> = s
            .split('+')
            .map(|t| {
                let t = t.trim();
                let mut chars = t.chars();
                let kind = chars.next().filter(|c| *c == 'x' || *c == 'y').ok_or_else(bad)?;
                let idx: usize = chars.as_str().parse().map_err(|_| bad())?;
                Ok((kind, idx))
            })
            .collect::<Result<_>>()?;
        let parsed = match terms.as_slice() {
            [('x', i), ('y', j)] if i == j => LambdaGenerator::Handle(*i),
            [('x', i), ('y', j), ('x', k)] if i == j && *k == i + 1 => LambdaGenerator::Forward(*i),
            [('x', i), ('x', j), ('y', k)] if *j == i + 1 && j == k => LambdaGenerator::Backward(*i),
            _ => return Err(bad()),
        };
        if parsed.to_string() == s.replace(' ', "") && !matches!(parsed, LambdaGenerator::Handle(0)) {
            Ok(parsed)
        } else {
            Err(bad())
        }
    }
}

impl Serialize for LambdaGenerator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LambdaGenerator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One `□ gen` step; the operand is always one of the standard generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareMove {
    operand: LambdaVec,
    generator: LambdaGenerator,
}

impl SquareMove {
    pub fn new(generator: LambdaGenerator, genus: Genus) -> Result<Self> {
        Ok(SquareMove { operand: generator.vector(genus)?, generator })
    }

    pub fn operand(&self) -> LambdaVec {
        self.operand
    }

    pub fn generator(&self) -> LambdaGenerator {
        self.generator
    }
}

#[derive(Serialize, Deserialize)]
struct RawSquareMove {
    op: String,
    operand: Z2Vec,
}

impl Serialize for SquareMove {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawSquareMove { op: "square".into(), operand: self.operand.0 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareMove {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSquareMove::deserialize(d)?;
        if raw.op != "square" {
            return Err(serde::de::Error::custom(format!("unknown move `{}`", raw.op)));
        }
        let generator = LambdaGenerator::recognize(&raw.operand)
            .ok_or_else(|| serde::de::Error::custom(format!("operand {} is not a generator", raw.operand)))?;
        Ok(SquareMove { operand: LambdaVec(raw.operand), generator })
    }
}

/// A replayable record `input □ m_1 □ m_2 ⋯ = output` with `output` a generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReduction {
    pub input: LambdaVec,
    pub moves: Vec<SquareMove>,
    pub output: LambdaVec,
}

impl LambdaReduction {
    pub fn replay(&self) -> Result<LambdaVec> {
        let mut cur = self.input;
        for mv in &self.moves {
            cur = square_op(&cur, &mv.operand)?;
        }
        Ok(cur)
    }

    /// Replays the moves; the end point must equal `output` and be a generator.
    pub fn verify(&self) -> bool {
        matches!(self.replay(), Ok(v) if v == self.output) && LambdaGenerator::recognize(&self.output.0).is_some()
    }

    /// The generator reached.
    pub fn generator(&self) -> Option<LambdaGenerator> {
        LambdaGenerator::recognize(&self.output.0)
    }
}

struct Walk {
    genus: Genus,
    current: Z2Vec,
    moves: Vec<SquareMove>,
}

impl Walk {
    fn block(&self, i: usize) -> (u8, u8) {
        self.current.block(i)
    }

    fn apply(&mut self, gen: LambdaGenerator) -> Result<()> {
        let mv = SquareMove::new(gen, self.genus)?;
        self.current = square_op(&LambdaVec(self.current), &mv.operand)?.0;
        // □m is an involution, so a repeated move cancels
        if self.moves.last() == Some(&mv) {
            self.moves.pop();
        } else {
            self.moves.push(mv);
        }
        Ok(())
    }

    fn is_generator(&self) -> bool {
        LambdaGenerator::recognize(&self.current).is_some()
    }
}

/// Reduces `z` to a generator by `□`-moves with generator operands, stopping as
/// soon as a generator is reached.
pub fn lambda_reduce(z: &LambdaVec) -> Result<LambdaReduction> {
    reduce(z, true)
}

/// Like [`lambda_reduce`] but always runs until `x_1 + y_1` or
/// `x_1 + y_1 + x_2`: every `(1,1)` block is first moved to the front, then the
/// other blocks are normalized to `(1,0)` and cleared from the right.
pub fn lambda_reduce_to_base(z: &LambdaVec) -> Result<LambdaReduction> {
    reduce(z, false)
}

fn reduce(z: &LambdaVec, stop_early: bool) -> Result<LambdaReduction> {
    use LambdaGenerator::{Backward, Forward, Handle};
    let genus = z.genus();
    let g = genus.get();
    let mut w = Walk { genus, current: z.0, moves: Vec::new() };
    let done = |w: &Walk| stop_early && w.is_generator();

    // Move the rightmost (1,1) block to the left until it sits in block 1.
    while !done(&w) {
        let Some(j) = (2..=g).rev().find(|&j| w.block(j) == (1, 1)) else { break };
        match w.block(j - 1) {
            (1, 1) => w.apply(Backward(j - 1))?,
            (0, 0) => w.apply(Forward(j - 1))?,
            (0, 1) => w.apply(Backward(j - 1))?,
            _ => {
                w.apply(Handle(j - 1))?;
                w.apply(Backward(j - 1))?;
            }
        }
    }
    if done(&w) {
        return finish(z, w);
    }
    debug_assert_eq!(w.block(1), (1, 1));

    // Fill zero blocks among 2..=g next to nonzero ones.
    while !done(&w) {
        let nonzero = |i: usize, w: &Walk| w.block(i) != (0, 0);
        if !(2..=g).any(|i| nonzero(i, &w)) {
            break;
        }
        let Some(i) =
            (2..=g).find(|&i| !nonzero(i, &w) && ((i > 2 && nonzero(i - 1, &w)) || (i < g && nonzero(i + 1, &w))))
        else {
            break;
        };
        if i > 2 && nonzero(i - 1, &w) {
            w.apply(Forward(i - 1))?;
        } else {
            w.apply(Backward(i))?;
        }
    }
    for i in 2..=g {
        if done(&w) {
            break;
        }
        if w.block(i) == (0, 1) {
            w.apply(Handle(i))?;
        }
    }
    // Clear (1,0) blocks from the right down to block 2.
    let mut k = g;
    while k >= 3 && !done(&w) {
        if w.block(k) == (1, 0) {
            debug_assert_eq!(w.block(k - 1), (1, 0));
            w.apply(Forward(k - 1))?;
            w.apply(Handle(k - 1))?;
        }
        k -= 1;
    }
    finish(z, w)
}

fn finish(z: &LambdaVec, w: Walk) -> Result<LambdaReduction> {
    let output = LambdaVec::new(w.current)?;
    let red = LambdaReduction { input: *z, moves: w.moves, output };
    if red.generator().is_none() {
        return Err(Error::FactorizationStalled(format!("{} did not reduce to a generator", z)));
    }
    Ok(red)
}
