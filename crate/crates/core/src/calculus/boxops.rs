//! Block reduction of primitive integral classes by `⊞` / `⊟` moves and the
//! resulting conjugation certificates for square transvections.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::IntScalar;
use crate::symplectic::{intersection_int, square_transvection, Genus, Matrix, Vector, Z2Vec};

/// `a ⊞ b = a + 2 (a, b) b`.
pub fn box_plus<T: IntScalar>(a: &Vector<T>, b: &Vector<T>) -> Result<Vector<T>> {
    let k = intersection_int(a, b)?.mul_c(&T::from_int(2))?;
    a.add_scaled(&k, b)
}

/// `a ⊟ b = a - 2 (a, b) b`.
pub fn box_minus<T: IntScalar>(a: &Vector<T>, b: &Vector<T>) -> Result<Vector<T>> {
    let k = intersection_int(a, b)?.mul_c(&T::from_int(-2))?;
    a.add_scaled(&k, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoxOp {
    #[serde(rename = "boxplus")]
    Plus,
    #[serde(rename = "boxminus")]
    Minus,
}

impl BoxOp {
    fn symbol(self) -> char {
        match self {
            BoxOp::Plus => '⊞',
            BoxOp::Minus => '⊟',
        }
    }
}

/// One `⊞` or `⊟` step whose operand has all coordinates in `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxMove {
    pub op: BoxOp,
    pub operand: Z2Vec,
}

impl BoxMove {
    pub fn plus(operand: Z2Vec) -> Self {
        BoxMove { op: BoxOp::Plus, operand }
    }

    pub fn minus(operand: Z2Vec) -> Self {
        BoxMove { op: BoxOp::Minus, operand }
    }

    pub fn apply<T: IntScalar>(&self, a: &Vector<T>) -> Result<Vector<T>> {
        let b = Vector::lift(&self.operand);
        match self.op {
            BoxOp::Plus => box_plus(a, &b),
            BoxOp::Minus => box_minus(a, &b),
        }
    }
}

impl fmt::Display for BoxMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.op.symbol(), self.operand)
    }
}

#[derive(Serialize, Deserialize)]
struct RawMove {
    op: BoxOp,
    operand: Vec<u8>,
}

impl Serialize for BoxMove {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawMove { op: self.op, operand: self.operand.coords() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoxMove {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMove::deserialize(d)?;
        if raw.operand.is_empty() || raw.operand.len() % 2 != 0 {
            return Err(serde::de::Error::custom("operand must have an even, nonzero length"));
        }
        let genus = Genus::new(raw.operand.len() / 2).map_err(serde::de::Error::custom)?;
        let operand = Z2Vec::from_coords(genus, &raw.operand).map_err(serde::de::Error::custom)?;
        if operand.is_zero() {
            return Err(serde::de::Error::custom("operand must be nonzero"));
        }
        Ok(BoxMove { op: raw.op, operand })
    }
}

/// A replayable record `input (op_1 b_1) (op_2 b_2) ⋯ = output`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: IntScalar + Serialize", deserialize = "T: IntScalar + Deserialize<'de>"))]
pub struct ReductionCert<T> {
    pub input: Vector<T>,
    pub moves: Vec<BoxMove>,
    pub output: Vector<T>,
}

impl<T: IntScalar> ReductionCert<T> {
    pub fn replay(&self) -> Result<Vector<T>> {
        let mut cur = self.input.clone();
        for mv in &self.moves {
            self.input.genus().ensure_same(mv.operand.genus())?;
            cur = mv.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Replays the moves and compares with the recorded output.
    pub fn verify(&self) -> bool {
        matches!(self.replay(), Ok(v) if v == self.output)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    X,
    Y,
    Diagonal,
}

impl Shape {
    fn unit(self, genus: Genus, i: usize) -> Z2Vec {
        match self {
            Shape::X => Z2Vec::x(genus, i),
            Shape::Y => Z2Vec::y(genus, i),
            Shape::Diagonal => Z2Vec::x(genus, i).xor(&Z2Vec::y(genus, i)),
        }
    }

    // A unit `d` in the same block with `(s, d) = ±1`, and that sign.
    fn dual(self) -> (Shape, i64) {
        match self {
            Shape::X => (Shape::Y, 1),
            Shape::Y => (Shape::X, -1),
            Shape::Diagonal => (Shape::Y, 1),
        }
    }
}

fn classify<T: IntScalar>(m: &T, n: &T) -> Option<(Shape, T)> {
    if m.is_zero() && n.is_zero() {
        None
    } else if n.is_zero() {
        Some((Shape::X, m.clone()))
    } else if m.is_zero() {
        Some((Shape::Y, n.clone()))
    } else if m == n {
        Some((Shape::Diagonal, m.clone()))
    } else {
        None
    }
}

/// Every block is `(0,0)`, `(p,0)`, `(0,p)` or `(p,p)`.
pub fn has_block_shape<T: IntScalar>(a: &Vector<T>) -> bool {
    (1..=a.genus().get()).all(|i| {
        let (m, n) = a.block(i);
        (m.is_zero() && n.is_zero()) || classify(m, n).is_some()
    })
}

/// Every coordinate is 0 or 1.
pub fn is_delta_vector<T: IntScalar>(a: &Vector<T>) -> bool {
    a.coords().iter().all(|c| c.is_zero() || c.is_one())
}

/// Exactly one nonzero block, equal to `(-1, 0)`.
pub fn is_negative_x_unit<T: IntScalar>(a: &Vector<T>) -> bool {
    let g = a.genus().get();
    let nonzero: Vec<usize> = (1..=g).filter(|&i| !a.block(i).0.is_zero() || !a.block(i).1.is_zero()).collect();
    nonzero.len() == 1 && {
        let (m, n) = a.block(nonzero[0]);
        *m == -T::one() && n.is_zero()
    }
}

struct Recorder<T> {
    current: Vector<T>,
    moves: Vec<BoxMove>,
}

impl<T: IntScalar> Recorder<T> {
    fn push(&mut self, mv: BoxMove) -> Result<()> {
        self.current = mv.apply(&self.current)?;
        self.moves.push(mv);
        Ok(())
    }
}

fn require_primitive<T: IntScalar>(a: &Vector<T>) -> Result<()> {
    if a.is_primitive() {
        Ok(())
    } else {
        Err(Error::NotPrimitive(a.to_string()))
    }
}

fn reduce_blocks_into<T: IntScalar>(rec: &mut Recorder<T>) -> Result<()> {
    let genus = rec.current.genus();
    for i in 1..=genus.get() {
        let e = Z2Vec::x(genus, i);
        let f = Z2Vec::y(genus, i);
        loop {
            let (m, n) = rec.current.block(i);
            let (m, n) = (m.clone(), n.clone());
            if m.is_zero() || n.is_zero() || m.abs() == n.abs() {
                if !m.is_zero() && n == -m.clone() {
                    rec.push(BoxMove::plus(f))?;
                }
                break;
            }
            let two_n = n.mul_c(&T::from_int(2))?;
            let two_m = m.mul_c(&T::from_int(2))?;
            if m.abs() > n.abs() {
                // ⊞ e_i: m -> m - 2n, ⊟ e_i: m -> m + 2n
                let down = m.sub_c(&two_n)?;
                let up = m.add_c(&two_n)?;
                rec.push(if down.abs() <= up.abs() { BoxMove::plus(e) } else { BoxMove::minus(e) })?;
            } else {
                // ⊞ f_i: n -> n + 2m, ⊟ f_i: n -> n - 2m
                let up = n.add_c(&two_m)?;
                let down = n.sub_c(&two_m)?;
                rec.push(if up.abs() <= down.abs() { BoxMove::plus(f) } else { BoxMove::minus(f) })?;
            }
        }
    }
    Ok(())
}

/// Euclid-style reduction of each block separately using only `e_i = x_i` and
/// `f_i = y_i` as operands, ending with every block of shape `(0,0)`,
/// `(p,0)`, `(0,p)` or `(p,p)`.
pub fn reduce_blocks<T: IntScalar>(a: &Vector<T>) -> Result<ReductionCert<T>> {
    require_primitive(a)?;
    let mut rec = Recorder { current: a.clone(), moves: Vec::new() };
    reduce_blocks_into(&mut rec)?;
    debug_assert!(has_block_shape(&rec.current));
    Ok(ReductionCert { input: a.clone(), moves: rec.moves, output: rec.current })
}

fn nonzero_blocks<T: IntScalar>(a: &Vector<T>) -> Result<Vec<(usize, Shape, T)>> {
    let mut out = Vec::new();
    for i in 1..=a.genus().get() {
        let (m, n) = a.block(i);
        if m.is_zero() && n.is_zero() {
            continue;
        }
        let (shape, p) = classify(m, n).ok_or_else(|| Error::Rewrite(format!("block {i} of {a} is not reduced")))?;
        out.push((i, shape, p));
    }
    Ok(out)
}

/// Reduces a primitive class to a vector with all coordinates in `{0, 1}`.
///
/// After [`reduce_blocks`], the largest `|p|` is repeatedly reduced against the
/// smallest nonzero one with a two-move macro
/// `⊞ (u_t + d_r) ⊟ d_r` or `⊟ (u_t + d_r) ⊞ d_r`, where `u_t` is the unit of
/// the target block's shape and `d_r` a unit in the pivot block pairing to
/// `±1` with the pivot's shape. Each macro changes only the target's `p` by
/// `±2q`, so `Σ|p|` strictly decreases. Remaining `-1` blocks are then made
/// positive by block-local two-move sequences.
pub fn reduce_to_delta<T: IntScalar>(a: &Vector<T>) -> Result<ReductionCert<T>> {
    require_primitive(a)?;
    let genus = a.genus();
    let mut rec = Recorder { current: a.clone(), moves: Vec::new() };
    reduce_blocks_into(&mut rec)?;
    loop {
        let blocks = nonzero_blocks(&rec.current)?;
        let mut target = 0;
        for (k, b) in blocks.iter().enumerate() {
            if b.2.abs() > blocks[target].2.abs() {
                target = k;
            }
        }
        if blocks[target].2.abs() <= T::one() {
            break;
        }
        let pivot = (0..blocks.len())
            .filter(|&k| k != target)
            .min_by(|&x, &y| blocks[x].2.abs().cmp(&blocks[y].2.abs()).then(x.cmp(&y)))
            .ok_or_else(|| Error::NotPrimitive(a.to_string()))?;
        let (ti, tshape, p) = blocks[target].clone();
        let (ri, rshape, q) = blocks[pivot].clone();
        if q.abs() >= p.abs() {
            return Err(Error::NotPrimitive(a.to_string()));
        }
        let (dshape, c) = rshape.dual();
        let d = dshape.unit(genus, ri);
        let b = tshape.unit(genus, ti).xor(&d);
        // ⊞ b ⊟ d sends p to p + 2qc; ⊟ b ⊞ d sends it to p - 2qc
        let shift = q.mul_c(&T::from_int(2 * c))?;
        let plus = p.add_c(&shift)?;
        let minus = p.sub_c(&shift)?;
        let expected = if plus.abs() < minus.abs() {
            rec.push(BoxMove::plus(b))?;
            rec.push(BoxMove::minus(d))?;
            plus
        } else {
            rec.push(BoxMove::minus(b))?;
            rec.push(BoxMove::plus(d))?;
            minus
        };
        debug_assert!({
            let (m, n) = rec.current.block(ti);
            let (m0, n0) = match tshape {
                Shape::X => (expected.clone(), T::zero()),
                Shape::Y => (T::zero(), expected.clone()),
                Shape::Diagonal => (expected.clone(), expected.clone()),
            };
            *m == m0 && *n == n0
        });
    }
    for (i, shape, p) in nonzero_blocks(&rec.current)? {
        if p.is_positive() {
            continue;
        }
        let e = Z2Vec::x(genus, i);
        let f = Z2Vec::y(genus, i);
        let ef = e.xor(&f);
        // (-1,0) -> (-1,-2) -> (1,0); (0,-1) -> (-2,-1) -> (0,1); (-1,-1) -> (1,-1) -> (1,1)
        match shape {
            Shape::X => {
                rec.push(BoxMove::plus(f))?;
                rec.push(BoxMove::plus(ef))?;
            }
            Shape::Y => {
                rec.push(BoxMove::minus(e))?;
                rec.push(BoxMove::minus(ef))?;
            }
            Shape::Diagonal => {
                rec.push(BoxMove::plus(e))?;
                rec.push(BoxMove::plus(f))?;
            }
        }
    }
    debug_assert!(is_delta_vector(&rec.current));
    Ok(ReductionCert { input: a.clone(), moves: rec.moves, output: rec.current })
}

/// One factor `T_b^exponent` of a conjugating matrix, with `exponent = ±2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugatorFactor {
    pub operand: Z2Vec,
    pub exponent: i8,
}

/// `T_a^2 = U^{-1} T_core^2 U` with `U` the ordered product of the conjugator
/// factors and `core` a vector with coordinates in `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: IntScalar + Serialize", deserialize = "T: IntScalar + Deserialize<'de>"))]
pub struct SquareTransvectionFactor<T> {
    pub input: Vector<T>,
    pub conjugator: Vec<ConjugatorFactor>,
    pub core: Vector<T>,
    /// The reduction ended at `-core` rather than `core`.
    pub negated: bool,
    pub certificate: ReductionCert<T>,
}

impl<T: IntScalar> SquareTransvectionFactor<T> {
    /// `U` as an exact matrix.
    pub fn conjugator_matrix<S: IntScalar>(&self) -> Result<Matrix<S>> {
        let mut u = Matrix::<S>::identity(self.input.genus());
        for f in &self.conjugator {
            u.right_mul_transvection_power(&Vector::lift(&f.operand), &S::from_int(f.exponent as i64))?;
        }
        Ok(u)
    }

    /// Checks `T_a^2 = U^{-1} T_core^2 U` with arbitrary-precision entries.
    pub fn verify(&self) -> Result<bool> {
        let genus = self.input.genus();
        let u: Matrix<BigInt> = self.conjugator_matrix()?;
        let mut u_inv = Matrix::<BigInt>::identity(genus);
        for f in self.conjugator.iter().rev() {
            u_inv.right_mul_transvection_power(&Vector::lift(&f.operand), &BigInt::from(-f.exponent as i64))?;
        }
        let lhs = square_transvection(&self.input.cast::<BigInt>()?)?;
        let rhs = u_inv.mul(&square_transvection(&self.core.cast::<BigInt>()?)?)?.mul(&u)?;
        Ok(lhs == rhs
            && self.certificate.input == self.input
            && self.certificate.verify()
            && is_delta_vector(&self.core))
    }
}

/// Expresses the square transvection about a primitive `a` as a conjugate of
/// the square transvection about a `{0,1}`-vector.
pub fn factor_square_transvection<T: IntScalar>(a: &Vector<T>) -> Result<SquareTransvectionFactor<T>> {
    let cert = reduce_to_delta(a)?;
    // T^2_{a ⊞ b} = T_b^{-2} T_a^2 T_b^2 and T^2_{a ⊟ b} = T_b^2 T_a^2 T_b^{-2}, so
    // T_a^2 = U^{-1} T_out^2 U with U = (U_n ⋯ U_1)^{-1}, U_k the right factor of move k.
    let conjugator = cert
        .moves
        .iter()
        .rev()
        .map(|mv| ConjugatorFactor {
            operand: mv.operand,
            exponent: match mv.op {
                BoxOp::Plus => -2,
                BoxOp::Minus => 2,
            },
        })
        .collect();
    let (core, negated) =
        if is_negative_x_unit(&cert.output) { (cert.output.neg(), true) } else { (cert.output.clone(), false) };
    Ok(SquareTransvectionFactor { input: a.clone(), conjugator, core, negated, certificate: cert })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::transvection_power;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    fn v(coords: &[i64]) -> Vector<i64> {
        Vector::from_i64s(g(coords.len() / 2), coords).unwrap()
    }

    #[test]
    fn box_examples() {
        let e1 = v(&[1, 0]);
        assert_eq!(box_plus(&v(&[5, 2]), &e1).unwrap(), v(&[1, 2]));
        let a = v(&[3, -4, 7, 1]);
        assert_eq!(box_plus(&a, &a).unwrap(), a);
        let b = v(&[0, 1, 1, 0]);
        assert_eq!(box_minus(&box_plus(&a, &b).unwrap(), &b).unwrap(), a);
        assert!(box_plus(&a, &e1).is_err());
    }

    #[test]
    fn euclid_trace_for_five_two() {
        let cert = reduce_blocks(&v(&[5, 2])).unwrap();
        let gen = g(1);
        assert_eq!(cert.moves, vec![BoxMove::plus(Z2Vec::x(gen, 1)), BoxMove::minus(Z2Vec::y(gen, 1))]);
        assert_eq!(cert.output, v(&[1, 0]));
        assert!(cert.verify());
    }

    #[test]
    fn reduce_blocks_small_cases() {
        let cert = reduce_blocks(&v(&[2, 1])).unwrap();
        assert_eq!(cert.output, v(&[0, 1]));
        assert_eq!(cert.moves.len(), 1);
        let cert = reduce_blocks(&v(&[1, 1])).unwrap();
        assert!(cert.moves.is_empty());
        assert_eq!(reduce_blocks(&v(&[3, -3, 1, 0])).unwrap().output, v(&[3, 3, 1, 0]));
        assert!(matches!(reduce_blocks(&v(&[2, 4])), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn reduce_to_delta_examples() {
        assert_eq!(reduce_to_delta(&v(&[1, 0, 2, 0])).unwrap().output, v(&[1, 0, 0, 0]));
        assert_eq!(reduce_to_delta(&v(&[0, 1, 3, 3])).unwrap().output, v(&[0, 1, 1, 1]));
        let already = v(&[1, 1, 0, 1]);
        let cert = reduce_to_delta(&already).unwrap();
        assert!(cert.moves.is_empty());
        assert_eq!(cert.output, already);
    }

    #[test]
    fn negative_units_become_positive() {
        for (input, output) in [([-1, 0], [1, 0]), ([0, -1], [0, 1]), ([-1, -1], [1, 1])] {
            let cert = reduce_to_delta(&v(&input)).unwrap();
            assert_eq!(cert.output, v(&output));
            assert!(cert.verify());
        }
    }

    #[test]
    fn factor_identity_for_five_two() {
        let f = factor_square_transvection(&v(&[5, 2])).unwrap();
        assert_eq!(f.core, v(&[1, 0]));
        assert_eq!(f.conjugator.len(), 2);
        assert!(f.verify().unwrap());
        // independent recomputation: T_a^2 = U^-1 T_core^2 U
        let u = transvection_power(&v(&[0, 1]), 2).unwrap().mul(&transvection_power(&v(&[1, 0]), -2).unwrap()).unwrap();
        let u_inv =
            transvection_power(&v(&[1, 0]), 2).unwrap().mul(&transvection_power(&v(&[0, 1]), -2).unwrap()).unwrap();
        let rhs = u_inv.mul(&square_transvection(&v(&[1, 0])).unwrap()).unwrap().mul(&u).unwrap();
        assert_eq!(square_transvection(&v(&[5, 2])).unwrap(), rhs);
    }

    #[test]
    fn delta_input_has_empty_conjugator() {
        let f = factor_square_transvection(&v(&[0, 1, 1, 1])).unwrap();
        assert!(f.conjugator.is_empty());
        assert_eq!(f.core, v(&[0, 1, 1, 1]));
    }

    #[test]
    fn sign_of_class_is_invisible() {
        let a = v(&[4, -7, 2, 9]);
        assert_eq!(square_transvection(&a).unwrap(), square_transvection(&a.neg()).unwrap());
        assert!(factor_square_transvection(&a.neg()).unwrap().verify().unwrap());
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = reduce_to_delta(&v(&[7, -3, 0, 4])).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"op\":\"boxplus\"") || json.contains("\"op\":\"boxminus\""));
        let back: ReductionCert<i64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        let mut tampered = back;
        tampered.moves.pop();
        assert!(!tampered.verify());
    }
}
