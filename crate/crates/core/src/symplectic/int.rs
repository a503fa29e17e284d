//! Exact integral linear algebra on `H_1(Σ_g; Z)`, generic over the scalar.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::genus::{x_index, y_index, Genus};
use super::z2::{Z2Matrix, Z2Vec};
use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// A class in `H_1(Σ_g; Z)` in the interleaved basis `x_1, y_1, ..., x_g, y_g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector<T> {
    genus: Genus,
    coords: Vec<T>,
}

impl<T: IntScalar> Vector<T> {
    pub fn new(genus: Genus, coords: Vec<T>) -> Result<Self> {
        if coords.len() != genus.dim() {
            return Err(Error::WrongLength { expected: genus.dim(), got: coords.len() });
        }
        Ok(Vector { genus, coords })
    }

    pub fn from_i64s(genus: Genus, coords: &[i64]) -> Result<Self> {
        Self::new(genus, coords.iter().map(|&c| T::from_int(c)).collect())
    }

    /// Builds a vector from `(a_i^1, a_i^2)` blocks.
    pub fn from_blocks(genus: Genus, blocks: &[(i64, i64)]) -> Result<Self> {
        let flat: Vec<i64> = blocks.iter().flat_map(|&(a, b)| [a, b]).collect();
        Self::from_i64s(genus, &flat)
    }

    pub fn zero(genus: Genus) -> Self {
        Vector { genus, coords: vec![T::zero(); genus.dim()] }
    }

    pub fn basis(genus: Genus, k: usize) -> Self {
        let mut v = Self::zero(genus);
        v.coords[k] = T::one();
        v
    }

    /// `e_i`: block `i` is `(1, 0)`.
    pub fn x(genus: Genus, i: usize) -> Self {
        Self::basis(genus, x_index(i))
    }

    /// `f_i`: block `i` is `(0, 1)`.
    pub fn y(genus: Genus, i: usize) -> Self {
        Self::basis(genus, y_index(i))
    }

    /// Lifts a mod-2 class to the vector with entries in `{0, 1}`.
    pub fn lift(v: &Z2Vec) -> Self {
        Vector { genus: v.genus(), coords: v.coords().into_iter().map(|c| T::from_int(c as i64)).collect() }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn block(&self, i: usize) -> (&T, &T) {
        (&self.coords[x_index(i)], &self.coords[y_index(i)])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// gcd of all coordinates equals one.
    pub fn is_primitive(&self) -> bool {
        let mut g = T::zero();
        for c in &self.coords {
            g = g.gcd(c);
        }
        g.is_one()
    }

    pub fn reduce_mod2(&self) -> Z2Vec {
        let mut bits = 0u64;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_odd_c() {
                bits |= 1 << k;
            }
        }
        Z2Vec::from_bits(self.genus, bits).expect("length checked at construction")
    }

    pub fn neg(&self) -> Self {
        Vector { genus: self.genus, coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.genus.ensure_same(other.genus)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.add_c(b)).collect::<Result<_>>()?;
        Ok(Vector { genus: self.genus, coords })
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: &T, other: &Self) -> Result<Self> {
        self.genus.ensure_same(other.genus)?;
        let coords =
            self.coords.iter().zip(&other.coords).map(|(a, b)| a.add_c(&k.mul_c(b)?)).collect::<Result<_>>()?;
        Ok(Vector { genus: self.genus, coords })
    }

    /// Converts to another scalar type.
    pub fn cast<U: IntScalar>(&self) -> Result<Vector<U>> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.to_i128().and_then(U::from_i128).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Vector { genus: self.genus, coords })
    }
}

impl<T: IntScalar> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl<T: IntScalar + Serialize> Serialize for Vector<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de, T: IntScalar + Deserialize<'de>> Deserialize<'de> for Vector<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords: Vec<T> = Vec::deserialize(d)?;
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(serde::de::Error::custom("vector must have an even, nonzero length"));
        }
        let genus = Genus::new(coords.len() / 2).map_err(serde::de::Error::custom)?;
        Vector::new(genus, coords).map_err(serde::de::Error::custom)
    }
}

/// The algebraic intersection number `(u, v)` with `(x_i, y_j) = δ_ij`.
pub fn intersection_int<T: IntScalar>(u: &Vector<T>, v: &Vector<T>) -> Result<T> {
    u.genus.ensure_same(v.genus)?;
    let mut acc = T::zero();
    for i in 1..=u.genus.get() {
        let (ux, uy) = u.block(i);
        let (vx, vy) = v.block(i);
        acc = acc.add_c(&ux.mul_c(vy)?)?.sub_c(&uy.mul_c(vx)?)?;
    }
    Ok(acc)
}

/// A `2g x 2g` integer matrix, row-major, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    genus: Genus,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn identity(genus: Genus) -> Self {
        let n = genus.dim();
        let data = (0..n * n).map(|k| if k / n == k % n { T::one() } else { T::zero() }).collect();
        Matrix { genus, data }
    }

    pub fn from_rows(genus: Genus, rows: Vec<Vec<T>>) -> Result<Self> {
        let n = genus.dim();
        if rows.len() != n {
            return Err(Error::WrongLength { expected: n, got: rows.len() });
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::WrongLength { expected: n, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { genus, data })
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.genus.dim()).map(|r| r.to_vec()).collect()
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn entry(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.genus.dim() + c]
    }

    pub fn column(&self, c: usize) -> Vector<T> {
        let n = self.genus.dim();
        Vector { genus: self.genus, coords: (0..n).map(|r| self.data[r * n + c].clone()).collect() }
    }

    pub fn apply(&self, v: &Vector<T>) -> Result<Vector<T>> {
        self.genus.ensure_same(v.genus)?;
        let n = self.genus.dim();
        let mut out = Vec::with_capacity(n);
        for r in 0..n {
            let mut acc = T::zero();
            for c in 0..n {
                acc = acc.add_c(&self.data[r * n + c].mul_c(&v.coords[c])?)?;
            }
            out.push(acc);
        }
        Ok(Vector { genus: self.genus, coords: out })
    }

    /// Product `self · other` (apply `other` first).
    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        self.genus.ensure_same(other.genus)?;
        let n = self.genus.dim();
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    let a = &self.data[r * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add_c(&a.mul_c(&other.data[k * n + c])?)?;
                }
                data.push(acc);
            }
        }
        Ok(Matrix { genus: self.genus, data })
    }

    /// Left-multiplies in place by the power `T_a^k` of the transvection about `a`,
    /// using `T_a^k v = v + k (a, v) a`.
    pub fn left_mul_transvection_power(&mut self, a: &Vector<T>, k: &T) -> Result<()> {
        self.genus.ensure_same(a.genus)?;
        let n = self.genus.dim();
        for c in 0..n {
            let col = self.column(c);
            let coeff = k.mul_c(&intersection_int(a, &col)?)?;
            if coeff.is_zero() {
                continue;
            }
            for r in 0..n {
                let idx = r * n + c;
                self.data[idx] = self.data[idx].add_c(&coeff.mul_c(&a.coords[r])?)?;
            }
        }
        Ok(())
    }

    /// Right-multiplies in place by `T_a^k`.
    pub fn right_mul_transvection_power(&mut self, a: &Vector<T>, k: &T) -> Result<()> {
        // (M T)[.,c] = M (e_c + k (a, e_c) a) = M e_c + k (a, e_c) M a
        let ma = self.apply(a)?;
        let n = self.genus.dim();
        for c in 0..n {
            let pairing = intersection_int(a, &Vector::basis(self.genus, c))?;
            if pairing.is_zero() {
                continue;
            }
            let coeff = k.mul_c(&pairing)?;
            for r in 0..n {
                let idx = r * n + c;
                self.data[idx] = self.data[idx].add_c(&coeff.mul_c(&ma.coords[r])?)?;
            }
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        Matrix { genus: self.genus, data: self.data.iter().map(|c| -c.clone()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.genus)
    }

    /// `M^T J M = J`, checked on basis pairs.
    pub fn is_symplectic(&self) -> Result<bool> {
        let n = self.genus.dim();
        let cols: Vec<Vector<T>> = (0..n).map(|c| self.column(c)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let want = intersection_int(&Vector::basis(self.genus, i), &Vector::basis(self.genus, j))?;
                if intersection_int(&cols[i], &cols[j])? != want {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Central elements of `Sp(2g, Z)` are `±I`; returns the sign if central.
    pub fn central_sign(&self) -> Option<i8> {
        let id = Self::identity(self.genus);
        if *self == id {
            Some(1)
        } else if *self == id.neg() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn reduce_mod2(&self) -> Z2Matrix {
        let n = self.genus.dim();
        let cols = (0..n)
            .map(|c| {
                let mut bits = 0u64;
                for r in 0..n {
                    if self.data[r * n + c].is_odd_c() {
                        bits |= 1 << r;
                    }
                }
                bits
            })
            .collect();
        Z2Matrix::from_raw_columns(self.genus, cols)
    }

    pub fn cast<U: IntScalar>(&self) -> Result<Matrix<U>> {
        let data = self
            .data
            .iter()
            .map(|c| c.to_i128().and_then(U::from_i128).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Matrix { genus: self.genus, data })
    }
}

impl<T: IntScalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let parts: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", parts.join(" "))?;
        }
        Ok(())
    }
}

impl<T: IntScalar + Serialize> Serialize for Matrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// The Dehn-twist action `v ↦ v + (a, v) a` raised to the `k`-th power.
pub fn transvection_power<T: IntScalar>(a: &Vector<T>, k: i64) -> Result<Matrix<T>> {
    let mut m = Matrix::identity(a.genus);
    m.left_mul_transvection_power(a, &T::from_int(k))?;
    Ok(m)
}

/// The square transvection `T_a^2 : v ↦ v + 2 (a, v) a` about a primitive `a`.
pub fn square_transvection<T: IntScalar>(a: &Vector<T>) -> Result<Matrix<T>> {
    if !a.is_primitive() {
        return Err(Error::NotPrimitive(a.to_string()));
    }
    transvection_power(a, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let g2 = g(2);
        let x1 = Vector::<i64>::x(g2, 1);
        let y1 = Vector::<i64>::y(g2, 1);
        assert_eq!(intersection_int(&x1, &y1).unwrap(), 1);
        assert_eq!(intersection_int(&y1, &x1).unwrap(), -1);
        let v = Vector::<i64>::from_i64s(g2, &[3, -2, 5, 7]).unwrap();
        assert_eq!(intersection_int(&v, &v).unwrap(), 0);
        assert_eq!(intersection_int(&x1, &Vector::x(g2, 2)).unwrap(), 0);
        assert!(intersection_int(&x1, &Vector::x(g(3), 1)).is_err());
    }

    #[test]
    fn square_transvection_examples() {
        let g1 = g(1);
        let x1 = Vector::<i64>::x(g1, 1);
        let m = square_transvection(&x1).unwrap();
        assert_eq!(m.apply(&Vector::y(g1, 1)).unwrap(), Vector::from_i64s(g1, &[2, 1]).unwrap());
        assert!(m.reduce_mod2().is_identity());
        assert!(m.is_symplectic().unwrap());
        let a = Vector::<i64>::from_i64s(g(2), &[5, 2, -3, 1]).unwrap();
        assert_eq!(square_transvection(&a).unwrap(), square_transvection(&a.neg()).unwrap());
        let bad = Vector::<i64>::from_i64s(g1, &[2, 4]).unwrap();
        assert!(matches!(square_transvection(&bad), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn in_place_products_match_matrix_products() {
        let g2 = g(2);
        let a = Vector::<i64>::from_i64s(g2, &[1, 2, 0, -1]).unwrap();
        let b = Vector::<i64>::from_i64s(g2, &[0, 1, 1, 1]).unwrap();
        let ta = transvection_power(&a, 1).unwrap();
        let tb = transvection_power(&b, -1).unwrap();
        let mut left = tb.clone();
        left.left_mul_transvection_power(&a, &1).unwrap();
        assert_eq!(left, ta.mul(&tb).unwrap());
        let mut right = ta.clone();
        right.right_mul_transvection_power(&b, &-1).unwrap();
        assert_eq!(right, ta.mul(&tb).unwrap());
        assert!(ta.mul(&transvection_power(&a, -1).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn bigint_agrees_with_i64() {
        let g2 = g(2);
        let a = Vector::<i64>::from_i64s(g2, &[3, 1, -2, 5]).unwrap();
        let big: Vector<BigInt> = a.cast().unwrap();
        let m = square_transvection(&a).unwrap();
        let mb = square_transvection(&big).unwrap();
        assert_eq!(mb.cast::<i64>().unwrap(), m);
    }

    #[test]
    fn primitivity() {
        let g2 = g(2);
        assert!(Vector::<i64>::from_i64s(g2, &[2, 3, 0, 0]).unwrap().is_primitive());
        assert!(!Vector::<i64>::from_i64s(g2, &[2, 4, 0, -6]).unwrap().is_primitive());
        assert!(!Vector::<i64>::zero(g2).is_primitive());
    }
}
