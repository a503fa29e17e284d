//! Bit-packed linear algebra over GF(2) on `H_1(Σ_g; Z/2)`.
//!
//! Bit `2(i-1)` holds the `x_i` coordinate and bit `2(i-1)+1` the `y_i`
//! coordinate. Matrices store columns: column `k` is the image of the `k`-th
//! basis vector.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::genus::{x_index, y_index, Genus};
use crate::error::{Error, Result};

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;

fn low_mask(dim: usize) -> u64 {
    if dim == 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

/// Mod-2 intersection pairing of two packed vectors.
#[inline]
pub(crate) fn pair_bits(u: u64, v: u64) -> bool {
    let swapped = ((v & EVEN_BITS) << 1) | ((v >> 1) & EVEN_BITS);
    (u & swapped).count_ones() & 1 == 1
}

/// A class in `H_1(Σ_g; Z/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z2Vec {
    genus: Genus,
    bits: u64,
}

impl Z2Vec {
    pub fn zero(genus: Genus) -> Self {
        Z2Vec { genus, bits: 0 }
    }

    /// Builds a vector from packed bits; bits above `2g` must be clear.
    pub fn from_bits(genus: Genus, bits: u64) -> Result<Self> {
        if bits & !low_mask(genus.dim()) != 0 {
            return Err(Error::WrongLength { expected: genus.dim(), got: 64 - bits.leading_zeros() as usize });
        }
        Ok(Z2Vec { genus, bits })
    }

    pub fn from_coords(genus: Genus, coords: &[u8]) -> Result<Self> {
        if coords.len() != genus.dim() {
            return Err(Error::WrongLength { expected: genus.dim(), got: coords.len() });
        }
        let mut bits = 0u64;
        for (k, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << k,
                other => {
                    return Err(Error::Parse { token: other.to_string(), reason: "expected a bit (0 or 1)".into() })
                }
            }
        }
        Ok(Z2Vec { genus, bits })
    }

    /// Builds a vector from `(ε_i, δ_i)` blocks.
    pub fn from_blocks(genus: Genus, blocks: &[(u8, u8)]) -> Result<Self> {
        let flat: Vec<u8> = blocks.iter().flat_map(|&(e, d)| [e, d]).collect();
        Self::from_coords(genus, &flat)
    }

    pub fn x(genus: Genus, i: usize) -> Self {
        assert!(i >= 1 && i <= genus.get(), "x_{i} out of range for genus {genus}");
        Z2Vec { genus, bits: 1 << x_index(i) }
    }

    pub fn y(genus: Genus, i: usize) -> Self {
        assert!(i >= 1 && i <= genus.get(), "y_{i} out of range for genus {genus}");
        Z2Vec { genus, bits: 1 << y_index(i) }
    }

    /// The `k`-th vector of the interleaved basis (0-based).
    pub fn basis(genus: Genus, k: usize) -> Self {
        assert!(k < genus.dim());
        Z2Vec { genus, bits: 1 << k }
    }

    /// All `2^{2g}` vectors in increasing bit order.
    pub fn all(genus: Genus) -> impl Iterator<Item = Z2Vec> {
        assert!(genus.dim() < 64, "enumeration limited to g < 32");
        (0..(1u64 << genus.dim())).map(move |bits| Z2Vec { genus, bits })
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn get(&self, k: usize) -> bool {
        (self.bits >> k) & 1 == 1
    }

    /// Block `i` (1-based) as `(ε_i, δ_i)`.
    pub fn block(&self, i: usize) -> (u8, u8) {
        (self.get(x_index(i)) as u8, self.get(y_index(i)) as u8)
    }

    pub fn coords(&self) -> Vec<u8> {
        (0..self.genus.dim()).map(|k| self.get(k) as u8).collect()
    }

    pub fn add(&self, other: &Z2Vec) -> Result<Z2Vec> {
        self.genus.ensure_same(other.genus)?;
        Ok(Z2Vec { genus: self.genus, bits: self.bits ^ other.bits })
    }

    pub(crate) fn xor(&self, other: &Z2Vec) -> Z2Vec {
        debug_assert_eq!(self.genus, other.genus);
        Z2Vec { genus: self.genus, bits: self.bits ^ other.bits }
    }

    pub(crate) fn pair(&self, other: &Z2Vec) -> bool {
        pair_bits(self.bits, other.bits)
    }
}

impl fmt::Display for Z2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for Z2Vec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Z2Vec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords: Vec<u8> = Vec::deserialize(d)?;
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(serde::de::Error::custom("vector must have an even, nonzero length"));
        }
        let genus = Genus::new(coords.len() / 2).map_err(serde::de::Error::custom)?;
        Z2Vec::from_coords(genus, &coords).map_err(serde::de::Error::custom)
    }
}

/// The mod-2 intersection form `(u, v)_2`.
pub fn intersection_mod2(u: &Z2Vec, v: &Z2Vec) -> Result<bool> {
    u.genus.ensure_same(v.genus)?;
    Ok(u.pair(v))
}

/// A `2g x 2g` matrix over GF(2) acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Z2Matrix {
    genus: Genus,
    cols: Vec<u64>,
}

impl Z2Matrix {
    pub fn identity(genus: Genus) -> Self {
        Z2Matrix { genus, cols: (0..genus.dim()).map(|k| 1u64 << k).collect() }
    }

    pub fn from_columns(genus: Genus, cols: Vec<Z2Vec>) -> Result<Self> {
        if cols.len() != genus.dim() {
            return Err(Error::WrongLength { expected: genus.dim(), got: cols.len() });
        }
        for c in &cols {
            genus.ensure_same(c.genus)?;
        }
        Ok(Z2Matrix { genus, cols: cols.iter().map(|c| c.bits).collect() })
    }

    pub(crate) fn from_raw_columns(genus: Genus, cols: Vec<u64>) -> Self {
        debug_assert_eq!(cols.len(), genus.dim());
        Z2Matrix { genus, cols }
    }

    /// Row-major 0/1 entries.
    pub fn from_rows(genus: Genus, rows: &[Vec<u8>]) -> Result<Self> {
        let n = genus.dim();
        if rows.len() != n {
            return Err(Error::WrongLength { expected: n, got: rows.len() });
        }
        let mut cols = vec![0u64; n];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::WrongLength { expected: n, got: row.len() });
            }
            for (c, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => cols[c] |= 1 << r,
                    other => {
                        return Err(Error::Parse {
                            token: other.to_string(),
                            reason: "matrix entries must be 0 or 1".into(),
                        })
                    }
                }
            }
        }
        Ok(Z2Matrix { genus, cols })
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        let n = self.genus.dim();
        (0..n).map(|r| (0..n).map(|c| ((self.cols[c] >> r) & 1) as u8).collect()).collect()
    }

    /// `M v = v + (a, v)_2 a`.
    pub(crate) fn transvection_unchecked(a: &Z2Vec) -> Self {
        let genus = a.genus;
        let cols = (0..genus.dim())
            .map(|k| {
                let e = 1u64 << k;
                if pair_bits(a.bits, e) {
                    e ^ a.bits
                } else {
                    e
                }
            })
            .collect();
        Z2Matrix { genus, cols }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn column(&self, k: usize) -> Z2Vec {
        Z2Vec { genus: self.genus, bits: self.cols[k] }
    }

    pub(crate) fn raw_columns(&self) -> &[u64] {
        &self.cols
    }

    pub fn apply(&self, v: &Z2Vec) -> Result<Z2Vec> {
        self.genus.ensure_same(v.genus)?;
        Ok(Z2Vec { genus: self.genus, bits: self.apply_bits(v.bits) })
    }

    #[inline]
    pub(crate) fn apply_bits(&self, mut v: u64) -> u64 {
        let mut out = 0u64;
        let mut k = 0;
        while v != 0 {
            if v & 1 == 1 {
                out ^= self.cols[k];
            }
            v >>= 1;
            k += 1;
        }
        out
    }

    /// Product `self · other` (apply `other` first).
    pub fn mul(&self, other: &Z2Matrix) -> Result<Z2Matrix> {
        self.genus.ensure_same(other.genus)?;
        Ok(Z2Matrix { genus: self.genus, cols: other.cols.iter().map(|&c| self.apply_bits(c)).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(k, &c)| c == 1u64 << k)
    }

    /// Checks `(M e_i, M e_j)_2 = (e_i, e_j)_2` for all basis pairs.
    pub fn is_symplectic(&self) -> bool {
        let n = self.genus.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                if pair_bits(self.cols[i], self.cols[j]) != pair_bits(1 << i, 1 << j) {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse of a symplectic matrix: `M^{-1} = J^{-1} M^T J`, which mod 2 reads
    /// `M^{-1}[r][c] = (e_c', M e_r')` with `'` the symplectic dual basis.
    pub fn symplectic_inverse(&self) -> Result<Z2Matrix> {
        if !self.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        let n = self.genus.dim();
        // Column c of the inverse has r-th bit (e_r^dual, M^{-1} e_c) = (M e_r^dual, e_c) by invariance.
        let dual = |k: usize| -> u64 { 1u64 << (k ^ 1) };
        let mut cols = vec![0u64; n];
        for (c, col) in cols.iter_mut().enumerate() {
            for r in 0..n {
                if pair_bits(self.apply_bits(dual(r)), 1 << c) {
                    *col |= 1 << r;
                }
            }
        }
        Ok(Z2Matrix { genus: self.genus, cols })
    }
}

impl fmt::Display for Z2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let parts: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", parts.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Z2Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Z2Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<u8>> = Vec::deserialize(d)?;
        if rows.is_empty() || !rows.len().is_multiple_of(2) {
            return Err(serde::de::Error::custom("matrix must have an even, nonzero number of rows"));
        }
        let genus = Genus::new(rows.len() / 2).map_err(serde::de::Error::custom)?;
        Z2Matrix::from_rows(genus, &rows).map_err(serde::de::Error::custom)
    }
}

/// The mod-2 transvection `v ↦ v + (a, v)_2 a` for nonzero `a`.
pub fn transvection_mod2(a: &Z2Vec) -> Result<Z2Matrix> {
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(Z2Matrix::transvection_unchecked(a))
}
