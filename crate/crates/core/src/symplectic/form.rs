//! Quadratic forms over GF(2) refining the mod-2 intersection pairing.

use std::fmt;

use serde::Serialize;

use super::genus::{x_index, y_index, Genus};
use super::z2::{Z2Matrix, Z2Vec};
use crate::error::{Error, Result};

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;

/// A quadratic form `q` with `q(u + v) = q(u) + q(v) + (u, v)_2`, stored by its
/// values on the basis `x_1, y_1, ..., x_g, y_g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    genus: Genus,
    basis_bits: u64,
}

impl QuadForm {
    /// The form vanishing on every basis vector.
    pub fn zero(genus: Genus) -> Self {
        QuadForm { genus, basis_bits: 0 }
    }

    pub fn from_basis_values(genus: Genus, values: &[u8]) -> Result<Self> {
        let v = Z2Vec::from_coords(genus, values)?;
        Ok(QuadForm { genus, basis_bits: v.bits() })
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn basis_values(&self) -> Vec<u8> {
        (0..self.genus.dim()).map(|k| ((self.basis_bits >> k) & 1) as u8).collect()
    }

    pub fn is_zero_form(&self) -> bool {
        self.basis_bits == 0
    }

    #[inline]
    pub(crate) fn eval_bits(&self, v: u64) -> bool {
        let linear = (v & self.basis_bits).count_ones();
        let cross = (v & EVEN_BITS & (v >> 1)).count_ones();
        (linear + cross) & 1 == 1
    }

    /// `q ∘ M`, the right action of a matrix on forms.
    pub fn pull_back(&self, m: &Z2Matrix) -> Result<QuadForm> {
        self.genus.ensure_same(m.genus())?;
        let mut bits = 0u64;
        for (k, &col) in m.raw_columns().iter().enumerate() {
            if self.eval_bits(col) {
                bits |= 1 << k;
            }
        }
        Ok(QuadForm { genus: self.genus, basis_bits: bits })
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis_values().iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for QuadForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis_values().serialize(s)
    }
}

/// Evaluates `q(v)`.
pub fn quad_eval(q: &QuadForm, v: &Z2Vec) -> Result<bool> {
    q.genus.ensure_same(v.genus())?;
    Ok(q.eval_bits(v.bits()))
}

/// Arf invariant `Σ_i q(x_i) q(y_i) mod 2`.
pub fn arf(q: &QuadForm) -> bool {
    let mut acc = false;
    for i in 1..=q.genus.get() {
        let qx = (q.basis_bits >> x_index(i)) & 1 == 1;
        let qy = (q.basis_bits >> y_index(i)) & 1 == 1;
        acc ^= qx && qy;
    }
    acc
}

/// All forms of the given Arf invariant, lexicographic in
/// `(q(x_1), q(y_1), ..., q(x_g), q(y_g))`.
pub fn enumerate_forms(genus: Genus, arf_value: bool) -> Vec<QuadForm> {
    let n = genus.dim();
    assert!(n < 64, "enumeration limited to g < 32");
    (0..(1u64 << n))
        .map(|idx| {
            // first coordinate is the most significant digit
            let mut bits = 0u64;
            for k in 0..n {
                if (idx >> (n - 1 - k)) & 1 == 1 {
                    bits |= 1 << k;
                }
            }
            QuadForm { genus, basis_bits: bits }
        })
        .filter(|q| arf(q) == arf_value)
        .collect()
}

/// Whether a symplectic `M` satisfies `q(M v) = q(v)` for all `v`.
///
/// Only basis vectors are checked: for symplectic `M`, `q ∘ M` is again a
/// quadratic form for the same pairing, and two such forms agreeing on a basis
/// agree everywhere.
pub fn preserves_form(m: &Z2Matrix, q: &QuadForm) -> Result<bool> {
    q.genus.ensure_same(m.genus())?;
    if !m.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    Ok(q.pull_back(m)? == *q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::z2::transvection_mod2;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let g2 = g(2);
        let q0 = QuadForm::zero(g2);
        let x1 = Z2Vec::x(g2, 1);
        let y1 = Z2Vec::y(g2, 1);
        assert!(!quad_eval(&q0, &x1).unwrap());
        assert!(quad_eval(&q0, &x1.xor(&y1)).unwrap());
        assert!(!quad_eval(&q0, &Z2Vec::zero(g2)).unwrap());
    }

    #[test]
    fn polarization_holds_for_every_pair() {
        let g2 = g(2);
        for q in enumerate_forms(g2, false).into_iter().chain(enumerate_forms(g2, true)) {
            for u in Z2Vec::all(g2) {
                for v in Z2Vec::all(g2) {
                    let lhs = quad_eval(&q, &u.xor(&v)).unwrap();
                    let rhs = quad_eval(&q, &u).unwrap() ^ quad_eval(&q, &v).unwrap() ^ u.pair(&v);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn arf_examples() {
        let g2 = g(2);
        assert!(!arf(&QuadForm::zero(g2)));
        let q = QuadForm::from_basis_values(g2, &[1, 1, 0, 0]).unwrap();
        assert!(arf(&q));
        assert_eq!(enumerate_forms(g(1), false).len(), 3);
        let ten = enumerate_forms(g2, false);
        assert_eq!(ten.len(), 10);
        assert_eq!(ten[0], QuadForm::zero(g2));
        assert_eq!(enumerate_forms(g(3), false).len(), 36);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let forms = enumerate_forms(g(2), false);
        let values: Vec<Vec<u8>> = forms.iter().map(|q| q.basis_values()).collect();
        let mut sorted = values.clone();
        sorted.sort();
        assert_eq!(values, sorted);
    }

    #[test]
    fn preserves_form_examples() {
        let g2 = g(2);
        let q0 = QuadForm::zero(g2);
        assert!(preserves_form(&Z2Matrix::identity(g2), &q0).unwrap());
        let xy = Z2Vec::x(g2, 1).xor(&Z2Vec::y(g2, 1));
        assert!(preserves_form(&transvection_mod2(&xy).unwrap(), &q0).unwrap());
        assert!(!preserves_form(&transvection_mod2(&Z2Vec::x(g2, 1)).unwrap(), &q0).unwrap());
        // y1 -> y1 + x2 breaks (y1, y2)_2 = 0
        let rows = [vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 0, 1]];
        let not_symp = Z2Matrix::from_rows(g2, &rows).unwrap();
        assert!(!not_symp.is_symplectic());
        assert_eq!(preserves_form(&not_symp, &q0), Err(Error::NotSymplectic));
    }
}
