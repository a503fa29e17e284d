//! The symplectic representations `Φ` (integral) and `Φ_2` (mod 2) of twist words.

use serde::Serialize;

use crate::curves::CurveClassTable;
use crate::error::Result;
use crate::scalar::IntScalar;
use crate::symplectic::{preserves_form, Genus, Matrix, QuadForm, Z2Matrix, Z2Vec};
use crate::words::{GenWord, NamedElement};

impl CurveClassTable {
    /// `Φ(w)`: the product of the letters' transvection matrices, so the
    /// rightmost letter acts first.
    pub fn eval_int<T: IntScalar>(&self, w: &GenWord) -> Result<Matrix<T>> {
        let mut acc = Matrix::<T>::identity(self.genus());
        let one = T::one();
        let minus_one = -T::one();
        for letter in w.letters() {
            let class = self.int_class(letter)?.cast::<T>()?;
            let k = if letter.inverse { &minus_one } else { &one };
            acc.right_mul_transvection_power(&class, k)?;
        }
        Ok(acc)
    }

    /// `Φ_2(w)`; every letter has a mod-2 class, including `B`-letters.
    pub fn eval_mod2(&self, w: &GenWord) -> Result<Z2Matrix> {
        let mut acc = Z2Matrix::identity(self.genus());
        for letter in w.letters() {
            let class = self.mod2_class(letter)?;
            acc = acc.mul(&Z2Matrix::transvection_unchecked(&class))?;
        }
        Ok(acc)
    }

    /// Whether `Φ_2(w)` preserves `q_0`, i.e. `w` lies in the spin subgroup.
    pub fn spin_check(&self, w: &GenWord) -> Result<bool> {
        preserves_form(&self.eval_mod2(w)?, &QuadForm::zero(self.genus()))
    }
}

/// `Φ(w)` for the canonical curve classes.
pub fn eval_int<T: IntScalar>(w: &GenWord, genus: Genus) -> Result<Matrix<T>> {
    w.validate(genus)?;
    CurveClassTable::canonical(genus).eval_int(w)
}

/// `Φ_2(w)` for the canonical curve classes.
pub fn eval_mod2(w: &GenWord, genus: Genus) -> Result<Z2Matrix> {
    w.validate(genus)?;
    CurveClassTable::canonical(genus).eval_mod2(w)
}

pub fn spin_check(w: &GenWord, genus: Genus) -> Result<bool> {
    w.validate(genus)?;
    CurveClassTable::canonical(genus).spin_check(w)
}

/// One mod-2 image identity `Φ_2(named) = 𝕋_z`.
#[derive(Debug, Clone, Serialize)]
pub struct ImageIdentity {
    pub element: String,
    pub transvection_about: Z2Vec,
    pub holds: bool,
}

/// The identities `Φ_2(X_1) = 𝕋_{x_1+y_1}`, `Φ_2(X_{2i}) = 𝕋_{x_i+y_i+x_{i+1}}`,
/// `Φ_2(X_{2i+1}) = 𝕋_{x_i+x_{i+1}+y_{i+1}}`, `Φ_2(Y_{2j}) = 𝕋_{x_j+y_j}` and
/// `Φ_2(X_{2g}) = 𝕋_{x_g+y_g}`, checked as matrix equalities.
pub fn image_identities(table: &CurveClassTable) -> Result<Vec<ImageIdentity>> {
    let genus = table.genus();
    let g = genus.get();
    let x = |i| Z2Vec::x(genus, i);
    let y = |i| Z2Vec::y(genus, i);
    let mut cases: Vec<(NamedElement, Z2Vec)> = vec![(NamedElement::X(1), x(1).xor(&y(1)))];
    for i in 1..g {
        cases.push((NamedElement::X(2 * i), x(i).xor(&y(i)).xor(&x(i + 1))));
        cases.push((NamedElement::X(2 * i + 1), x(i).xor(&x(i + 1)).xor(&y(i + 1))));
    }
    if g >= 3 {
        for j in 2..g {
            cases.push((NamedElement::Y(2 * j), x(j).xor(&y(j))));
        }
    }
    cases.push((NamedElement::X(2 * g), x(g).xor(&y(g))));
    cases
        .into_iter()
        .map(|(named, z)| {
            let lhs = table.eval_mod2(&named.expand(genus)?)?;
            Ok(ImageIdentity {
                element: named.to_string(),
                transvection_about: z,
                holds: lhs == Z2Matrix::transvection_unchecked(&z),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{square_transvection, transvection_mod2, Vector};
    use crate::words::{parse_word, Letter};

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn identity_and_squares() {
        let g2 = g(2);
        assert!(eval_int::<i64>(&GenWord::identity(), g2).unwrap().is_identity());
        let c1 = CurveClassTable::canonical(g2).int_class(&Letter::c(1)).unwrap().clone();
        assert_eq!(eval_int::<i64>(&GenWord::from_c(&[1, 1]), g2).unwrap(), square_transvection(&c1).unwrap());
        for i in 1..=5 {
            assert!(eval_mod2(&GenWord::from_c(&[i, i]), g2).unwrap().is_identity());
        }
    }

    #[test]
    fn rightmost_letter_acts_first() {
        let g1 = g(1);
        let w = GenWord::from_c(&[2, 1]);
        let m = eval_int::<i64>(&w, g1).unwrap();
        let t = CurveClassTable::canonical(g1);
        let v = Vector::<i64>::y(g1, 1);
        let c1 = t.int_class(&Letter::c(1)).unwrap();
        let c2 = t.int_class(&Letter::c(2)).unwrap();
        let after_c1 = crate::symplectic::transvection_power(c1, 1).unwrap().apply(&v).unwrap();
        let expected = crate::symplectic::transvection_power(c2, 1).unwrap().apply(&after_c1).unwrap();
        assert_eq!(m.apply(&v).unwrap(), expected);
    }

    #[test]
    fn phi2_examples() {
        let g3 = g(3);
        let x1y1 = Z2Vec::x(g3, 1).xor(&Z2Vec::y(g3, 1));
        assert_eq!(eval_mod2(&parse_word("X1", g3).unwrap(), g3).unwrap(), transvection_mod2(&x1y1).unwrap());
        let x2y2 = Z2Vec::x(g3, 2).xor(&Z2Vec::y(g3, 2));
        assert_eq!(eval_mod2(&parse_word("Y4", g3).unwrap(), g3).unwrap(), transvection_mod2(&x2y2).unwrap());
    }

    #[test]
    fn spin_examples() {
        for n in 2..=4 {
            let genus = g(n);
            for named in NamedElement::all(genus) {
                assert!(spin_check(&named.expand(genus).unwrap(), genus).unwrap(), "{named} in genus {n}");
            }
        }
        assert!(!spin_check(&GenWord::from_c(&[1]), g(2)).unwrap());
        assert!(spin_check(&GenWord::from_c(&[1, 3, 5]), g(2)).unwrap());
    }

    #[test]
    fn image_identities_hold() {
        for n in 2..=5 {
            let ids = image_identities(&CurveClassTable::canonical(g(n))).unwrap();
            assert!(ids.iter().all(|i| i.holds), "genus {n}: {ids:?}");
        }
    }

    #[test]
    fn b_letters_without_lift_fail_integrally() {
        let g3 = g(3);
        let w = parse_word("Y4", g3).unwrap();
        assert!(eval_int::<i64>(&w, g3).is_err());
        assert!(eval_mod2(&w, g3).is_ok());
    }

    #[test]
    fn mod2_matches_integral_reduction() {
        let g2 = g(2);
        let w = parse_word("C1 C2^-1 C4 C3 C5^-1 C2", g2).unwrap();
        assert_eq!(eval_int::<i64>(&w, g2).unwrap().reduce_mod2(), eval_mod2(&w, g2).unwrap());
    }
}
