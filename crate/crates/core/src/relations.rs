//! Checks of the genus-2 presentation relations and the braid relations in `Φ`.

use serde::Serialize;

use crate::curves::CurveClassTable;
use crate::error::Result;
use crate::symplectic::{Genus, Matrix};
use crate::words::GenWord;

/// What a relation is required to satisfy in `Sp(2g, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// The two sides evaluate to the same matrix.
    Equal,
    /// The word `lhs · rhs⁻¹` evaluates to `±I`.
    Central,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub family: u8,
    pub name: String,
    pub lhs: GenWord,
    pub rhs: GenWord,
    pub expectation: Expectation,
    /// Sign `s` with `Φ(lhs · rhs⁻¹) = s·I`, if central.
    pub central_sign: Option<i8>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub genus: Genus,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

fn check(
    table: &CurveClassTable,
    family: u8,
    name: String,
    lhs: GenWord,
    rhs: GenWord,
    expectation: Expectation,
) -> Result<RelationCheck> {
    let l: Matrix<i64> = table.eval_int(&lhs)?;
    let r: Matrix<i64> = table.eval_int(&rhs)?;
    let quotient = l.mul(&table.eval_int::<i64>(&rhs.inverse())?)?;
    let central_sign = quotient.central_sign();
    let holds = match expectation {
        Expectation::Equal => l == r,
        Expectation::Central => central_sign.is_some(),
    };
    Ok(RelationCheck { family, name, lhs, rhs, expectation, central_sign, holds })
}

/// The chain word `C_1 C_2 ⋯ C_n`.
fn chain(n: usize) -> GenWord {
    GenWord::from_c(&(1..=n).collect::<Vec<_>>())
}

/// `C_1 ⋯ C_5 C_5 ⋯ C_1`, the genus-2 hyperelliptic involution word.
pub fn hyperelliptic_word() -> GenWord {
    let forward = chain(5);
    let backward = GenWord::from_c(&[5, 4, 3, 2, 1]);
    forward.concat(&backward)
}

/// Commutation and braid relations among the chain twists for any genus; for
/// genus 2 also the relations `(C_1⋯C_5)^6 = 1`, `H^2 = 1` and `[H, C_i] = 1`,
/// the first two only up to the sign of the centre.
pub fn braid_check(table: &CurveClassTable) -> Result<RelationReport> {
    let genus = table.genus();
    let n = 2 * genus.get() + 1;
    let mut checks = Vec::new();
    for i in 1..=n {
        for j in i + 2..=n {
            checks.push(check(
                table,
                1,
                format!("C{i} C{j} = C{j} C{i}"),
                GenWord::from_c(&[i, j]),
                GenWord::from_c(&[j, i]),
                Expectation::Equal,
            )?);
        }
    }
    for i in 1..n {
        let j = i + 1;
        checks.push(check(
            table,
            2,
            format!("C{i} C{j} C{i} = C{j} C{i} C{j}"),
            GenWord::from_c(&[i, j, i]),
            GenWord::from_c(&[j, i, j]),
            Expectation::Equal,
        )?);
    }
    if genus.get() == 2 {
        checks.push(check(
            table,
            3,
            "(C1 C2 C3 C4 C5)^6 = 1".into(),
            chain(5).pow(6),
            GenWord::identity(),
            Expectation::Central,
        )?);
        let h = hyperelliptic_word();
        checks.push(check(
            table,
            4,
            "(C1 C2 C3 C4 C5 C5 C4 C3 C2 C1)^2 = 1".into(),
            h.pow(2),
            GenWord::identity(),
            Expectation::Central,
        )?);
        for i in 1..=5 {
            let c = GenWord::from_c(&[i]);
            checks.push(check(table, 5, format!("H C{i} = C{i} H"), h.concat(&c), c.concat(&h), Expectation::Equal)?);
        }
    }
    Ok(RelationReport { genus, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_two_relations() {
        let report = braid_check(&CurveClassTable::canonical(Genus::new(2).unwrap())).unwrap();
        assert!(report.all_hold(), "{:?}", report.violations().collect::<Vec<_>>());
        let fam = |f: u8| report.checks.iter().filter(move |c| c.family == f);
        assert_eq!(fam(1).count(), 6);
        assert_eq!(fam(2).count(), 4);
        assert_eq!(fam(5).count(), 5);
        assert_eq!(fam(4).next().unwrap().central_sign, Some(1));
    }

    #[test]
    fn hyperelliptic_is_minus_identity() {
        let t = CurveClassTable::canonical(Genus::new(2).unwrap());
        let m: Matrix<i64> = t.eval_int(&hyperelliptic_word()).unwrap();
        assert_eq!(m.central_sign(), Some(-1));
    }

    #[test]
    fn genus_three_has_no_genus_two_extras() {
        let report = braid_check(&CurveClassTable::canonical(Genus::new(3).unwrap())).unwrap();
        assert!(report.all_hold());
        assert!(report.checks.iter().all(|c| c.family <= 2));
        assert!(report.checks.iter().any(|c| c.name == "C4 C5 C4 = C5 C4 C5"));
    }

    #[test]
    fn perturbed_table_breaks_braids() {
        let g2 = Genus::new(2).unwrap();
        let t = CurveClassTable::canonical(g2);
        let bad = t.with_c_class_unvalidated(3, crate::symplectic::Vector::from_i64s(g2, &[1, 0, 1, 1]).unwrap());
        assert!(!braid_check(&bad).unwrap().all_hold());
    }
}
