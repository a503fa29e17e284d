//! Breadth-first search for elements of `Φ_2(G_g)` that move a mod-2 class to
//! one of three reference classes.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::curves::CurveClassTable;
use crate::error::{Error, Result};
use crate::symplectic::{Genus, Z2Matrix, Z2Vec};
use crate::words::{GenWord, NamedElement};

/// The reference classes `y_1`, `x_1 + y_1` and `x_2 + y_2`.
pub fn witness_targets(genus: Genus) -> [Z2Vec; 3] {
    [Z2Vec::y(genus, 1), Z2Vec::x(genus, 1).xor(&Z2Vec::y(genus, 1)), Z2Vec::x(genus, 2).xor(&Z2Vec::y(genus, 2))]
}

/// `Φ_2(word)` sends `input` to `target`; `word` is written so that its
/// rightmost element acts first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitWitness {
    pub input: Z2Vec,
    pub word: Vec<NamedElement>,
    pub target: Z2Vec,
}

impl OrbitWitness {
    pub fn element(&self) -> Result<GenWord> {
        let genus = self.input.genus();
        self.word.iter().try_fold(GenWord::identity(), |acc, n| Ok(acc.concat(&n.expand(genus)?)))
    }

    /// Evaluates the expanded word under `Φ_2` and checks it lands on a
    /// reference class equal to `target`.
    pub fn verify(&self, table: &CurveClassTable) -> Result<bool> {
        let genus = self.input.genus();
        genus.ensure_same(table.genus())?;
        let m = table.eval_mod2(&self.element()?)?;
        Ok(m.apply(&self.input)? == self.target && witness_targets(genus).contains(&self.target))
    }
}

/// Finds a shortest word in the named generators of `G_g` (`g >= 3`) whose
/// mod-2 image moves `v` to a reference class. Generators are tried in their
/// listed order, so the result is deterministic.
pub fn orbit_witness(table: &CurveClassTable, v: &Z2Vec) -> Result<OrbitWitness> {
    let genus = table.genus();
    genus.ensure_same(v.genus())?;
    if genus.get() < 3 {
        return Err(Error::Unsupported("orbit witnesses need genus at least 3".into()));
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut gens: Vec<(NamedElement, Z2Matrix)> = Vec::new();
    for n in NamedElement::generators(genus) {
        let m = table.eval_mod2(&n.expand(genus)?)?;
        if !m.is_identity() && !gens.iter().any(|(_, other)| *other == m) {
            gens.push((n, m));
        }
    }
    let targets = witness_targets(genus);
    let mut parent: HashMap<Z2Vec, Option<(Z2Vec, usize)>> = HashMap::from([(*v, None)]);
    let mut queue = VecDeque::from([*v]);
    while let Some(cur) = queue.pop_front() {
        if targets.contains(&cur) {
            let mut word = Vec::new();
            let mut at = cur;
            while let Some(Some((prev, k))) = parent.get(&at) {
                word.push(gens[*k].0);
                at = *prev;
            }
            // collected from the last step back to the first, i.e. already
            // leftmost-acts-last
            return Ok(OrbitWitness { input: *v, word, target: cur });
        }
        for (k, (_, m)) in gens.iter().enumerate() {
            let next = m.apply(&cur)?;
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(next) {
                slot.insert(Some((cur, k)));
                queue.push_back(next);
            }
        }
    }
    Err(Error::NoWitness(v.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize) -> CurveClassTable {
        CurveClassTable::canonical(Genus::new(n).unwrap())
    }

    #[test]
    fn targets_need_no_word() {
        let t = table(3);
        for target in witness_targets(t.genus()) {
            let w = orbit_witness(&t, &target).unwrap();
            assert!(w.word.is_empty());
            assert!(w.verify(&t).unwrap());
        }
    }

    #[test]
    fn two_vertical_blocks() {
        let t = table(3);
        let v = Z2Vec::from_blocks(t.genus(), &[(0, 1), (0, 1), (0, 0)]).unwrap();
        let w = orbit_witness(&t, &v).unwrap();
        assert!(!w.word.is_empty());
        assert!(w.verify(&t).unwrap());
    }

    #[test]
    fn every_class_in_genus_three() {
        let t = table(3);
        for v in Z2Vec::all(t.genus()).skip(1) {
            let w = orbit_witness(&t, &v).unwrap();
            assert!(w.verify(&t).unwrap(), "{v}");
        }
    }

    #[test]
    fn tampered_witness_fails() {
        let t = table(3);
        let v = Z2Vec::from_blocks(t.genus(), &[(1, 0), (1, 0), (1, 1)]).unwrap();
        let mut w = orbit_witness(&t, &v).unwrap();
        assert!(w.verify(&t).unwrap());
        w.target = witness_targets(t.genus()).into_iter().find(|x| *x != w.target).unwrap();
        assert!(!w.verify(&t).unwrap());
    }

    #[test]
    fn small_genus_rejected() {
        let t = table(2);
        assert!(orbit_witness(&t, &Z2Vec::x(t.genus(), 1)).is_err());
    }
}
