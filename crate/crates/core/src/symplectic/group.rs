//! Breadth-first closure of finite matrix groups over GF(2).

use std::collections::{HashMap, VecDeque};
use std::hash::{BuildHasherDefault, Hasher};

use super::form::QuadForm;
use super::genus::Genus;
use super::z2::{Z2Matrix, Z2Vec};
use crate::error::{Error, Result};

/// Largest matrix dimension whose entries fit a `u128` key.
const MAX_PACKED_DIM: usize = 11;

#[derive(Default)]
struct MixHasher(u64);

impl Hasher for MixHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }

    fn write_u128(&mut self, v: u128) {
        let folded = (v as u64) ^ ((v >> 64) as u64).rotate_left(29);
        self.0 = (self.0 ^ folded).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        self.0 ^= self.0 >> 31;
    }
}

type FastMap<K, V> = HashMap<K, V, BuildHasherDefault<MixHasher>>;

fn pack(m: &Z2Matrix) -> u128 {
    let n = m.genus().dim();
    m.raw_columns().iter().enumerate().fold(0u128, |acc, (k, &c)| acc | ((c as u128) << (k * n)))
}

fn unpack(genus: Genus, key: u128) -> Z2Matrix {
    let n = genus.dim();
    let mask = (1u128 << n) - 1;
    let cols = (0..n).map(|k| ((key >> (k * n)) & mask) as u64).collect();
    Z2Matrix::from_raw_columns(genus, cols)
}

/// Elements of the group generated by a set of matrices, in BFS order from the
/// identity, with a spanning tree of generator edges.
#[derive(Debug, Clone)]
pub struct Closure {
    genus: Genus,
    elements: Vec<u128>,
    index: FastMap<u128, u32>,
    // (parent element index, generator index); the root points to itself
    parent: Vec<(u32, u32)>,
}

impl Closure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &Z2Matrix) -> bool {
        m.genus() == self.genus && self.index.contains_key(&pack(m))
    }

    pub fn elements(&self) -> impl Iterator<Item = Z2Matrix> + '_ {
        self.elements.iter().map(move |&k| unpack(self.genus, k))
    }

    /// Generator indices `[k_1, ..., k_m]` with `m = g_{k_m} ⋯ g_{k_1}`.
    pub fn word_for(&self, m: &Z2Matrix) -> Option<Vec<usize>> {
        let mut idx = *self.index.get(&pack(m))? as usize;
        let mut word = Vec::new();
        while idx != 0 {
            let (p, gen) = self.parent[idx];
            word.push(gen as usize);
            idx = p as usize;
        }
        word.reverse();
        Some(word)
    }

    /// Same element set as `other`.
    pub fn same_elements(&self, other: &Closure) -> bool {
        self.genus == other.genus
            && self.order() == other.order()
            && self.elements.iter().all(|k| other.index.contains_key(k))
    }
}

/// Closure of `generators` under left multiplication, starting from the identity.
pub fn bfs_closure(genus: Genus, generators: &[Z2Matrix]) -> Result<Closure> {
    let n = genus.dim();
    if n > MAX_PACKED_DIM {
        return Err(Error::Unsupported(format!("group enumeration needs 2g <= {MAX_PACKED_DIM}, got {n}")));
    }
    for gen in generators {
        genus.ensure_same(gen.genus())?;
    }
    let id = pack(&Z2Matrix::identity(genus));
    let mut closure = Closure { genus, elements: vec![id], index: FastMap::default(), parent: vec![(0, 0)] };
    closure.index.insert(id, 0);
    let mut queue = VecDeque::from([0u32]);
    let mask = (1u128 << n) - 1;
    let mut cols = vec![0u64; n];
    while let Some(cur) = queue.pop_front() {
        let key = closure.elements[cur as usize];
        for (k, c) in cols.iter_mut().enumerate() {
            *c = ((key >> (k * n)) & mask) as u64;
        }
        for (gi, gen) in generators.iter().enumerate() {
            let mut next = 0u128;
            for (k, &c) in cols.iter().enumerate() {
                next |= (gen.apply_bits(c) as u128) << (k * n);
            }
            if let std::collections::hash_map::Entry::Vacant(slot) = closure.index.entry(next) {
                let idx = closure.elements.len() as u32;
                slot.insert(idx);
                closure.elements.push(next);
                closure.parent.push((cur, gi as u32));
                queue.push_back(idx);
            }
        }
    }
    Ok(closure)
}

/// Transvections about every nonzero vector; they generate `Sp(2g, Z/2)`.
pub fn all_transvections(genus: Genus) -> Vec<Z2Matrix> {
    Z2Vec::all(genus).skip(1).map(|a| Z2Matrix::transvection_unchecked(&a)).collect()
}

/// Transvections about `x_i`, `y_i` and `x_i + x_{i+1}`: the mod-2 images of a
/// Lickorish generating set, enough to generate `Sp(2g, Z/2)`.
pub fn generating_transvections(genus: Genus) -> Vec<Z2Matrix> {
    let g = genus.get();
    let mut out = Vec::with_capacity(3 * g - 1);
    for i in 1..=g {
        out.push(Z2Matrix::transvection_unchecked(&Z2Vec::x(genus, i)));
        out.push(Z2Matrix::transvection_unchecked(&Z2Vec::y(genus, i)));
    }
    for i in 1..g {
        out.push(Z2Matrix::transvection_unchecked(&Z2Vec::x(genus, i).xor(&Z2Vec::x(genus, i + 1))));
    }
    out
}

/// Transvections about the vectors with `q(z) = 1`.
pub fn form_transvections(q: &QuadForm) -> Vec<Z2Matrix> {
    Z2Vec::all(q.genus()).filter(|z| q.eval_bits(z.bits())).map(|z| Z2Matrix::transvection_unchecked(&z)).collect()
}

/// `|Sp(2g, Z/2)|` by BFS.
pub fn symplectic_group_order(genus: Genus) -> Result<usize> {
    Ok(bfs_closure(genus, &generating_transvections(genus))?.order())
}

/// Elements of `Sp(2g, Z/2)` preserving `q`, found by filtering the BFS
/// closure of [`generating_transvections`].
pub fn orthogonal_group(q: &QuadForm) -> Result<Vec<Z2Matrix>> {
    let genus = q.genus();
    let sp = bfs_closure(genus, &generating_transvections(genus))?;
    let n = genus.dim();
    let basis_q: Vec<bool> = (0..n).map(|k| q.eval_bits(1 << k)).collect();
    Ok(sp.elements().filter(|m| m.raw_columns().iter().zip(&basis_q).all(|(&c, &v)| q.eval_bits(c) == v)).collect())
}

/// `|O(2g, Z/2)|` for `q_0`.
pub fn orthogonal_group_order(genus: Genus) -> Result<usize> {
    Ok(orthogonal_group(&QuadForm::zero(genus))?.len())
}

/// Order of the subgroup generated by the transvections about vectors with
/// `q_0(z) = 1`. It is all of `O(2g, Z/2)` except in genus 2, where it has
/// index 2.
pub fn transvection_subgroup_order(genus: Genus) -> Result<usize> {
    Ok(bfs_closure(genus, &form_transvections(&QuadForm::zero(genus)))?.order())
}
