//! Factorization of elements of `O(2g, Z/2)` (the isometries of `q_0`) into
//! `Z/2`-transvections and then into the standard generator transvections.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::lambda::{lambda_reduce, z2_transvection, LambdaGenerator, LambdaVec};
use crate::error::{Error, Result};
use crate::symplectic::{bfs_closure, form_transvections, preserves_form, Closure, Genus, QuadForm, Z2Matrix, Z2Vec};

/// Largest genus for which the breadth-first fallback is attempted.
const FALLBACK_MAX_GENUS: usize = 3;

fn require_orthogonal(m: &Z2Matrix) -> Result<()> {
    if !m.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    if !preserves_form(m, &QuadForm::zero(m.genus()))? {
        return Err(Error::NotOrthogonal);
    }
    Ok(())
}

/// Product `𝕋_{z_1} 𝕋_{z_2} ⋯ 𝕋_{z_k}` in list order.
pub fn transvection_product(genus: Genus, zs: &[LambdaVec]) -> Result<Z2Matrix> {
    zs.iter().try_fold(Z2Matrix::identity(genus), |acc, z| {
        genus.ensure_same(z.genus())?;
        acc.mul(&z2_transvection(z))
    })
}

fn fallback_closure(genus: Genus) -> Result<std::sync::Arc<Closure>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<Closure>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("closure cache poisoned");
    if let Some(c) = guard.get(&genus.get()) {
        return Ok(c.clone());
    }
    let closure = std::sync::Arc::new(bfs_closure(genus, &form_transvections(&QuadForm::zero(genus)))?);
    guard.insert(genus.get(), closure.clone());
    Ok(closure)
}

fn lambda_vectors(genus: Genus) -> Vec<LambdaVec> {
    LambdaVec::all(genus).collect()
}

/// Writes `m ∈ O(2g, Z/2)` as `𝕋_{z_1} ⋯ 𝕋_{z_k}` with every `q_0(z_i) = 1`.
///
/// Basis vectors are fixed one at a time: if `v = A b` differs from `b`, then
/// `𝕋_{v+b}` sends `v` to `b` when `(v, b)_2 = 1`; otherwise an intermediate `u`
/// with `(v, u)_2 = (u, b)_2 = 1` and the same pairings as `b` with the basis
/// vectors already fixed is used with `𝕋_{v+u}` then `𝕋_{u+b}`. If no such `u`
/// exists the remainder is looked up in a breadth-first enumeration of the
/// transvection subgroup (genus at most 3).
///
/// In genus 2 the transvections generate a subgroup of index 2 in
/// `O(4, Z/2)`, so half of its elements have no factorization and yield
/// [`Error::FactorizationStalled`].
pub fn factor_into_z2_transvections(m: &Z2Matrix) -> Result<Vec<LambdaVec>> {
    require_orthogonal(m)?;
    let genus = m.genus();
    let n = genus.dim();
    let q = QuadForm::zero(genus);
    let candidates = lambda_vectors(genus);
    // A = P_j ⋯ P_1 m, so m = P_1 ⋯ P_j A
    let mut a = m.clone();
    let mut out: Vec<LambdaVec> = Vec::new();
    let mut stalled = false;
    'columns: for k in 0..n {
        let b = Z2Vec::basis(genus, k);
        let v = a.apply(&b)?;
        if v == b {
            continue;
        }
        let mut steps = Vec::new();
        if v.pair(&b) {
            steps.push(LambdaVec::new(v.xor(&b))?);
        } else {
            let qb = q.eval_bits(b.bits());
            let found = Z2Vec::all(genus).find(|u| {
                q.eval_bits(u.bits()) == qb
                    && v.pair(u)
                    && u.pair(&b)
                    && (0..k).all(|l| {
                        let e = Z2Vec::basis(genus, l);
                        u.pair(&e) == b.pair(&e)
                    })
            });
            match found {
                Some(u) => {
                    steps.push(LambdaVec::new(v.xor(&u))?);
                    steps.push(LambdaVec::new(u.xor(&b))?);
                }
                None => {
                    stalled = true;
                    break 'columns;
                }
            }
        }
        for z in steps {
            a = z2_transvection(&z).mul(&a)?;
            out.push(z);
        }
        debug_assert_eq!(a.apply(&b)?, b);
    }
    if stalled || !a.is_identity() {
        if genus.get() > FALLBACK_MAX_GENUS {
            return Err(Error::FactorizationStalled(format!("column stabilization stalled in genus {}", genus)));
        }
        let closure = fallback_closure(genus)?;
        let word = closure.word_for(&a).ok_or_else(|| {
            Error::FactorizationStalled(format!(
                "not a product of Z/2-transvections (genus {genus} transvection subgroup has order {})",
                closure.order()
            ))
        })?;
        // word_for gives A = g_{k_r} ⋯ g_{k_1}; generator i is 𝕋 about the i-th q_0 = 1 vector
        let gens: Vec<LambdaVec> = candidates;
        out.extend(word.iter().rev().map(|&i| gens[i]));
    }
    if transvection_product(genus, &out)? != *m {
        return Err(Error::FactorizationStalled("product check failed".into()));
    }
    Ok(out)
}

/// A word in the generator transvections `𝕋_{x_i+y_i}`, `𝕋_{x_i+y_i+x_{i+1}}`
/// and `𝕋_{x_i+x_{i+1}+y_{i+1}}`, multiplied in list order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrthWord(pub Vec<LambdaGenerator>);

impl OrthWord {
    pub fn product(&self, genus: Genus) -> Result<Z2Matrix> {
        self.0.iter().try_fold(Z2Matrix::identity(genus), |acc, gen| acc.mul(&z2_transvection(&gen.vector(genus)?)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push_reduced(&mut self, gen: LambdaGenerator) {
        if self.0.last() == Some(&gen) {
            self.0.pop();
        } else {
            self.0.push(gen);
        }
    }
}

impl fmt::Display for OrthWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| format!("T[{g}]")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Rewrites `m ∈ O(2g, Z/2)` as a word in the generator transvections.
///
/// Each factor `𝕋_z` is expanded through its reduction
/// `z □ m_1 □ ⋯ □ m_r = gen` as `𝕋_{m_1} ⋯ 𝕋_{m_r} 𝕋_gen 𝕋_{m_r} ⋯ 𝕋_{m_1}`;
/// adjacent equal letters cancel.
pub fn factor_orthogonal(m: &Z2Matrix) -> Result<OrthWord> {
    let genus = m.genus();
    let mut word = OrthWord(Vec::new());
    for z in factor_into_z2_transvections(m)? {
        let red = lambda_reduce(&z)?;
        let gen = red.generator().ok_or_else(|| Error::FactorizationStalled(format!("{z} did not reduce")))?;
        for mv in &red.moves {
            word.push_reduced(mv.generator());
        }
        word.push_reduced(gen);
        for mv in red.moves.iter().rev() {
            word.push_reduced(mv.generator());
        }
    }
    if word.product(genus)? != *m {
        return Err(Error::FactorizationStalled("generator word does not multiply back".into()));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::orthogonal_group;

    fn g(n: usize) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn identity_factors_trivially() {
        let g3 = g(3);
        assert!(factor_into_z2_transvections(&Z2Matrix::identity(g3)).unwrap().is_empty());
        assert!(factor_orthogonal(&Z2Matrix::identity(g3)).unwrap().is_empty());
    }

    #[test]
    fn single_transvections() {
        let g3 = g(3);
        let z = LambdaVec::new(Z2Vec::from_blocks(g3, &[(1, 1), (0, 0), (0, 0)]).unwrap()).unwrap();
        assert_eq!(factor_into_z2_transvections(&z2_transvection(&z)).unwrap(), vec![z]);
        let gen = LambdaGenerator::Forward(1);
        let word = factor_orthogonal(&z2_transvection(&gen.vector(g3).unwrap())).unwrap();
        assert_eq!(word.0, vec![gen]);
    }

    #[test]
    fn rejects_non_orthogonal() {
        let g2 = g(2);
        let m = crate::symplectic::transvection_mod2(&Z2Vec::x(g2, 1)).unwrap();
        assert!(matches!(factor_into_z2_transvections(&m), Err(Error::NotOrthogonal)));
    }

    #[test]
    fn genus_two_splits_in_half() {
        let g2 = g(2);
        let all = orthogonal_group(&QuadForm::zero(g2)).unwrap();
        assert_eq!(all.len(), 72);
        let ok = all.iter().filter(|m| factor_orthogonal(m).is_ok()).count();
        assert_eq!(ok, 36);
    }
}
