//! Homology classes of the twist curves `c_i` and `b_{2j}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::symplectic::{intersection_int, Genus, QuadForm, Vector, Z2Vec};
use crate::words::{Letter, LetterKind};

/// Classes of the twist curves: integral and mod-2 classes for every `c_i`,
/// mod-2 classes for every `b_{2j}`, and optional integral lifts of `b_{2j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClassTable {
    genus: Genus,
    c_int: Vec<Vector<i64>>,
    b_mod2: BTreeMap<usize, Z2Vec>,
    b_int: BTreeMap<usize, Vector<i64>>,
}

impl CurveClassTable {
    /// The chain `[c_1] = x_1`, `[c_{2k}] = y_k`, `[c_{2k+1}] = x_{k+1} - x_k`,
    /// `[c_{2g+1}] = -x_g`, with consecutive intersections `+1`, and
    /// `[b_{2j}] ≡ x_j mod 2` with no integral lift.
    pub fn canonical(genus: Genus) -> Self {
        let g = genus.get();
        let mut c_int = Vec::with_capacity(2 * g + 1);
        for i in 1..=2 * g + 1 {
            let v = if i % 2 == 0 {
                Vector::y(genus, i / 2)
            } else {
                let k = (i - 1) / 2;
                let mut v = Vector::zero(genus);
                if k >= 1 {
                    v = v.add_scaled(&-1, &Vector::x(genus, k)).expect("small");
                }
                if k < g {
                    v = v.add(&Vector::x(genus, k + 1)).expect("small");
                }
                v
            };
            c_int.push(v);
        }
        let b_mod2 = (2..g).map(|j| (2 * j, Z2Vec::x(genus, j))).collect();
        CurveClassTable { genus, c_int, b_mod2, b_int: BTreeMap::new() }
    }

    /// Builds a table and checks every structural invariant.
    pub fn new(
        genus: Genus,
        c_int: Vec<Vector<i64>>,
        b_mod2: BTreeMap<usize, Z2Vec>,
        b_int: BTreeMap<usize, Vector<i64>>,
    ) -> Result<Self> {
        let t = Self::new_unvalidated(genus, c_int, b_mod2, b_int)?;
        t.validate()?;
        Ok(t)
    }

    /// Builds a table without the chain and form checks; only shapes are checked.
    /// Useful for negative controls.
    pub fn new_unvalidated(
        genus: Genus,
        c_int: Vec<Vector<i64>>,
        b_mod2: BTreeMap<usize, Z2Vec>,
        b_int: BTreeMap<usize, Vector<i64>>,
    ) -> Result<Self> {
        let g = genus.get();
        if c_int.len() != 2 * g + 1 {
            return Err(Error::CurveTable(format!("expected {} c-classes, got {}", 2 * g + 1, c_int.len())));
        }
        for v in &c_int {
            genus.ensure_same(v.genus())?;
        }
        let expected_b: Vec<usize> = (2..g).map(|j| 2 * j).collect();
        if b_mod2.keys().copied().collect::<Vec<_>>() != expected_b {
            return Err(Error::CurveTable(format!("b-classes must be given for indices {expected_b:?}")));
        }
        for (k, v) in b_int.iter() {
            if !expected_b.contains(k) {
                return Err(Error::CurveTable(format!("unexpected integral class for B{k}")));
            }
            genus.ensure_same(v.genus())?;
        }
        Ok(CurveClassTable { genus, c_int, b_mod2, b_int })
    }

    /// Same table with one `c`-class replaced, unvalidated.
    pub fn with_c_class_unvalidated(&self, index: usize, class: Vector<i64>) -> Self {
        let mut t = self.clone();
        t.c_int[index - 1] = class;
        t
    }

    /// Adds an integral lift for `b_{2j}`; it must reduce to the configured mod-2 class.
    pub fn with_b_lift(mut self, index: usize, class: Vector<i64>) -> Result<Self> {
        let m2 = self
            .b_mod2
            .get(&index)
            .ok_or_else(|| Error::CurveTable(format!("no curve b{index} in genus {}", self.genus)))?;
        if class.reduce_mod2() != *m2 {
            return Err(Error::CurveTable(format!("lift of B{index} does not reduce to {m2}")));
        }
        self.b_int.insert(index, class);
        self.validate()?;
        Ok(self)
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    /// Checks: consecutive `c`-classes meet once, others are disjoint in homology;
    /// `q_0` vanishes on every class; `[b_{2j}] ≡ x_j mod 2`; integral lifts are
    /// primitive and reduce correctly.
    pub fn validate(&self) -> Result<()> {
        let n = self.c_int.len();
        let q0 = QuadForm::zero(self.genus);
        for i in 0..n {
            if !self.c_int[i].is_primitive() {
                return Err(Error::CurveTable(format!("[c{}] = {} is not primitive", i + 1, self.c_int[i])));
            }
            for j in (i + 1)..n {
                let p = intersection_int(&self.c_int[i], &self.c_int[j])?;
                let want_one = j == i + 1;
                if (want_one && p.abs() != 1) || (!want_one && p != 0) {
                    return Err(Error::CurveTable(format!("([c{}], [c{}]) = {p}", i + 1, j + 1)));
                }
            }
            if crate::symplectic::quad_eval(&q0, &self.c_int[i].reduce_mod2())? {
                return Err(Error::CurveTable(format!("q0 is nonzero on [c{}]", i + 1)));
            }
        }
        for (&k, v) in &self.b_mod2 {
            if *v != Z2Vec::x(self.genus, k / 2) {
                return Err(Error::CurveTable(format!("[b{k}] must be x{} mod 2", k / 2)));
            }
        }
        for (&k, v) in &self.b_int {
            if !v.is_primitive() || v.reduce_mod2() != self.b_mod2[&k] {
                return Err(Error::CurveTable(format!("bad integral lift of b{k}")));
            }
        }
        Ok(())
    }

    /// Integral class of the curve under a letter.
    pub fn int_class(&self, letter: &Letter) -> Result<&Vector<i64>> {
        letter.validate(self.genus)?;
        match letter.kind {
            LetterKind::C => Ok(&self.c_int[letter.index - 1]),
            LetterKind::B => self.b_int.get(&letter.index).ok_or_else(|| Error::MissingIntegralClass(letter.name())),
        }
    }

    /// Mod-2 class of the curve under a letter.
    pub fn mod2_class(&self, letter: &Letter) -> Result<Z2Vec> {
        letter.validate(self.genus)?;
        match letter.kind {
            LetterKind::C => Ok(self.c_int[letter.index - 1].reduce_mod2()),
            LetterKind::B => Ok(self.b_mod2[&letter.index]),
        }
    }

    /// JSON map from letter name to coordinate list. `C`-entries are integral;
    /// `B`-entries are integral lifts and are omitted when unconfigured.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (i, v) in self.c_int.iter().enumerate() {
            map.insert(format!("C{}", i + 1), serde_json::json!(v.coords()));
        }
        for (k, v) in &self.b_int {
            map.insert(format!("B{k}"), serde_json::json!(v.coords()));
        }
        serde_json::Value::Object(map)
    }

    /// Reads the format written by [`CurveClassTable::to_json`]. Missing `B`-entries
    /// default to the mod-2 class `x_j` without an integral lift.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let t = Self::from_json_unvalidated(value)?;
        t.validate()?;
        Ok(t)
    }

    /// Reads a table checking only its shape.
    pub fn from_json_unvalidated(value: &serde_json::Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::CurveTable("expected a JSON object".into()))?;
        let mut c: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        let mut b: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for (key, v) in obj {
            let coords: Vec<i64> =
                serde_json::from_value(v.clone()).map_err(|e| Error::CurveTable(format!("{key}: {e}")))?;
            let (target, idx) = if let Some(rest) = key.strip_prefix('C') {
                (&mut c, rest)
            } else if let Some(rest) = key.strip_prefix('B') {
                (&mut b, rest)
            } else {
                return Err(Error::CurveTable(format!("unknown key {key}")));
            };
            let idx: usize = idx.parse().map_err(|_| Error::CurveTable(format!("bad key {key}")))?;
            target.insert(idx, coords);
        }
        let dim = c.values().next().map(|v| v.len()).ok_or_else(|| Error::CurveTable("no C classes".into()))?;
        if dim % 2 != 0 {
            return Err(Error::CurveTable("odd coordinate count".into()));
        }
        let genus = Genus::new(dim / 2)?;
        let g = genus.get();
        if c.keys().copied().collect::<Vec<_>>() != (1..=2 * g + 1).collect::<Vec<_>>() {
            return Err(Error::CurveTable(format!("expected keys C1..C{}", 2 * g + 1)));
        }
        let c_int = c.values().map(|v| Vector::from_i64s(genus, v)).collect::<Result<Vec<_>>>()?;
        let b_mod2 = (2..g).map(|j| (2 * j, Z2Vec::x(genus, j))).collect();
        let b_int =
            b.into_iter().map(|(k, v)| Ok((k, Vector::from_i64s(genus, &v)?))).collect::<Result<BTreeMap<_, _>>>()?;
        Self::new_unvalidated(genus, c_int, b_mod2, b_int)
    }
}
