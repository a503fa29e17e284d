//! The genus-2 Reidemeister–Schreier computation: the action of the chain
//! twists on Arf-0 quadratic forms, the coset representatives, the Schreier
//! generators and their identification with named elements.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::curves::CurveClassTable;
use crate::error::{Error, Result};
use crate::symplectic::{arf, bfs_closure, enumerate_forms, Closure, Genus, Matrix, QuadForm, Z2Matrix};
use crate::words::{parse_word, GenWord, Letter, LetterKind, NamedElement};

/// The coset representatives, in the order of the table rows.
pub const COSET_WORDS: [&str; 10] = ["1", "C1", "C2", "C3", "C4", "C5", "C1 C4", "C2 C4", "C2 C5", "C2 C4 C3"];

/// Expected names of `s C_i r̄(s C_i)^{-1}`; rows follow [`COSET_WORDS`],
/// columns are `C1 .. C5`.
pub const TABLE1: [[&str; 5]; 10] = [
    ["1", "1", "1", "1", "1"],
    ["D1", "Xs1", "T D5^-1", "1", "T D3^-1"],
    ["X1", "D2", "Xs2", "1", "1"],
    ["T D5^-1", "X2", "D3", "Xs3", "T D1^-1"],
    ["1", "1", "X3", "D4", "Xs4"],
    ["T D3^-1", "1", "T D1^-1", "X4", "D5"],
    ["D1", "Xs1", "X3", "D4", "Xs4"],
    ["X1", "D2", "1", "D4", "Xs4"],
    ["X1", "D2", "Xs2", "X4", "D5"],
    ["X1", "X3", "Xs2^-1 D4 Xs2", "Xs2", "Xs4"],
];

fn genus2() -> Genus {
    Genus::new(2).expect("genus 2")
}

/// A quadratic form on `H_1(Σ_2; Z/2)` by its values on `x1, y1, x2, y2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FormVertex {
    pub label: [u8; 4],
}

impl FormVertex {
    pub fn new(label: [u8; 4]) -> Result<Self> {
        let v = FormVertex { label };
        if arf(&v.form()?) {
            return Err(Error::Unsupported(format!("form {v} has Arf invariant 1")));
        }
        Ok(v)
    }

    pub fn base() -> Self {
        FormVertex { label: [0; 4] }
    }

    pub fn form(&self) -> Result<QuadForm> {
        QuadForm::from_basis_values(genus2(), &self.label)
    }

    fn from_form(q: &QuadForm) -> Self {
        let b = q.basis_values();
        FormVertex { label: [b[0], b[1], b[2], b[3]] }
    }

    /// Compact label `[e1e2e3e4]`.
    pub fn compact(&self) -> String {
        format!("[{}{}{}{}]", self.label[0], self.label[1], self.label[2], self.label[3])
    }
}

impl fmt::Display for FormVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.label;
        write!(f, "[{},{},{},{}]", l[0], l[1], l[2], l[3])
    }
}

/// `v · C_i`: the form `v` evaluated on the images of the basis under `C_i`.
pub fn action_edge(v: FormVertex, i: usize) -> Result<FormVertex> {
    action_edge_with(&CurveClassTable::canonical(genus2()), v, &Letter::c(i))
}

pub fn action_edge_with(table: &CurveClassTable, v: FormVertex, letter: &Letter) -> Result<FormVertex> {
    if table.genus().get() != 2 {
        return Err(Error::GenusMismatch { left: table.genus().get(), right: 2 });
    }
    if letter.kind != LetterKind::C {
        return Err(Error::InvalidLetter(letter.to_string()));
    }
    let m = table.eval_mod2(&GenWord::new(vec![*letter]))?;
    Ok(FormVertex::from_form(&v.form()?.pull_back(&m)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitEdge {
    pub from: usize,
    pub letter: usize,
    pub to: usize,
}

/// The orbit of `[0,0,0,0]` under the chain twists, with all edges
/// including self-loops.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitGraph {
    pub vertices: Vec<FormVertex>,
    pub edges: Vec<OrbitEdge>,
}

impl OrbitGraph {
    pub fn build() -> Result<Self> {
        Self::build_with(&CurveClassTable::canonical(genus2()))
    }

    pub fn build_with(table: &CurveClassTable) -> Result<Self> {
        let mut vertices = vec![FormVertex::base()];
        let mut index: HashMap<FormVertex, usize> = HashMap::from([(FormVertex::base(), 0)]);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 1..=5 {
                let w = action_edge_with(table, vertices[k], &Letter::c(i))?;
                let to = *index.entry(w).or_insert_with(|| {
                    vertices.push(w);
                    queue.push_back(vertices.len() - 1);
                    vertices.len() - 1
                });
                edges.push(OrbitEdge { from: k, letter: i, to });
            }
        }
        Ok(OrbitGraph { vertices, edges })
    }

    pub fn vertex_index(&self, v: &FormVertex) -> Option<usize> {
        self.vertices.iter().position(|u| u == v)
    }

    pub fn target(&self, from: usize, letter: usize) -> Option<usize> {
        self.edges.iter().find(|e| e.from == from && e.letter == letter).map(|e| e.to)
    }

    /// Every `C_i` acts as an involution on the vertices.
    pub fn is_involutive(&self) -> bool {
        self.edges.iter().all(|e| self.target(e.to, e.letter) == Some(e.from))
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        while let Some(k) = stack.pop() {
            if std::mem::replace(&mut seen[k], true) {
                continue;
            }
            for e in &self.edges {
                if e.from == k {
                    stack.push(e.to);
                }
                if e.to == k {
                    stack.push(e.from);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Undirected DOT rendering without self-loops.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph orbit {\n");
        for (k, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{k} [label=\"{}\"];\n", v.compact()));
        }
        for e in &self.edges {
            if e.from < e.to || (e.from > e.to && self.target(e.to, e.letter) != Some(e.from)) {
                out.push_str(&format!("  v{} -- v{} [label=\"C{}\"];\n", e.from, e.to, e.letter));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The coset words together with the vertices they reach.
#[derive(Debug, Clone)]
pub struct CosetSystem {
    table: CurveClassTable,
    graph: OrbitGraph,
    words: Vec<GenWord>,
    vertex_of: Vec<usize>,
}

impl CosetSystem {
    pub fn canonical() -> Result<Self> {
        Self::with_table(CurveClassTable::canonical(genus2()))
    }

    pub fn with_table(table: CurveClassTable) -> Result<Self> {
        let graph = OrbitGraph::build_with(&table)?;
        let words = coset_words();
        let mut vertex_of = Vec::with_capacity(words.len());
        for w in &words {
            vertex_of.push(walk(&graph, w)?);
        }
        Ok(CosetSystem { table, graph, words, vertex_of })
    }

    pub fn words(&self) -> &[GenWord] {
        &self.words
    }

    pub fn graph(&self) -> &OrbitGraph {
        &self.graph
    }

    pub fn table(&self) -> &CurveClassTable {
        &self.table
    }

    /// Distinct coset words reach distinct vertices and cover the orbit.
    pub fn is_transversal(&self) -> bool {
        let mut seen = self.vertex_of.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.words.len() && seen.len() == self.graph.vertices.len() && self.vertex_of[0] == 0
    }

    pub fn vertex_of(&self, s: usize) -> usize {
        self.vertex_of[s]
    }

    /// Row index of `r̄(w)`.
    pub fn representative_index(&self, w: &GenWord) -> Result<usize> {
        let v = walk(&self.graph, w)?;
        self.vertex_of
            .iter()
            .position(|&u| u == v)
            .ok_or_else(|| Error::Unsupported(format!("no coset word reaches {}", self.graph.vertices[v])))
    }

    pub fn representative(&self, w: &GenWord) -> Result<GenWord> {
        Ok(self.words[self.representative_index(w)?].clone())
    }

    /// `s C_i r̄(s C_i)^{-1}`, freely reduced.
    pub fn schreier_generator(&self, s: usize, i: usize) -> Result<GenWord> {
        let mut w = self.words[s].clone();
        w.push(Letter::c(i));
        let r = self.representative(&w)?;
        Ok(w.concat(&r.inverse()).free_reduce())
    }
}

fn coset_words() -> Vec<GenWord> {
    COSET_WORDS.iter().map(|s| parse_word(s, genus2()).expect("coset word")).collect()
}

// The walk reads the word from the left: q · (g_1 g_2) = (q · g_1) · g_2.
// Inverse letters use the same edge; mod 2 every transvection is an involution.
fn walk(graph: &OrbitGraph, w: &GenWord) -> Result<usize> {
    let mut at = 0;
    for l in w.letters() {
        if l.kind != LetterKind::C || !(1..=5).contains(&l.index) {
            return Err(Error::InvalidLetter(format!("{l} in genus 2")));
        }
        at = graph
            .target(at, l.index)
            .ok_or_else(|| Error::Unsupported(format!("edge {l} missing from the orbit graph")))?;
    }
    Ok(at)
}

/// `r̄(w)` for the canonical curve classes.
pub fn coset_representative(w: &GenWord) -> Result<GenWord> {
    CosetSystem::canonical()?.representative(w)
}

/// `s C_i r̄(s C_i)^{-1}` for a coset word `s` given as text.
pub fn schreier_generator(s: &GenWord, i: usize) -> Result<GenWord> {
    let sys = CosetSystem::canonical()?;
    let row = sys
        .words
        .iter()
        .position(|w| w == s)
        .ok_or_else(|| Error::Parse { token: s.to_string(), reason: "not a coset word".into() })?;
    if !(1..=5).contains(&i) {
        return Err(Error::InvalidLetter(format!("C{i} in genus 2")));
    }
    sys.schreier_generator(row, i)
}

/// Names that table entries are matched against.
pub fn table_vocabulary() -> Vec<String> {
    let mut v = vec!["1".to_string()];
    v.extend((1..=5).map(|j| format!("D{j}")));
    v.extend((1..=4).map(|j| format!("X{j}")));
    v.extend((1..=4).map(|j| format!("Xs{j}")));
    v.extend((1..=5).map(|j| format!("T D{j}^-1")));
    v.push("Xs2^-1 D4 Xs2".into());
    v
}

#[derive(Debug, Clone, Serialize)]
pub struct SchreierEntry {
    pub row: String,
    pub column: usize,
    pub raw: Option<GenWord>,
    pub expected: String,
    /// First vocabulary name with the same integral matrix.
    pub identified: Option<String>,
    pub int_match: bool,
    pub mod2_match: bool,
    pub spin: bool,
    pub note: Option<String>,
    #[serde(skip)]
    pub raw_matrix: Option<Matrix<i64>>,
    #[serde(skip)]
    pub expected_matrix: Option<Matrix<i64>>,
}

impl SchreierEntry {
    pub fn passes(&self) -> bool {
        self.raw.is_some() && self.int_match && self.mod2_match && self.spin
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SchreierTable {
    pub entries: Vec<SchreierEntry>,
}

impl SchreierTable {
    pub fn entry(&self, row: usize, column: usize) -> &SchreierEntry {
        &self.entries[row * 5 + column - 1]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[SchreierEntry]> {
        self.entries.chunks(5)
    }

    /// Aligned text: one row per coset word, identified names in the cells.
    pub fn to_text(&self) -> String {
        let cell = |e: &SchreierEntry| e.identified.clone().unwrap_or_else(|| "?".into());
        let mut widths = [0usize; 6];
        widths[0] = COSET_WORDS.iter().map(|s| s.len()).max().unwrap_or(1);
        for row in self.rows() {
            for e in row {
                widths[e.column] = widths[e.column].max(cell(e).len()).max(2);
            }
        }
        let mut out = format!("{:w$}", "s", w = widths[0]);
        for (c, w) in widths.iter().enumerate().skip(1) {
            out.push_str(&format!(" | {:w$}", format!("C{c}")));
        }
        out.push('\n');
        out.push_str(&"-".repeat(out.trim_end().chars().count()));
        out.push('\n');
        for row in self.rows() {
            out.push_str(&format!("{:w$}", row[0].row, w = widths[0]));
            for e in row {
                out.push_str(&format!(" | {:w$}", cell(e), w = widths[e.column]));
            }
            out.push('\n');
        }
        out
    }
}

fn word_or_identity(s: &str) -> Result<GenWord> {
    parse_word(s, genus2())
}

/// Computes every `s C_i r̄(s C_i)^{-1}` and compares it with the expected
/// name using the given curve classes.
pub fn build_table_with(table: &CurveClassTable) -> Result<SchreierTable> {
    let sys = CosetSystem::with_table(table.clone())?;
    let q0 = QuadForm::zero(genus2());
    let vocab: Vec<(String, Matrix<i64>)> = table_vocabulary()
        .into_iter()
        .map(|n| {
            let m = table.eval_int(&word_or_identity(&n)?)?;
            Ok((n, m))
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(50);
    for (row, s) in COSET_WORDS.iter().enumerate() {
        for i in 1..=5 {
            let expected = TABLE1[row][i - 1].to_string();
            let expected_word = word_or_identity(&expected)?;
            let expected_matrix: Matrix<i64> = table.eval_int(&expected_word)?;
            let mut entry = SchreierEntry {
                row: s.to_string(),
                column: i,
                raw: None,
                expected,
                identified: None,
                int_match: false,
                mod2_match: false,
                spin: false,
                note: None,
                raw_matrix: None,
                expected_matrix: Some(expected_matrix.clone()),
            };
            match sys.schreier_generator(row, i) {
                Ok(raw) => {
                    let m: Matrix<i64> = table.eval_int(&raw)?;
                    let m2 = table.eval_mod2(&raw)?;
                    entry.int_match = m == expected_matrix;
                    entry.mod2_match = m2 == table.eval_mod2(&expected_word)?;
                    entry.spin = crate::symplectic::preserves_form(&m2, &q0)?;
                    entry.identified = vocab.iter().find(|(_, vm)| *vm == m).map(|(n, _)| n.clone());
                    entry.raw_matrix = Some(m);
                    entry.raw = Some(raw);
                }
                Err(e) => entry.note = Some(e.to_string()),
            }
            entries.push(entry);
        }
    }
    Ok(SchreierTable { entries })
}

pub fn build_table() -> Result<SchreierTable> {
    build_table_with(&CurveClassTable::canonical(genus2()))
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryFailure {
    pub row: String,
    pub column: usize,
    pub expected: String,
    pub raw: Option<GenWord>,
    pub raw_matrix: Option<Vec<Vec<i64>>>,
    pub expected_matrix: Option<Vec<Vec<i64>>>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Report {
    pub passed: usize,
    pub total: usize,
    pub all_spin: bool,
    pub failures: Vec<EntryFailure>,
}

impl Table1Report {
    pub fn pass(&self) -> bool {
        self.passed == self.total && self.all_spin && self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {}/{} entries match; spin check on all raw words: {}\n",
            if self.pass() { "PASS" } else { "FAIL" },
            self.passed,
            self.total,
            self.all_spin
        );
        for f in &self.failures {
            out.push_str(&format!("  row {} column C{}: expected {}", f.row, f.column, f.expected));
            match &f.raw {
                Some(r) => {
                    out.push_str(&format!(", raw word {}\n", if r.is_empty() { "1".into() } else { r.to_string() }))
                }
                None => out.push('\n'),
            }
            if let Some(n) = &f.note {
                out.push_str(&format!("    {n}\n"));
            }
            if let Some(m) = &f.raw_matrix {
                out.push_str(&format!("    raw      {m:?}\n"));
            }
            if let Some(m) = &f.expected_matrix {
                out.push_str(&format!("    expected {m:?}\n"));
            }
        }
        out
    }
}

pub fn verify_table1_with(table: &CurveClassTable) -> Result<Table1Report> {
    let t = build_table_with(table)?;
    let all_spin = t.entries.iter().all(|e| e.spin);
    let failures: Vec<EntryFailure> = t
        .entries
        .iter()
        .filter(|e| !e.passes())
        .map(|e| EntryFailure {
            row: e.row.clone(),
            column: e.column,
            expected: e.expected.clone(),
            raw: e.raw.clone(),
            raw_matrix: e.raw_matrix.as_ref().map(|m| m.rows()),
            expected_matrix: e.expected_matrix.as_ref().map(|m| m.rows()),
            note: e.note.clone(),
        })
        .collect();
    Ok(Table1Report { passed: t.entries.len() - failures.len(), total: t.entries.len(), all_spin, failures })
}

pub fn verify_table1() -> Result<Table1Report> {
    verify_table1_with(&CurveClassTable::canonical(genus2()))
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratedGroupCheck {
    pub schreier_closure_order: usize,
    pub named_closure_order: usize,
    pub same_group: bool,
    pub all_in_named_closure: bool,
}

/// Compares the subgroups of `Sp(4, Z/2)` generated by the Schreier
/// generators and by the named generators `X1..X4, D1..D5, T`.
pub fn generated_group_check() -> Result<(GeneratedGroupCheck, Closure)> {
    let g2 = genus2();
    let sys = CosetSystem::canonical()?;
    let mut schreier: Vec<Z2Matrix> = Vec::new();
    for row in 0..COSET_WORDS.len() {
        for i in 1..=5 {
            schreier.push(sys.table.eval_mod2(&sys.schreier_generator(row, i)?)?);
        }
    }
    let named: Vec<Z2Matrix> =
        NamedElement::generators(g2).into_iter().map(|n| sys.table.eval_mod2(&n.expand(g2)?)).collect::<Result<_>>()?;
    let a = bfs_closure(g2, &schreier)?;
    let b = bfs_closure(g2, &named)?;
    let check = GeneratedGroupCheck {
        schreier_closure_order: a.order(),
        named_closure_order: b.order(),
        same_group: a.same_elements(&b),
        all_in_named_closure: schreier.iter().all(|m| b.contains(m)),
    };
    Ok((check, b))
}

/// `[M_2 : SP_2]` as the orbit size, next to the number of Arf-0 forms.
pub fn index_check() -> Result<(usize, usize)> {
    let g = OrbitGraph::build()?;
    Ok((g.vertices.len(), enumerate_forms(genus2(), false).len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::Vector;

    fn w(s: &str) -> GenWord {
        parse_word(s, genus2()).unwrap()
    }

    #[test]
    fn edge_examples() {
        assert_eq!(action_edge(FormVertex::base(), 1).unwrap().label, [0, 1, 0, 0]);
        assert!(action_edge(FormVertex::base(), 6).is_err());
    }

    #[test]
    fn orbit_graph_shape() {
        let g = OrbitGraph::build().unwrap();
        assert_eq!(g.vertices.len(), 10);
        assert!(g.is_connected());
        assert!(g.is_involutive());
        for v in &g.vertices {
            assert!(!arf(&v.form().unwrap()));
        }
        assert_eq!(g.edges.len(), 50);
        assert!(g.edges.iter().any(|e| e.from == e.to));
        let dot = g.to_dot();
        assert!(dot.contains("[0000]"));
        assert!(!g
            .edges
            .iter()
            .filter(|e| e.from == e.to)
            .any(|e| dot.contains(&format!("v{} -- v{} ", e.from, e.to))));
    }

    #[test]
    fn coset_words_form_a_transversal() {
        let sys = CosetSystem::canonical().unwrap();
        assert!(sys.is_transversal());
        assert_eq!(index_check().unwrap(), (10, 10));
    }

    #[test]
    fn representatives() {
        assert_eq!(coset_representative(&w("C2 C4 C5 C2")).unwrap(), w("C4"));
        assert_eq!(coset_representative(&GenWord::identity()).unwrap(), GenWord::identity());
        assert_eq!(coset_representative(&w("C1 C1")).unwrap(), GenWord::identity());
        assert_eq!(coset_representative(&w("C1^-1")).unwrap(), w("C1"));
    }

    #[test]
    fn generator_examples() {
        assert!(schreier_generator(&GenWord::identity(), 1).unwrap().is_empty());
        assert_eq!(schreier_generator(&w("C1"), 2).unwrap().to_string(), "C1 C2 C1^-1");
        let t = CurveClassTable::canonical(genus2());
        let g = schreier_generator(&w("C2 C4 C3"), 1).unwrap();
        let a: Matrix<i64> = t.eval_int(&g).unwrap();
        let b: Matrix<i64> = t.eval_int(&w("X1")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn table_entries() {
        let t = build_table().unwrap();
        assert_eq!(t.entry(3, 5).identified.as_deref(), Some("T D1^-1"));
        assert_eq!(t.entry(9, 3).identified.as_deref(), Some("Xs2^-1 D4 Xs2"));
        assert_eq!(t.entry(4, 1).identified.as_deref(), Some("1"));
        assert_eq!(t.entry(4, 1).raw.as_ref().unwrap().to_string(), "C4 C1 C4^-1 C1^-1");
        assert!(t.entries.iter().all(|e| e.spin));
        assert!(t.to_text().contains("C2 C4 C3"));
    }

    #[test]
    fn table_verifies() {
        let r = verify_table1().unwrap();
        assert!(r.pass(), "{}", r.to_text());
        assert_eq!(r.passed, 50);
    }

    #[test]
    fn perturbed_classes_are_caught() {
        let g2 = genus2();
        let t = CurveClassTable::canonical(g2);
        let bad = t.with_c_class_unvalidated(3, Vector::from_i64s(g2, &[1, 0, 1, 1]).unwrap());
        let r = verify_table1_with(&bad).unwrap();
        assert!(!r.pass());
        assert!(!r.failures.is_empty());
    }

    #[test]
    fn generated_groups_agree() {
        let (c, _) = generated_group_check().unwrap();
        assert_eq!(c.schreier_closure_order, 72);
        assert_eq!(c.named_closure_order, 72);
        assert!(c.same_group && c.all_in_named_closure);
    }
}
