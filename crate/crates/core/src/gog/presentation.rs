//! Presentations of the fundamental group at a basepoint.

use std::collections::HashSet;
use std::fmt;

use crate::abelian::{abelianize, AbelianInvariants};
use crate::error::{Error, Result};
use crate::group::Elem;

use super::word::{ReducedWord, Syllable, Word};
use super::{Dir, EdgeId, GraphOfGroups, SpanningTree, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Generator `gen` (an index into `generators()`) of the group at `vertex`.
    Vertex { vertex: VertexId, gen: usize },
    /// Stable letter of a non-tree edge, oriented from its earlier endpoint.
    Stable { edge: EdgeId, dir: Dir },
}

/// A word in the generators as `(generator, exponent)` runs,
/// freely reduced with no zero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PresWord(pub Vec<(usize, i64)>);

impl PresWord {
    pub fn letter(g: usize, k: i64) -> Self {
        let mut w = PresWord::default();
        w.push(g, k);
        w
    }

    pub fn push(&mut self, g: usize, k: i64) {
        if k == 0 {
            return;
        }
        match self.0.last_mut() {
            Some(last) if last.0 == g => {
                last.1 += k;
                if last.1 == 0 {
                    self.0.pop();
                }
            }
            _ => self.0.push((g, k)),
        }
    }

    pub fn append(&mut self, other: &PresWord) {
        for &(g, k) in &other.0 {
            self.push(g, k);
        }
    }

    pub fn inverse(&self) -> PresWord {
        PresWord(self.0.iter().rev().map(|&(g, k)| (g, -k)).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letters with exponent `±1`.
    pub fn expanded(&self) -> Vec<(usize, i64)> {
        self.0
            .iter()
            .flat_map(|&(g, k)| std::iter::repeat_n((g, k.signum()), k.unsigned_abs() as usize))
            .collect()
    }

    /// Key identifying the word up to cyclic rotation and inversion.
    fn cyclic_key(&self) -> Vec<(usize, u8)> {
        let mut w = self.expanded();
        while w.len() >= 2 && w[0].0 == w[w.len() - 1].0 && w[0].1 == -w[w.len() - 1].1 {
            w.remove(0);
            w.pop();
        }
        let code = |w: &[(usize, i64)]| -> Vec<(usize, u8)> {
            w.iter().map(|&(g, s)| (g, u8::from(s < 0))).collect()
        };
        let inv: Vec<(usize, i64)> = w.iter().rev().map(|&(g, s)| (g, -s)).collect();
        let mut best: Option<Vec<(usize, u8)>> = None;
        for base in [&w, &inv] {
            for r in 0..base.len().max(1) {
                let mut rot = base[r..].to_vec();
                rot.extend_from_slice(&base[..r]);
                let c = code(&rot);
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
        best.unwrap_or_default()
    }
}

#[derive(Debug, Clone)]
pub struct Pi1Presentation {
    pub basepoint: VertexId,
    pub tree: SpanningTree,
    pub letters: Vec<Letter>,
    pub symbols: Vec<String>,
    pub relators: Vec<PresWord>,
    /// First letter index of each vertex's generators.
    vertex_offset: Vec<usize>,
    /// Letter index of the stable letter of each edge, if any.
    stable_letter: Vec<Option<usize>>,
}

fn vertex_symbol(k: usize) -> String {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrsuvwxyz";
    match ALPHABET.get(k) {
        Some(&c) => (c as char).to_string(),
        None => format!("g{k}"),
    }
}

/// Presentation with a breadth-first spanning tree: vertex generators with
/// Cayley-graph relators, one identification per tree-edge generator and
/// `t ω(c) t⁻¹ = α(c)` for each non-tree edge.
pub fn pi1_presentation(g: &GraphOfGroups, basepoint: VertexId) -> Result<Pi1Presentation> {
    if basepoint >= g.vertices().len() {
        return Err(Error::InvalidGraph(format!("no vertex {basepoint}")));
    }
    let tree = g.spanning_tree(basepoint)?;
    let mut letters = Vec::new();
    let mut symbols = Vec::new();
    let mut vertex_offset = Vec::new();
    for (v, vx) in g.vertices().iter().enumerate() {
        vertex_offset.push(letters.len());
        for i in 0..vx.group.generators().len() {
            symbols.push(vertex_symbol(letters.len()));
            letters.push(Letter::Vertex { vertex: v, gen: i });
        }
    }
    let stable = tree.stable_edges();
    let mut stable_letter = vec![None; g.edges().len()];
    for (k, &e) in stable.iter().enumerate() {
        stable_letter[e] = Some(letters.len());
        symbols.push(if stable.len() == 1 {
            "t".to_string()
        } else {
            format!("t{}", k + 1)
        });
        letters.push(Letter::Stable {
            edge: e,
            dir: tree.stable_dir(g, e),
        });
    }
    let elem_word = |v: VertexId, x: Elem| -> PresWord {
        let mut w = PresWord::default();
        for s in g.vertex(v).group.word(x) {
            w.push(vertex_offset[v] + s, 1);
        }
        w
    };
    let mut relators = Vec::new();
    let mut seen = HashSet::new();
    let mut add = |w: PresWord, relators: &mut Vec<PresWord>| {
        if !w.is_empty() && seen.insert(w.cyclic_key()) {
            relators.push(w);
        }
    };
    for (v, vx) in g.vertices().iter().enumerate() {
        let grp = &vx.group;
        for x in grp.elements() {
            for (i, &s) in grp.generators().iter().enumerate() {
                let mut w = elem_word(v, x);
                w.push(vertex_offset[v] + i, 1);
                w.append(&elem_word(v, grp.mul(x, s)).inverse());
                add(w, &mut relators);
            }
        }
    }
    for (e, edge) in g.edges().iter().enumerate() {
        for &c in edge.group.generators() {
            let w = match stable_letter[e] {
                None => {
                    let mut w = elem_word(edge.src, edge.into_src.apply(c));
                    w.append(&elem_word(edge.tgt, edge.into_tgt.apply(c)).inverse());
                    w
                }
                Some(t) => {
                    let y = tree.stable_dir(g, e);
                    let mut w = PresWord::letter(t, 1);
                    w.append(&elem_word(g.terminus(y), g.omega(y).apply(c)));
                    w.push(t, -1);
                    w.append(&elem_word(g.origin(y), g.alpha(y).apply(c)).inverse());
                    w
                }
            };
            add(w, &mut relators);
        }
    }
    Ok(Pi1Presentation {
        basepoint,
        tree,
        letters,
        symbols,
        relators,
        vertex_offset,
        stable_letter,
    })
}

impl Pi1Presentation {
    pub fn generator_count(&self) -> usize {
        self.letters.len()
    }

    /// Letter index of generator `gen` of the group at `v`.
    pub fn vertex_letter(&self, v: VertexId, gen: usize) -> usize {
        self.vertex_offset[v] + gen
    }

    /// Letter index of the stable letter of `e`, `None` for tree edges.
    pub fn stable_letter(&self, e: EdgeId) -> Option<usize> {
        self.stable_letter[e]
    }

    /// The word spelling `x` in the generators of the group at `v`.
    pub fn element_word(&self, g: &GraphOfGroups, v: VertexId, x: Elem) -> PresWord {
        let mut w = PresWord::default();
        for s in g.vertex(v).group.word(x) {
            w.push(self.vertex_offset[v] + s, 1);
        }
        w
    }

    pub fn symbol_index(&self, s: &str) -> Option<usize> {
        self.symbols.iter().position(|x| x == s)
    }

    /// Parses `a b^2 t^-1`; whitespace between tokens is optional and `1`
    /// is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<PresWord> {
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        let mut w = PresWord::default();
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '.' {
                i += 1;
                continue;
            }
            if c == '1' {
                i += 1;
                continue;
            }
            if !c.is_ascii_alphabetic() {
                return Err(Error::MalformedWord(format!(
                    "unexpected `{c}` at offset {i}"
                )));
            }
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let g = self
                .symbol_index(&name)
                .ok_or_else(|| Error::MalformedWord(format!("unknown generator `{name}`")))?;
            let mut k = 1i64;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let es = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let e: String = chars[es..i].iter().collect();
                k = e.parse().map_err(|_| {
                    Error::MalformedWord(format!("bad exponent `{e}` after `{name}`"))
                })?;
            }
            w.push(g, k);
        }
        Ok(w)
    }

    pub fn format_word(&self, w: &PresWord) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.0.iter()
            .map(|&(g, k)| {
                if k == 1 {
                    self.symbols[g].clone()
                } else {
                    format!("{}^{}", self.symbols[g], k)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn tree_path(&self, v: VertexId) -> Word {
        Word::new(
            self.tree.paths[v]
                .iter()
                .map(|&d| Syllable::Edge(d))
                .collect(),
        )
    }

    /// The loop at the basepoint represented by `w`.
    pub fn word_to_loop(&self, g: &GraphOfGroups, w: &PresWord) -> Word {
        let mut out = Word::default();
        for &(l, k) in &w.0 {
            let piece = match self.letters[l] {
                Letter::Vertex { vertex, gen } => {
                    let grp = &g.vertex(vertex).group;
                    let x = grp.pow(grp.generators()[gen], k);
                    let p = self.tree_path(vertex);
                    p.concat(&Word::new(vec![Syllable::Elem { vertex, elem: x }]))
                        .concat(&p.inverse(g))
                }
                Letter::Stable { dir, .. } => {
                    let one = self
                        .tree_path(g.origin(dir))
                        .concat(&Word::new(vec![Syllable::Edge(dir)]))
                        .concat(&self.tree_path(g.terminus(dir)).inverse(g));
                    let unit = if k > 0 { one } else { one.inverse(g) };
                    (0..k.unsigned_abs()).fold(Word::default(), |acc, _| acc.concat(&unit))
                }
            };
            out = out.concat(&piece);
        }
        out
    }

    /// Reads a loop at the basepoint back as a word; tree edges drop out.
    pub fn loop_to_word(&self, g: &GraphOfGroups, w: &Word) -> Result<PresWord> {
        let mut v = self.basepoint;
        let mut out = PresWord::default();
        for s in &w.syllables {
            match *s {
                Syllable::Elem { vertex, elem } => {
                    if vertex != v {
                        return Err(Error::MalformedWord(
                            "element away from the current vertex".into(),
                        ));
                    }
                    for i in g.vertex(v).group.word(elem) {
                        out.push(self.vertex_offset[v] + i, 1);
                    }
                }
                Syllable::Edge(d) => {
                    if g.origin(d) != v {
                        return Err(Error::MalformedWord(
                            "edge does not leave the current vertex".into(),
                        ));
                    }
                    if let Some(t) = self.stable_letter[d.edge] {
                        let Letter::Stable { dir, .. } = self.letters[t] else {
                            unreachable!("stable letters index stable entries")
                        };
                        out.push(t, if dir == d { 1 } else { -1 });
                    }
                    v = g.terminus(d);
                }
            }
        }
        if v != self.basepoint {
            return Err(Error::MalformedWord("path is not closed".into()));
        }
        Ok(out)
    }

    pub fn reduced_to_word(&self, g: &GraphOfGroups, r: &ReducedWord) -> Result<PresWord> {
        self.loop_to_word(g, &r.to_word(g))
    }

    /// Exponent-sum matrix reduced to Smith normal form.
    pub fn abelianization(&self) -> AbelianInvariants {
        let n = self.letters.len();
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0; n];
                for &(g, k) in &r.0 {
                    row[g] += k;
                }
                row
            })
            .collect();
        abelianize(&rows, n)
    }
}

impl fmt::Display for Pi1Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "<{} | {}>", self.symbols.join(", "), rels.join(", "))
    }
}
