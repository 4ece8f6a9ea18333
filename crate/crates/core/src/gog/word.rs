//! Normal forms in the fundamental group of a graph of groups.
//!
//! A path is `g0 y1 g1 y2 ... yn gn` with `gi` in the group at the `i`-th
//! vertex and `yi` oriented edges. Each `y` satisfies `α_y(a) y = y ω_y(a)`
//! where `α_y`, `ω_y` include the edge group at the origin and terminus.
//! The normal form writes every `gi` except the last as a left coset
//! representative of `α_{y(i+1)}(G_e)` and pushes the rest across the edge.
//! A form is reduced when no `y ȳ` appears with the identity between them.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::Elem;

use super::{Dir, GraphOfGroups, VertexId};

/// Left coset data for one edge end.
#[derive(Debug, Clone)]
pub struct EndTable {
    /// `rep[g]` is the least element of `g · image`.
    pub rep: Vec<Elem>,
    /// Edge-group preimage of each vertex element in the image.
    pub preimage: Vec<Option<Elem>>,
    /// Distinct representatives, increasing; `0` comes first.
    pub reps: Vec<Elem>,
}

/// Transversals for both ends of every edge, fixed once per graph of groups.
#[derive(Debug, Clone)]
pub struct TransversalTables {
    ends: Vec<[EndTable; 2]>,
}

impl TransversalTables {
    pub fn new(g: &GraphOfGroups) -> Self {
        let ends = (0..g.edges().len())
            .map(|e| {
                let fwd = Dir {
                    edge: e,
                    forward: true,
                };
                [Self::end(g, fwd), Self::end(g, fwd.reverse())]
            })
            .collect();
        TransversalTables { ends }
    }

    fn end(g: &GraphOfGroups, d: Dir) -> EndTable {
        let hom = g.alpha(d);
        let vg = &g.vertex(g.origin(d)).group;
        let n = vg.order();
        let mut preimage = vec![None; n];
        for a in hom.domain.elements() {
            preimage[hom.apply(a) as usize] = Some(a);
        }
        let image = hom.image_set();
        let mut rep = vec![Elem::MAX; n];
        let mut reps = Vec::new();
        for x in vg.elements() {
            if rep[x as usize] != Elem::MAX {
                continue;
            }
            reps.push(x);
            for &h in &image {
                rep[vg.mul(x, h) as usize] = x;
            }
        }
        EndTable {
            rep,
            preimage,
            reps,
        }
    }

    /// Table for the origin end of `d`.
    pub fn at_origin(&self, d: Dir) -> &EndTable {
        &self.ends[d.edge][usize::from(!d.forward)]
    }

    /// `x = rep · α_d(a)`, returned as `(rep, a)`.
    pub fn factor(&self, g: &GraphOfGroups, d: Dir, x: Elem) -> (Elem, Elem) {
        let t = self.at_origin(d);
        let vg = &g.vertex(g.origin(d)).group;
        let r = t.rep[x as usize];
        let a = t.preimage[vg.mul(vg.inv(r), x) as usize].expect("coset factorization");
        (r, a)
    }

    /// Index `[G_v : α_d(G_e)]`.
    pub fn index(&self, d: Dir) -> usize {
        self.at_origin(d).reps.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Syllable {
    Elem { vertex: VertexId, elem: Elem },
    Edge(Dir),
}

/// A path in the graph of groups, read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Word {
    pub syllables: Vec<Syllable>,
}

impl Word {
    pub fn new(syllables: Vec<Syllable>) -> Self {
        Word { syllables }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut s = self.syllables.clone();
        s.extend_from_slice(&other.syllables);
        Word { syllables: s }
    }

    /// The reverse path with inverted elements.
    pub fn inverse(&self, g: &GraphOfGroups) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| match *s {
                    Syllable::Elem { vertex, elem } => Syllable::Elem {
                        vertex,
                        elem: g.vertex(vertex).group.inv(elem),
                    },
                    Syllable::Edge(d) => Syllable::Edge(d.reverse()),
                })
                .collect(),
        }
    }

    /// Parses `v:3 e+ w:1 e-`: `vertex:element` and `edge+` / `edge-`.
    pub fn parse(g: &GraphOfGroups, text: &str) -> Result<Word> {
        let mut syllables = Vec::new();
        for tok in text.split_whitespace() {
            if let Some((v, x)) = tok.split_once(':') {
                let vertex = g
                    .vertex_id(v)
                    .ok_or_else(|| Error::MalformedWord(format!("unknown vertex `{v}`")))?;
                let elem: Elem = x
                    .parse()
                    .map_err(|_| Error::MalformedWord(format!("bad element `{x}`")))?;
                if elem as usize >= g.vertex(vertex).group.order() {
                    return Err(Error::MalformedWord(format!(
                        "element {elem} not in the group at `{v}`"
                    )));
                }
                syllables.push(Syllable::Elem { vertex, elem });
            } else {
                let (name, forward) = match tok.strip_suffix('+') {
                    Some(n) => (n, true),
                    None => match tok.strip_suffix('-') {
                        Some(n) => (n, false),
                        None => return Err(Error::MalformedWord(format!("bad syllable `{tok}`"))),
                    },
                };
                let edge = g
                    .edge_id(name)
                    .ok_or_else(|| Error::MalformedWord(format!("unknown edge `{name}`")))?;
                syllables.push(Syllable::Edge(Dir { edge, forward }));
            }
        }
        Ok(Word { syllables })
    }

    pub fn display<'a>(&'a self, g: &'a GraphOfGroups) -> impl fmt::Display + 'a {
        WordDisplay { g, word: self }
    }
}

struct WordDisplay<'a> {
    g: &'a GraphOfGroups,
    word: &'a Word,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match *s {
                Syllable::Elem { vertex, elem } => {
                    write!(f, "{}:{}", self.g.vertex(vertex).name, elem)?
                }
                Syllable::Edge(d) => write!(
                    f,
                    "{}{}",
                    self.g.edge(d.edge).name,
                    if d.forward { '+' } else { '-' }
                )?,
            }
        }
        Ok(())
    }
}

/// `s0 y1 s1 ... yn tail` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    pub start: VertexId,
    /// `(si, y(i+1))`: a coset representative and the edge after it.
    pub pairs: Vec<(Elem, Dir)>,
    pub tail: Elem,
}

impl ReducedWord {
    pub fn identity(start: VertexId) -> Self {
        ReducedWord {
            start,
            pairs: Vec::new(),
            tail: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.is_empty() && self.tail == 0
    }

    pub fn end(&self, g: &GraphOfGroups) -> VertexId {
        self.pairs
            .last()
            .map_or(self.start, |&(_, d)| g.terminus(d))
    }

    /// Back to a path, omitting identity elements.
    pub fn to_word(&self, g: &GraphOfGroups) -> Word {
        let mut syllables = Vec::new();
        let mut v = self.start;
        for &(s, d) in &self.pairs {
            if s != 0 {
                syllables.push(Syllable::Elem { vertex: v, elem: s });
            }
            syllables.push(Syllable::Edge(d));
            v = g.terminus(d);
        }
        if self.tail != 0 {
            syllables.push(Syllable::Elem {
                vertex: v,
                elem: self.tail,
            });
        }
        Word { syllables }
    }

    /// Multiplies on the right by an element of the current vertex group.
    pub fn push_elem(&mut self, g: &GraphOfGroups, vertex: VertexId, elem: Elem) -> Result<()> {
        let v = self.end(g);
        if v != vertex {
            return Err(Error::MalformedWord(format!(
                "element of `{}` used at `{}`",
                g.vertex(vertex).name,
                g.vertex(v).name
            )));
        }
        self.tail = g.vertex(v).group.mul(self.tail, elem);
        Ok(())
    }

    /// Appends an edge and restores the normal form.
    pub fn push_edge(
        &mut self,
        g: &GraphOfGroups,
        tables: &TransversalTables,
        d: Dir,
    ) -> Result<()> {
        let v = self.end(g);
        if g.origin(d) != v {
            return Err(Error::MalformedWord(format!(
                "edge `{}` does not leave `{}`",
                g.edge(d.edge).name,
                g.vertex(v).name
            )));
        }
        let (r, a) = tables.factor(g, d, self.tail);
        match self.pairs.last() {
            Some(&(s, last)) if r == 0 && last == d.reverse() => {
                // y ω_y(a) ȳ = α_y(a)
                self.pairs.pop();
                let vg = &g.vertex(g.origin(last)).group;
                self.tail = vg.mul(s, g.alpha(last).apply(a));
            }
            _ => {
                self.pairs.push((r, d));
                self.tail = g.omega(d).apply(a);
            }
        }
        Ok(())
    }

    pub fn push(
        &mut self,
        g: &GraphOfGroups,
        tables: &TransversalTables,
        s: Syllable,
    ) -> Result<()> {
        match s {
            Syllable::Elem { vertex, elem } => self.push_elem(g, vertex, elem),
            Syllable::Edge(d) => self.push_edge(g, tables, d),
        }
    }

    /// Reduces a path starting at `start`, not necessarily closed.
    pub fn from_path(
        g: &GraphOfGroups,
        tables: &TransversalTables,
        start: VertexId,
        w: &Word,
    ) -> Result<Self> {
        let mut r = ReducedWord::identity(start);
        for &s in &w.syllables {
            r.push(g, tables, s)?;
        }
        Ok(r)
    }
}

/// Normal form of a loop at the basepoint.
pub fn reduce_word(g: &GraphOfGroups, tables: &TransversalTables, w: &Word) -> Result<ReducedWord> {
    let base = g.basepoint();
    let r = ReducedWord::from_path(g, tables, base, w)?;
    if r.end(g) != base {
        return Err(Error::MalformedWord(format!(
            "path ends at `{}`, not at the basepoint `{}`",
            g.vertex(r.end(g)).name,
            g.vertex(base).name
        )));
    }
    Ok(r)
}

pub fn words_equal(
    g: &GraphOfGroups,
    tables: &TransversalTables,
    w1: &Word,
    w2: &Word,
) -> Result<bool> {
    Ok(reduce_word(g, tables, w1)? == reduce_word(g, tables, w2)?)
}

/// Number of edges in the normal form.
pub fn syllable_length(r: &ReducedWord) -> usize {
    r.pairs.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn dinfty() -> GraphOfGroups {
        GraphOfGroups::segment(
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(2),
            FiniteGroup::trivial(),
            vec![0],
            vec![0],
        )
        .unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let g = dinfty();
        assert!(reduce_word(&g, g.tables(), &Word::default())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn pinches_cancel() {
        let g = dinfty();
        let w = Word::parse(&g, "v1:1 v1:1 e+ v2:1 e-").unwrap();
        let r = reduce_word(&g, g.tables(), &w).unwrap();
        assert_eq!(r.to_word(&g).display(&g).to_string(), "e+ v2:1 e-");
        let w = Word::parse(&g, "e+ e- v1:1 e+ e-").unwrap();
        assert_eq!(
            reduce_word(&g, g.tables(), &w)
                .unwrap()
                .to_word(&g)
                .display(&g)
                .to_string(),
            "v1:1"
        );
    }

    #[test]
    fn rejects_broken_paths() {
        let g = dinfty();
        assert!(reduce_word(&g, g.tables(), &Word::parse(&g, "e+").unwrap()).is_err());
        assert!(reduce_word(&g, g.tables(), &Word::parse(&g, "v2:1").unwrap()).is_err());
        assert!(Word::parse(&g, "v3:0").is_err());
        assert!(Word::parse(&g, "e").is_err());
    }

    #[test]
    fn edge_group_elements_slide_across() {
        // Z4 <- Z2 -> Z4, the square of the generator slides to the other side
        let g = GraphOfGroups::cyclic_segment(4, 4, 2).unwrap();
        let w = Word::parse(&g, "v1:2 e+ e-").unwrap();
        let r = reduce_word(&g, g.tables(), &w).unwrap();
        assert_eq!(
            r,
            ReducedWord {
                start: 0,
                pairs: vec![],
                tail: 2
            }
        );
        let w = Word::parse(&g, "v1:3 e+ v2:1 e-").unwrap();
        let r = reduce_word(&g, g.tables(), &w).unwrap();
        // 3 = 1 + 2 and 2 crosses to become 2 in v2, then 2 + 1 = 3 stays
        assert_eq!(r.pairs.len(), 2);
        assert_eq!(r.pairs[0].0, 1);
        assert_eq!(r.pairs[1].0, 1);
    }
}
