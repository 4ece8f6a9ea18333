//! Line-oriented text format for graphs of groups.
//!
//! ```text
//! # comment
//! group S3 perm 3 (1 2) (1 2 3)
//! group Z2 cyclic 2
//! group K table 2 0 1 1 0
//! vertex v1 S3
//! edge e1 v1 v2 group Z2 into_v1 [0 1] into_v2 [(1 2)]
//! basepoint v1
//! ```
//!
//! Permutation generators are separated by whitespace; cycles written
//! next to each other form one generator. An inclusion lists the images
//! of all edge-group elements or of its generators, as element ids or as
//! cycles in the target group's permutation action.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::perm::Perm;

use super::{EdgeSpec, GraphOfGroups, VertexSpec};

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    /// Next whitespace-delimited token and its column.
    fn word(&mut self, what: &str) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && !self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(self.col(), format!("expected {what}")));
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let (w, col) = self.word(&format!("`{kw}`"))?;
        if w != kw {
            return Err(self.err(col, format!("expected `{kw}`, found `{w}`")));
        }
        Ok(())
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let (w, col) = self.word(what)?;
        w.parse()
            .map_err(|_| self.err(col, format!("expected {what}, found `{w}`")))
    }

    /// A run of adjacent `( .. )` groups.
    fn cycles(&mut self) -> Result<(String, usize)> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos] == '(' {
            match self.chars[self.pos..].iter().position(|&c| c == ')') {
                Some(off) => self.pos += off + 1,
                None => return Err(self.err(start + 1, "unclosed cycle")),
            }
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(self.col(), "unexpected trailing input"))
        }
    }
}

#[derive(Debug)]
enum Item {
    Id(Elem),
    Cycles(String, usize, usize),
}

fn bracket_list(c: &mut Cursor) -> Result<Vec<Item>> {
    c.skip_ws();
    if c.chars.get(c.pos) != Some(&'[') {
        return Err(c.err(c.col(), "expected `[`"));
    }
    c.pos += 1;
    let mut items = Vec::new();
    loop {
        while c.pos < c.chars.len() && (c.chars[c.pos].is_whitespace() || c.chars[c.pos] == ',') {
            c.pos += 1;
        }
        match c.chars.get(c.pos) {
            None => return Err(c.err(c.col(), "unclosed `[`")),
            Some(']') => {
                c.pos += 1;
                return Ok(items);
            }
            Some('(') => {
                let (s, col) = c.cycles()?;
                items.push(Item::Cycles(s, c.line, col));
            }
            Some(ch) if ch.is_ascii_digit() => {
                let start = c.pos;
                while c.pos < c.chars.len() && c.chars[c.pos].is_ascii_digit() {
                    c.pos += 1;
                }
                let s: String = c.chars[start..c.pos].iter().collect();
                let id = s
                    .parse()
                    .map_err(|_| c.err(start + 1, format!("bad element id `{s}`")))?;
                items.push(Item::Id(id));
            }
            Some(ch) => return Err(c.err(c.col(), format!("unexpected `{ch}` in image list"))),
        }
    }
}

fn parse_group(c: &mut Cursor, name: &str) -> Result<FiniteGroup> {
    let (kind, col) = c.word("group kind")?;
    let line = c.line;
    let with_pos = |e: Error| match e {
        Error::InvalidGroup { reason, .. } => Error::Syntax {
            line,
            column: col,
            message: format!("group `{name}`: {reason}"),
        },
        other => other,
    };
    let g = match kind.as_str() {
        "perm" => {
            let degree = c.number("degree")?;
            let mut gens = Vec::new();
            while !c.at_end() {
                let (s, col) = c.cycles()?;
                if s.is_empty() {
                    return Err(c.err(c.col(), "expected a cycle"));
                }
                let p = Perm::parse_cycles(&s, degree).map_err(|e| match e {
                    Error::Syntax { message, .. } => c.err(col, message),
                    other => other,
                })?;
                gens.push(p);
            }
            FiniteGroup::from_perm_gens(name, degree, gens)
        }
        "table" => {
            let n = c.number("order")?;
            let mut mul = Vec::with_capacity(n * n);
            for _ in 0..n * n {
                mul.push(c.number("table entry")? as Elem);
            }
            c.finish()?;
            FiniteGroup::from_table(name, n, mul)
        }
        "cyclic" => {
            let n = c.number("order")?;
            c.finish()?;
            if n == 0 {
                return Err(c.err(col, "cyclic group of order 0"));
            }
            Ok(FiniteGroup::cyclic(n).with_name(name))
        }
        "symmetric" => {
            let n = c.number("degree")?;
            c.finish()?;
            Ok(FiniteGroup::symmetric(n.max(1)).with_name(name))
        }
        "dihedral" => {
            let n = c.number("n")?;
            c.finish()?;
            Ok(FiniteGroup::dihedral(n.max(1)).with_name(name))
        }
        "trivial" => {
            c.finish()?;
            Ok(FiniteGroup::trivial().with_name(name))
        }
        other => return Err(c.err(col, format!("unknown group kind `{other}`"))),
    };
    g.map_err(with_pos)
}

struct RawEdge {
    spec: EdgeSpec,
    items: [Vec<Item>; 2],
}

pub fn parse_gog(text: &str) -> Result<GraphOfGroups> {
    let mut groups: Vec<(String, Arc<FiniteGroup>)> = Vec::new();
    let mut vertices = Vec::new();
    let mut raw_edges = Vec::new();
    let mut basepoint: Option<String> = None;
    for (i, full) in text.lines().enumerate() {
        let line = full.split('#').next().unwrap_or("");
        let mut c = Cursor::new(line, i + 1);
        if c.at_end() {
            continue;
        }
        let (kw, col) = c.word("a declaration")?;
        match kw.as_str() {
            "group" => {
                let (name, _) = c.word("group name")?;
                let g = parse_group(&mut c, &name)?;
                groups.push((name, Arc::new(g)));
            }
            "vertex" => {
                let (name, _) = c.word("vertex name")?;
                let (group, _) = c.word("group name")?;
                c.finish()?;
                vertices.push(VertexSpec { name, group });
            }
            "edge" => {
                let (name, _) = c.word("edge name")?;
                let (src, _) = c.word("source vertex")?;
                let (tgt, _) = c.word("target vertex")?;
                c.keyword("group")?;
                let (group, _) = c.word("group name")?;
                c.keyword(&format!("into_{src}"))?;
                let a = bracket_list(&mut c)?;
                c.keyword(&format!("into_{tgt}"))?;
                let b = bracket_list(&mut c)?;
                c.finish()?;
                raw_edges.push(RawEdge {
                    spec: EdgeSpec {
                        name,
                        src,
                        tgt,
                        group,
                        into_src: Vec::new(),
                        into_tgt: Vec::new(),
                    },
                    items: [a, b],
                });
            }
            "basepoint" => {
                let (name, _) = c.word("vertex name")?;
                c.finish()?;
                basepoint = Some(name);
            }
            other => return Err(c.err(col, format!("unknown declaration `{other}`"))),
        }
    }
    let group_of: HashMap<&str, &Arc<FiniteGroup>> =
        groups.iter().map(|(n, g)| (n.as_str(), g)).collect();
    let vertex_group: HashMap<&str, &str> = vertices
        .iter()
        .map(|v: &VertexSpec| (v.name.as_str(), v.group.as_str()))
        .collect();
    let mut edges = Vec::with_capacity(raw_edges.len());
    for raw in raw_edges {
        let mut spec = raw.spec;
        let [a, b] = raw.items;
        let resolve =
            |vertex: &str, items: Vec<Item>| -> Result<Vec<Elem>> {
                items
                    .into_iter()
                    .map(|it| match it {
                        Item::Id(x) => Ok(x),
                        Item::Cycles(s, line, column) => {
                            let target = vertex_group
                                .get(vertex)
                                .and_then(|g| group_of.get(g))
                                .ok_or_else(|| {
                                    Error::InvalidGraph(format!("unknown vertex `{vertex}`"))
                                })?;
                            let degree = target.perm_gens().map(|p| p.degree).ok_or_else(|| {
                                Error::Syntax {
                                    line,
                                    column,
                                    message: format!(
                                        "the group at `{vertex}` has no permutation action"
                                    ),
                                }
                            })?;
                            let p = Perm::parse_cycles(&s, degree).map_err(|e| Error::Syntax {
                                line,
                                column,
                                message: e.to_string(),
                            })?;
                            target.find_perm(&p).ok_or_else(|| Error::Syntax {
                                line,
                                column,
                                message: format!("{p} is not in the group at `{vertex}`"),
                            })
                        }
                    })
                    .collect()
            };
        spec.into_src = resolve(&spec.src, a)?;
        spec.into_tgt = resolve(&spec.tgt, b)?;
        edges.push(spec);
    }
    GraphOfGroups::new(groups, vertices, edges, basepoint.as_deref())
}

/// Text form that [`parse_gog`] reads back to the same graph of groups.
pub fn write_gog(g: &GraphOfGroups) -> String {
    let mut out = String::new();
    for (name, grp) in g.groups() {
        match grp.perm_gens() {
            Some(pg) => {
                let _ = write!(out, "group {name} perm {}", pg.degree);
                for p in &pg.gens {
                    let _ = write!(out, " {p}");
                }
                out.push('\n');
            }
            None => {
                let n = grp.order();
                let _ = write!(out, "group {name} table {n}");
                for a in grp.elements() {
                    for b in grp.elements() {
                        let _ = write!(out, " {}", grp.mul(a, b));
                    }
                }
                out.push('\n');
            }
        }
    }
    let (vs, es) = g.specs();
    for v in &vs {
        let _ = writeln!(out, "vertex {} {}", v.name, v.group);
    }
    let list = |xs: &[Elem]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    for e in &es {
        let _ = writeln!(
            out,
            "edge {} {} {} group {} into_{} [{}] into_{} [{}]",
            e.name,
            e.src,
            e.tgt,
            e.group,
            e.src,
            list(&e.into_src),
            e.tgt,
            list(&e.into_tgt)
        );
    }
    let _ = writeln!(out, "basepoint {}", g.vertex(g.basepoint()).name);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEGMENT: &str = "\
# Z2 * Z3
group Z2 perm 2 (1 2)
group Z3 perm 3 (1 2 3)
group 1 trivial
vertex v1 Z2
vertex v2 Z3
edge e v1 v2 group 1 into_v1 [0] into_v2 [0]
";

    #[test]
    fn parses_a_segment() {
        let g = parse_gog(SEGMENT).unwrap();
        assert_eq!((g.vertices().len(), g.edges().len()), (2, 1));
        assert_eq!(g.vertex(1).group.order(), 3);
    }

    #[test]
    fn parses_an_hnn_loop_with_cycle_images() {
        let text = "group G perm 4 (1 2 3 4)\ngroup A perm 2 (1 2)\nvertex v G\nedge t v v group A into_v [(1 3)(2 4)] into_v [(1 3)(2 4)]\n";
        let g = parse_gog(text).unwrap();
        assert_eq!(g.edge(0).into_src.apply(1), 2);
        assert_eq!(g.edge(0).src, g.edge(0).tgt);
    }

    #[test]
    fn adjacent_cycles_form_one_generator() {
        let g = parse_gog("group K perm 4 (1 2)(3 4) (1 3)(2 4)\nvertex v K\n").unwrap();
        assert_eq!(g.vertex(0).group.order(), 4);
        assert_eq!(g.vertex(0).group.perm_gens().unwrap().gens.len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let bad =
            "group Z2 perm 2 (1 2)\nvertex v Z2\nedge e v v group Z2 into_v [0 1 into_v [0 1]\n";
        match parse_gog(bad) {
            Err(Error::Syntax { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_gog("group Z2 perm 2 (1 3)\n") {
            Err(Error::Syntax {
                line: 1,
                column: 17,
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match parse_gog("vertex v G\n  frob x\n") {
            Err(Error::UnknownGroupRef(_)) => panic!("line 2 should fail first"),
            Err(Error::Syntax {
                line: 2, column: 3, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_gog("vertex v G\n"),
            Err(Error::UnknownGroupRef(_))
        ));
        let collapse = "group Z2 cyclic 2\ngroup 1 trivial\nvertex u 1\nvertex w Z2\nedge e u w group Z2 into_u [0 0] into_w [0 1]\n";
        assert!(matches!(
            parse_gog(collapse),
            Err(Error::NonInjectiveInclusion { .. })
        ));
    }

    #[test]
    fn write_then_parse_is_stable() {
        let g = parse_gog(SEGMENT).unwrap();
        let text = write_gog(&g);
        let again = write_gog(&parse_gog(&text).unwrap());
        assert_eq!(text, again);
        let t = "group Q table 2 0 1 1 0\nvertex v Q\nedge l v v group Q into_v [1] into_v [1]\nbasepoint v\n";
        let g = parse_gog(t).unwrap();
        assert_eq!(write_gog(&g), "group Q table 2 0 1 1 0\nvertex v Q\nedge l v v group Q into_v [0 1] into_v [0 1]\nbasepoint v\n");
    }
}
