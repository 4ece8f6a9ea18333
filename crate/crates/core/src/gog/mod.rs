//! Finite graphs of groups.
//!
//! Every edge carries a fixed orientation `src -> tgt` and two injective
//! homomorphisms from its group into the endpoint groups. Loops and
//! multiple edges are allowed.

mod dsl;
mod inertia;
mod presentation;
mod tree;
mod word;

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupHom};

pub use dsl::{parse_gog, write_gog};
pub use inertia::{
    coarse_graph, inertia_gog, omega_injectivity_certificate, CoarseGraph, OmegaReport, VertexCheck,
};
pub use presentation::{pi1_presentation, Letter, Pi1Presentation, PresWord};
pub use tree::{ball_cap, bass_serre_ball, BallVertex, TreeBall, DEFAULT_BALL_CAP};
pub use word::{
    reduce_word, syllable_length, words_equal, ReducedWord, Syllable, TransversalTables, Word,
};

pub type VertexId = usize;
pub type EdgeId = usize;

/// An edge traversed in a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dir {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Dir {
    pub fn reverse(self) -> Dir {
        Dir {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSpec {
    pub name: String,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub name: String,
    pub src: String,
    pub tgt: String,
    pub group: String,
    /// Images of every edge-group element, or of its generators only.
    pub into_src: Vec<Elem>,
    pub into_tgt: Vec<Elem>,
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub name: String,
    pub group: Arc<FiniteGroup>,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub tgt: VertexId,
    pub group: Arc<FiniteGroup>,
    pub into_src: GroupHom,
    pub into_tgt: GroupHom,
}

#[derive(Debug, Clone)]
pub struct GraphOfGroups {
    groups: Vec<(String, Arc<FiniteGroup>)>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_groups: Vec<usize>,
    edge_groups: Vec<usize>,
    basepoint: VertexId,
    tables: OnceLock<TransversalTables>,
}

impl GraphOfGroups {
    /// Resolves names and checks every inclusion. The basepoint defaults to
    /// the first vertex.
    pub fn new(
        groups: Vec<(String, Arc<FiniteGroup>)>,
        vertices: Vec<VertexSpec>,
        edges: Vec<EdgeSpec>,
        basepoint: Option<&str>,
    ) -> Result<Self> {
        let mut group_index = HashMap::new();
        for (i, (name, _)) in groups.iter().enumerate() {
            if group_index.insert(name.as_str(), i).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "group `{name}` declared twice"
                )));
            }
        }
        let lookup = |name: &str| {
            group_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownGroupRef(name.to_string()))
        };
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut vertex_index = HashMap::new();
        let mut vs = Vec::with_capacity(vertices.len());
        let mut vertex_groups = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.name.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "vertex `{}` declared twice",
                    v.name
                )));
            }
            let gi = lookup(&v.group)?;
            vertex_groups.push(gi);
            vs.push(Vertex {
                name: v.name.clone(),
                group: Arc::clone(&groups[gi].1),
            });
        }
        let vertex = |name: &str| {
            vertex_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{name}`")))
        };
        let mut es = Vec::with_capacity(edges.len());
        let mut edge_groups = Vec::with_capacity(edges.len());
        let mut edge_names = HashMap::new();
        for e in &edges {
            if edge_names.insert(e.name.clone(), ()).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "edge `{}` declared twice",
                    e.name
                )));
            }
            let (s, t) = (vertex(&e.src)?, vertex(&e.tgt)?);
            let gi = lookup(&e.group)?;
            edge_groups.push(gi);
            let ge = &groups[gi].1;
            let into = |v: VertexId, images: &[Elem]| -> Result<GroupHom> {
                let target = &vs[v].group;
                let full = resolve_images(ge, target, images).ok_or_else(|| {
                    Error::NotAHomomorphism(format!(
                        "inclusion of edge `{}` into `{}` does not extend to a homomorphism",
                        e.name, vs[v].name
                    ))
                })?;
                let hom = GroupHom::new(Arc::clone(ge), Arc::clone(target), full)?;
                if !hom.is_injective() {
                    return Err(Error::NonInjectiveInclusion {
                        edge: e.name.clone(),
                        vertex: vs[v].name.clone(),
                    });
                }
                Ok(hom)
            };
            let into_src = into(s, &e.into_src)?;
            let into_tgt = into(t, &e.into_tgt)?;
            es.push(Edge {
                name: e.name.clone(),
                src: s,
                tgt: t,
                group: Arc::clone(ge),
                into_src,
                into_tgt,
            });
        }
        let basepoint = match basepoint {
            Some(b) => vertex(b)?,
            None => 0,
        };
        Ok(GraphOfGroups {
            groups,
            vertices: vs,
            edges: es,
            vertex_groups,
            edge_groups,
            basepoint,
            tables: OnceLock::new(),
        })
    }

    /// Segment `g1 <- a -> g2`; the inclusions are given as full image lists.
    pub fn segment(
        g1: FiniteGroup,
        g2: FiniteGroup,
        a: FiniteGroup,
        into1: Vec<Elem>,
        into2: Vec<Elem>,
    ) -> Result<Self> {
        let groups = vec![
            ("G1".to_string(), Arc::new(g1)),
            ("G2".to_string(), Arc::new(g2)),
            ("A".to_string(), Arc::new(a)),
        ];
        Self::new(
            groups,
            vec![
                VertexSpec {
                    name: "v1".into(),
                    group: "G1".into(),
                },
                VertexSpec {
                    name: "v2".into(),
                    group: "G2".into(),
                },
            ],
            vec![EdgeSpec {
                name: "e".into(),
                src: "v1".into(),
                tgt: "v2".into(),
                group: "A".into(),
                into_src: into1,
                into_tgt: into2,
            }],
            None,
        )
    }

    /// Segment `Z_m <- Z_d -> Z_n` with the standard inclusions; `d` must divide both.
    pub fn cyclic_segment(m: usize, n: usize, d: usize) -> Result<Self> {
        if d == 0 || !m.is_multiple_of(d) || !n.is_multiple_of(d) {
            return Err(Error::InvalidGraph(format!(
                "{d} does not divide both {m} and {n}"
            )));
        }
        let (sm, sn) = ((m / d) as Elem, (n / d) as Elem);
        Self::segment(
            FiniteGroup::cyclic(m),
            FiniteGroup::cyclic(n),
            FiniteGroup::cyclic(d),
            (0..d as Elem).map(|k| k * sm).collect(),
            (0..d as Elem).map(|k| k * sn).collect(),
        )
    }

    /// One vertex `g` with a loop of group `a`; `into_first` is the
    /// identified side and `into_second` the conjugated side.
    pub fn hnn(
        g: FiniteGroup,
        a: FiniteGroup,
        into_first: Vec<Elem>,
        into_second: Vec<Elem>,
    ) -> Result<Self> {
        Self::new(
            vec![("G".into(), Arc::new(g)), ("A".into(), Arc::new(a))],
            vec![VertexSpec {
                name: "v".into(),
                group: "G".into(),
            }],
            vec![EdgeSpec {
                name: "t".into(),
                src: "v".into(),
                tgt: "v".into(),
                group: "A".into(),
                into_src: into_first,
                into_tgt: into_second,
            }],
            None,
        )
    }

    pub fn groups(&self) -> &[(String, Arc<FiniteGroup>)] {
        &self.groups
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_group_name(&self, v: VertexId) -> &str {
        &self.groups[self.vertex_groups[v]].0
    }

    pub fn edge_group_name(&self, e: EdgeId) -> &str {
        &self.groups[self.edge_groups[e]].0
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    pub fn with_basepoint(mut self, v: VertexId) -> Result<Self> {
        if v >= self.vertices.len() {
            return Err(Error::InvalidGraph(format!("no vertex {v}")));
        }
        self.basepoint = v;
        Ok(self)
    }

    pub fn origin(&self, d: Dir) -> VertexId {
        let e = &self.edges[d.edge];
        if d.forward {
            e.src
        } else {
            e.tgt
        }
    }

    pub fn terminus(&self, d: Dir) -> VertexId {
        self.origin(d.reverse())
    }

    /// Inclusion of the edge group at the origin of `d`.
    pub fn alpha(&self, d: Dir) -> &GroupHom {
        let e = &self.edges[d.edge];
        if d.forward {
            &e.into_src
        } else {
            &e.into_tgt
        }
    }

    /// Inclusion of the edge group at the terminus of `d`.
    pub fn omega(&self, d: Dir) -> &GroupHom {
        self.alpha(d.reverse())
    }

    /// Oriented edges leaving `v`, by edge id, forward before backward.
    pub fn dirs_from(&self, v: VertexId) -> Vec<Dir> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.src == v {
                out.push(Dir {
                    edge: i,
                    forward: true,
                });
            }
            if e.tgt == v {
                out.push(Dir {
                    edge: i,
                    forward: false,
                });
            }
        }
        out
    }

    pub fn tables(&self) -> &TransversalTables {
        self.tables.get_or_init(|| TransversalTables::new(self))
    }

    /// Breadth-first spanning tree from `root`, edges in input order.
    pub fn spanning_tree(&self, root: VertexId) -> Result<SpanningTree> {
        let n = self.vertices.len();
        let mut order = vec![usize::MAX; n];
        let mut parent: Vec<Option<Dir>> = vec![None; n];
        let mut in_tree = vec![false; self.edges.len()];
        order[root] = 0;
        let mut next = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for d in self.dirs_from(u) {
                let w = self.terminus(d);
                if order[w] == usize::MAX {
                    order[w] = next;
                    next += 1;
                    parent[w] = Some(d);
                    in_tree[d.edge] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = (0..n).find(|&v| order[v] == usize::MAX) {
            return Err(Error::DisconnectedGraph(self.vertices[v].name.clone()));
        }
        // paths from the root
        let mut paths: Vec<Vec<Dir>> = vec![Vec::new(); n];
        let mut by_order: Vec<VertexId> = (0..n).collect();
        by_order.sort_by_key(|&v| order[v]);
        for &v in &by_order {
            if let Some(d) = parent[v] {
                let mut p = paths[self.origin(d)].clone();
                p.push(d);
                paths[v] = p;
            }
        }
        Ok(SpanningTree {
            root,
            order,
            in_tree,
            paths,
        })
    }

    /// `Σ_v 1/|G_v| - Σ_e 1/|G_e|`.
    pub fn euler_characteristic(&self) -> Ratio<i64> {
        let v: Ratio<i64> = self
            .vertices
            .iter()
            .map(|v| Ratio::new(1, v.group.order() as i64))
            .sum();
        let e: Ratio<i64> = self
            .edges
            .iter()
            .map(|e| Ratio::new(1, e.group.order() as i64))
            .sum();
        v - e
    }

    /// Vertex and edge specs as declared, for serialization.
    pub fn specs(&self) -> (Vec<VertexSpec>, Vec<EdgeSpec>) {
        let vs = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| VertexSpec {
                name: v.name.clone(),
                group: self.vertex_group_name(i).to_string(),
            })
            .collect();
        let es = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeSpec {
                name: e.name.clone(),
                src: self.vertices[e.src].name.clone(),
                tgt: self.vertices[e.tgt].name.clone(),
                group: self.edge_group_name(i).to_string(),
                into_src: e.into_src.images().to_vec(),
                into_tgt: e.into_tgt.images().to_vec(),
            })
            .collect();
        (vs, es)
    }

    /// Number of independent cycles of the underlying graph.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }
}

/// A spanning tree with root paths.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub root: VertexId,
    /// Breadth-first discovery index of each vertex.
    pub order: Vec<usize>,
    pub in_tree: Vec<bool>,
    /// Oriented tree path from the root to each vertex.
    pub paths: Vec<Vec<Dir>>,
}

impl SpanningTree {
    /// Orientation of a stable letter: from the endpoint discovered first.
    pub fn stable_dir(&self, g: &GraphOfGroups, e: EdgeId) -> Dir {
        let edge = g.edge(e);
        Dir {
            edge: e,
            forward: self.order[edge.src] <= self.order[edge.tgt],
        }
    }

    pub fn stable_edges(&self) -> Vec<EdgeId> {
        (0..self.in_tree.len())
            .filter(|&e| !self.in_tree[e])
            .collect()
    }
}

/// Full image list from either all images or generator images.
fn resolve_images(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    images: &[Elem],
) -> Option<Vec<Elem>> {
    if images.iter().any(|&x| x as usize >= codomain.order()) {
        return None;
    }
    if images.len() == domain.order() {
        return Some(images.to_vec());
    }
    if images.len() == domain.generators().len() {
        return crate::group::extend_generator_images(domain, codomain, images);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_and_hnn_validate() {
        let g = GraphOfGroups::cyclic_segment(2, 3, 1).unwrap();
        assert_eq!((g.vertices().len(), g.edges().len()), (2, 1));
        assert_eq!(g.euler_characteristic(), Ratio::new(-1, 6));
        let h = GraphOfGroups::hnn(
            FiniteGroup::cyclic(4),
            FiniteGroup::cyclic(2),
            vec![0, 2],
            vec![0, 2],
        )
        .unwrap();
        assert_eq!(h.betti_number(), 1);
    }

    #[test]
    fn rejects_non_injective_inclusion() {
        let err = GraphOfGroups::segment(
            FiniteGroup::trivial(),
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(2),
            vec![0, 0],
            vec![0, 1],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonInjectiveInclusion { .. }));
    }

    #[test]
    fn rejects_unknown_group_and_disconnected_graph() {
        let err = GraphOfGroups::new(
            vec![],
            vec![VertexSpec {
                name: "v".into(),
                group: "G".into(),
            }],
            vec![],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownGroupRef(ref g) if g == "G"));
        let g = GraphOfGroups::new(
            vec![("1".into(), Arc::new(FiniteGroup::trivial()))],
            vec![
                VertexSpec {
                    name: "u".into(),
                    group: "1".into(),
                },
                VertexSpec {
                    name: "w".into(),
                    group: "1".into(),
                },
            ],
            vec![],
            None,
        )
        .unwrap();
        assert!(matches!(g.spanning_tree(0), Err(Error::DisconnectedGraph(ref v)) if v == "w"));
    }

    #[test]
    fn spanning_tree_is_breadth_first() {
        let one = Arc::new(FiniteGroup::trivial());
        let v = |n: &str| VertexSpec {
            name: n.into(),
            group: "1".into(),
        };
        let e = |n: &str, s: &str, t: &str| EdgeSpec {
            name: n.into(),
            src: s.into(),
            tgt: t.into(),
            group: "1".into(),
            into_src: vec![0],
            into_tgt: vec![0],
        };
        let g = GraphOfGroups::new(
            vec![("1".into(), one)],
            vec![v("a"), v("b"), v("c")],
            vec![e("x", "b", "a"), e("y", "b", "c"), e("z", "c", "a")],
            None,
        )
        .unwrap();
        let t = g.spanning_tree(0).unwrap();
        assert_eq!(t.in_tree, vec![true, false, true]);
        assert_eq!(
            t.paths[1],
            vec![Dir {
                edge: 0,
                forward: false
            }]
        );
        // y runs from b (order 1) to c (order 2)
        assert_eq!(
            t.stable_dir(&g, 1),
            Dir {
                edge: 1,
                forward: true
            }
        );
    }
}
