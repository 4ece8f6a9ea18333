//! Inertia graph of groups, the injectivity certificate and the coarse graph.

use std::sync::Arc;

use crate::error::Result;
use crate::group::{Elem, FiniteGroup};

use super::word::{ReducedWord, Syllable, Word};
use super::{EdgeSpec, GraphOfGroups, VertexId, VertexSpec};

/// One vertex `v[g]` per conjugacy class of each `G_v` carrying the
/// centralizer of the least representative `g`, one edge `e[h]` per class
/// of each `G_e`. The edge `e[h]` runs from the class containing
/// `into_src(h)` to the class containing `into_tgt(h)`, and includes its
/// centralizer by `a ↦ x i(a) x⁻¹` with `x` the least element such that
/// `x i(h) x⁻¹ = g`.
pub fn inertia_gog(g: &GraphOfGroups) -> Result<GraphOfGroups> {
    let mut groups = Vec::new();
    let mut vertices = Vec::new();
    // per vertex: class index of each element, and (rep, centralizer) per class
    let mut vclass: Vec<Vec<usize>> = Vec::new();
    let mut vcent = Vec::new();
    for v in g.vertices() {
        let grp = &v.group;
        let classes = grp.conjugacy_classes();
        let mut class_of = vec![0; grp.order()];
        let mut cents = Vec::new();
        for (k, class) in classes.iter().enumerate() {
            for &x in class {
                class_of[x as usize] = k;
            }
            let rep = class[0];
            let name = format!("{}[{}]", v.name, rep);
            let c = grp.subgroup(&format!("C_{name}"), &grp.centralizer(rep))?;
            groups.push((format!("C_{name}"), Arc::clone(&c.group)));
            vertices.push(VertexSpec {
                name: name.clone(),
                group: format!("C_{name}"),
            });
            cents.push((name, rep, c));
        }
        vclass.push(class_of);
        vcent.push(cents);
    }
    let mut edges = Vec::new();
    for e in g.edges() {
        let ge = &e.group;
        for class in ge.conjugacy_classes() {
            let h = class[0];
            let name = format!("{}[{}]", e.name, h);
            let ce = ge.subgroup(&format!("C_{name}"), &ge.centralizer(h))?;
            groups.push((format!("C_{name}"), Arc::clone(&ce.group)));
            let side = |vid: VertexId, incl: &crate::group::GroupHom| {
                let grp: &FiniteGroup = &g.vertex(vid).group;
                let image = incl.apply(h);
                let (vname, rep, cv) = &vcent[vid][vclass[vid][image as usize]];
                let x = grp
                    .elements()
                    .find(|&x| grp.conj(x, image) == *rep)
                    .expect("same class");
                let images: Vec<Elem> = ce
                    .embedding
                    .iter()
                    .map(|&a| {
                        cv.local_id(grp.conj(x, incl.apply(a)))
                            .expect("centralizers correspond")
                    })
                    .collect();
                (vname.clone(), images)
            };
            let (src, into_src) = side(e.src, &e.into_src);
            let (tgt, into_tgt) = side(e.tgt, &e.into_tgt);
            edges.push(EdgeSpec {
                name,
                src,
                tgt,
                group: format!("C_{}[{}]", e.name, h),
                into_src,
                into_tgt,
            });
        }
    }
    let base = g.vertex(g.basepoint()).name.clone();
    GraphOfGroups::new(groups, vertices, edges, Some(&format!("{base}[0]")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCheck {
    pub vertex: String,
    /// Nontrivial elements whose loops reduced to a nontrivial normal form.
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaReport {
    pub vertices: Vec<VertexCheck>,
    /// First `(vertex, element)` whose loop reduced to the identity.
    pub counterexample: Option<(String, Elem)>,
}

impl OmegaReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn total_checked(&self) -> usize {
        self.vertices.iter().map(|v| v.checked).sum()
    }
}

/// Reduces `P_v a P_v⁻¹` for every vertex `v` and every `a ≠ e` in `G_v`,
/// `P_v` the spanning-tree path from the basepoint.
pub fn omega_injectivity_certificate(g: &GraphOfGroups) -> Result<OmegaReport> {
    let tree = g.spanning_tree(g.basepoint())?;
    let tables = g.tables();
    let mut report = OmegaReport {
        vertices: Vec::new(),
        counterexample: None,
    };
    for (v, vx) in g.vertices().iter().enumerate() {
        let path = Word::new(tree.paths[v].iter().map(|&d| Syllable::Edge(d)).collect());
        let back = path.inverse(g);
        let mut checked = 0;
        for a in vx.group.elements().skip(1) {
            let w = path
                .concat(&Word::new(vec![Syllable::Elem { vertex: v, elem: a }]))
                .concat(&back);
            let r = ReducedWord::from_path(g, tables, g.basepoint(), &w)?;
            if r.is_identity() {
                report.counterexample = Some((vx.name.clone(), a));
                report.vertices.push(VertexCheck {
                    vertex: vx.name.clone(),
                    checked,
                });
                return Ok(report);
            }
            checked += 1;
        }
        report.vertices.push(VertexCheck {
            vertex: vx.name.clone(),
            checked,
        });
    }
    Ok(report)
}

/// The underlying graph with group orders kept as labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseGraph {
    /// `(name, |G_v|)`.
    pub vertices: Vec<(String, usize)>,
    /// `(name, src, tgt, |G_e|)`.
    pub edges: Vec<(String, usize, usize, usize)>,
}

pub fn coarse_graph(g: &GraphOfGroups) -> CoarseGraph {
    CoarseGraph {
        vertices: g
            .vertices()
            .iter()
            .map(|v| (v.name.clone(), v.group.order()))
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| (e.name.clone(), e.src, e.tgt, e.group.order()))
            .collect(),
    }
}
