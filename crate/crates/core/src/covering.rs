//! Finite covers of graphs of groups and their monodromy.
//!
//! A π₁-set is a right action on `{0, .., n-1}`: the word `x1 x2 .. xk`
//! sends `p` to `p·x1·x2·..·xk`. The fiber over a vertex `v` is identified
//! with the fiber over the basepoint by lifting the spanning-tree path to
//! `v`, so `G_v` acts on `{0, .., n-1}` through its generators' letters.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gog::{
    bass_serre_ball, omega_injectivity_certificate, pi1_presentation, EdgeId, EdgeSpec,
    GraphOfGroups, Letter, OmegaReport, Pi1Presentation, PresWord, Syllable, TreeBall, VertexId,
    VertexSpec,
};
use crate::group::{Elem, GroupHom, Subgroup};
use crate::limits::degree_cap;
use crate::perm::Perm;

#[derive(Debug, Clone)]
pub struct Pi1Action {
    pub presentation: Arc<Pi1Presentation>,
    pub degree: usize,
    /// One permutation per presentation generator.
    pub images: Vec<Perm>,
}

impl Pi1Action {
    pub fn new(presentation: Arc<Pi1Presentation>, images: Vec<Perm>) -> Result<Self> {
        if images.len() != presentation.generator_count() {
            return Err(Error::InvalidAction(format!(
                "{} images for {} generators",
                images.len(),
                presentation.generator_count()
            )));
        }
        let degree = images.first().map_or(1, |p| p.degree());
        if degree == 0 || images.iter().any(|p| p.degree() != degree) {
            return Err(Error::InvalidAction(
                "images act on different point sets".into(),
            ));
        }
        Ok(Pi1Action {
            presentation,
            degree,
            images,
        })
    }

    /// An action of the given degree with images given by symbol.
    pub fn from_symbols(
        presentation: Arc<Pi1Presentation>,
        degree: usize,
        images: &[(&str, Perm)],
    ) -> Result<Self> {
        let mut out = vec![Perm::identity(degree); presentation.generator_count()];
        for (s, p) in images {
            let i = presentation
                .symbol_index(s)
                .ok_or_else(|| Error::InvalidAction(format!("unknown generator `{s}`")))?;
            if p.degree() != degree {
                return Err(Error::InvalidAction(format!(
                    "image of `{s}` has degree {}",
                    p.degree()
                )));
            }
            out[i] = p.clone();
        }
        Ok(Pi1Action {
            presentation,
            degree,
            images: out,
        })
    }

    pub fn trivial(presentation: Arc<Pi1Presentation>) -> Self {
        let images = vec![Perm::identity(1); presentation.generator_count()];
        Pi1Action {
            presentation,
            degree: 1,
            images,
        }
    }

    /// Permutation of a word, letters applied left to right.
    pub fn word_perm(&self, w: &PresWord) -> Perm {
        let mut p = Perm::identity(self.degree);
        for &(g, k) in &w.0 {
            let step = if k > 0 {
                self.images[g].clone()
            } else {
                self.images[g].inverse()
            };
            for _ in 0..k.unsigned_abs() {
                p = p.then(&step);
            }
        }
        p
    }

    /// Disjoint union of two actions of the same presentation.
    pub fn direct_sum(&self, other: &Pi1Action) -> Pi1Action {
        Pi1Action {
            presentation: Arc::clone(&self.presentation),
            degree: self.degree + other.degree,
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| a.disjoint_sum(b))
                .collect(),
        }
    }

    /// Representative of the conjugacy class; equal forms mean isomorphic π₁-sets.
    pub fn canonical_form(&self) -> Vec<Vec<u32>> {
        canonical_form(&self.images, self.degree)
    }

    pub fn is_conjugate(&self, other: &Pi1Action) -> bool {
        self.degree == other.degree && self.canonical_form() == other.canonical_form()
    }

    /// Orbits of the generated group, each sorted, by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(&self.images, self.degree)
    }
}

fn orbits(gens: &[Perm], n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orb = vec![s];
        let mut head = 0;
        while head < orb.len() {
            let p = orb[head];
            head += 1;
            for g in gens {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orb.push(q);
                }
            }
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

/// Minimal relabeling of each orbit from each of its points, orbits sorted.
fn canonical_form(gens: &[Perm], n: usize) -> Vec<Vec<u32>> {
    let mut parts: Vec<Vec<Vec<u32>>> = Vec::new();
    for orb in orbits(gens, n) {
        let mut best: Option<Vec<Vec<u32>>> = None;
        for &s in &orb {
            let mut label = HashMap::from([(s, 0u32)]);
            let mut order = vec![s];
            let mut head = 0;
            while head < order.len() {
                let p = order[head];
                head += 1;
                for g in gens {
                    let q = g.apply(p);
                    if let std::collections::hash_map::Entry::Vacant(e) = label.entry(q) {
                        e.insert(order.len() as u32);
                        order.push(q);
                    }
                }
            }
            let form: Vec<Vec<u32>> = gens
                .iter()
                .map(|g| order.iter().map(|&p| label[&g.apply(p)]).collect())
                .collect();
            if best.as_ref().is_none_or(|b| form < *b) {
                best = Some(form);
            }
        }
        parts.push(best.unwrap_or_default());
    }
    parts.sort();
    let mut out = vec![Vec::new(); gens.len()];
    let mut offset = 0;
    for part in parts {
        let len = part.first().map_or(0, |p| p.len()) as u32;
        for (i, row) in part.into_iter().enumerate() {
            out[i].extend(row.into_iter().map(|x| x + offset));
        }
        offset += len;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionValidation {
    pub valid: bool,
    /// Index of the first relator that acts nontrivially.
    pub first_failure: Option<usize>,
}

pub fn validate_action(a: &Pi1Action) -> ActionValidation {
    let first_failure = a
        .presentation
        .relators
        .iter()
        .position(|r| !a.word_perm(r).is_identity());
    ActionValidation {
        valid: first_failure.is_none(),
        first_failure,
    }
}

/// True iff the generated permutation group is transitive.
pub fn is_connected_cover(a: &Pi1Action) -> bool {
    a.orbits().len() == 1
}

#[derive(Debug, Clone)]
pub struct CoveringGoG {
    pub base: Arc<GraphOfGroups>,
    pub total: GraphOfGroups,
    pub degree: usize,
    pub vertex_over: Vec<VertexId>,
    pub edge_over: Vec<EdgeId>,
    /// Points of the orbit of each covering vertex, in the frame of its base vertex.
    pub vertex_orbits: Vec<Vec<usize>>,
    /// Group of each covering vertex inside its base vertex group.
    pub vertex_groups: Vec<Subgroup>,
    /// Group of each covering edge inside its base edge group.
    pub edge_groups: Vec<Subgroup>,
    /// `(x_src, x_tgt)`: the covering edge group includes at each end by
    /// `a ↦ x i(a) x⁻¹`.
    pub edge_twist: Vec<(Elem, Elem)>,
}

/// Per-vertex permutation images and per-edge frame changes of an action.
struct Frames {
    /// `rho[v][x]` is the permutation of `x ∈ G_v`.
    rho: Vec<Vec<Perm>>,
    /// Crossing an edge forward maps a source-frame point `p` to `p·sigma[e]`.
    sigma: Vec<Perm>,
}

fn frames(g: &GraphOfGroups, a: &Pi1Action) -> Frames {
    let p = &a.presentation;
    let rho = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, vx)| {
            vx.group
                .elements()
                .map(|x| a.word_perm(&p.element_word(g, v, x)))
                .collect()
        })
        .collect();
    let sigma = (0..g.edges().len())
        .map(|e| match p.stable_letter(e) {
            None => Perm::identity(a.degree),
            Some(t) => {
                let Letter::Stable { dir, .. } = p.letters[t] else {
                    unreachable!("stable letter")
                };
                if dir.forward {
                    a.images[t].clone()
                } else {
                    a.images[t].inverse()
                }
            }
        })
        .collect();
    Frames { rho, sigma }
}

fn group_orbits(
    rho: &[Perm],
    n: usize,
    elems: impl Fn(Elem) -> Elem,
    order: usize,
) -> Vec<Vec<usize>> {
    let perms: Vec<Perm> = (0..order as Elem)
        .map(|a| rho[elems(a) as usize].clone())
        .collect();
    orbits(&perms, n)
}

/// The cover of `g` with monodromy `a`: one vertex per `G_v`-orbit on the
/// fiber, carrying the stabilizer of the orbit's least point; likewise for
/// edges in the source frame.
pub fn covering_from_action(g: &Arc<GraphOfGroups>, a: &Pi1Action) -> Result<CoveringGoG> {
    if let Some(i) = validate_action(a).first_failure {
        return Err(Error::InvalidAction(format!(
            "relator {} acts nontrivially",
            a.presentation.format_word(&a.presentation.relators[i])
        )));
    }
    if a.presentation.generator_count()
        != pi1_presentation(g, a.presentation.basepoint)?.generator_count()
    {
        return Err(Error::InvalidAction(
            "action is for a different presentation".into(),
        ));
    }
    let n = a.degree;
    let fr = frames(g, a);
    let mut groups = Vec::new();
    let mut vspecs = Vec::new();
    let mut vertex_over = Vec::new();
    let mut vertex_orbits = Vec::new();
    let mut vertex_groups = Vec::new();
    // per base vertex: covering vertex of each point
    let mut cover_of_point: Vec<Vec<usize>> = Vec::new();
    for (v, vx) in g.vertices().iter().enumerate() {
        let grp = Arc::clone(&vx.group);
        let orbs = group_orbits(&fr.rho[v], n, |x| x, grp.order());
        let mut which = vec![0; n];
        for (k, orb) in orbs.iter().enumerate() {
            let id = vertex_over.len();
            for &p in orb {
                which[p] = id;
            }
            let p0 = orb[0];
            let stab: Vec<Elem> = grp
                .elements()
                .filter(|&x| fr.rho[v][x as usize].apply(p0) == p0)
                .collect();
            let name = format!("{}.{}", vx.name, k);
            let sub = grp.subgroup(&format!("S_{name}"), &stab)?;
            groups.push((format!("S_{name}"), Arc::clone(&sub.group)));
            vspecs.push(VertexSpec {
                name,
                group: format!("S_{}.{}", vx.name, k),
            });
            vertex_over.push(v);
            vertex_orbits.push(orb.clone());
            vertex_groups.push(sub);
        }
        cover_of_point.push(which);
    }
    let twist = |v: VertexId, p0: usize, q: usize| -> Elem {
        g.vertex(v)
            .group
            .elements()
            .find(|&x| fr.rho[v][x as usize].apply(p0) == q)
            .expect("same orbit")
    };
    let mut especs = Vec::new();
    let mut edge_over = Vec::new();
    let mut edge_groups = Vec::new();
    let mut edge_twist = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        let ge = Arc::clone(&edge.group);
        let orbs = group_orbits(&fr.rho[edge.src], n, |b| edge.into_src.apply(b), ge.order());
        for (k, orb) in orbs.iter().enumerate() {
            let q0 = orb[0];
            let stab: Vec<Elem> = ge
                .elements()
                .filter(|&b| fr.rho[edge.src][edge.into_src.apply(b) as usize].apply(q0) == q0)
                .collect();
            let name = format!("{}.{}", edge.name, k);
            let sub = ge.subgroup(&format!("S_{name}"), &stab)?;
            groups.push((format!("S_{name}"), Arc::clone(&sub.group)));
            let sv = cover_of_point[edge.src][q0];
            let q1 = fr.sigma[e].apply(q0);
            let tv = cover_of_point[edge.tgt][q1];
            let xs = twist(edge.src, vertex_orbits[sv][0], q0);
            let xt = twist(edge.tgt, vertex_orbits[tv][0], q1);
            let into_src = twisted_inclusion(&sub, &vertex_groups[sv], xs, &edge.into_src)
                .expect("twisted stabilizers nest");
            let into_tgt = twisted_inclusion(&sub, &vertex_groups[tv], xt, &edge.into_tgt)
                .expect("twisted stabilizers nest");
            especs.push(EdgeSpec {
                name: name.clone(),
                src: vspecs[sv].name.clone(),
                tgt: vspecs[tv].name.clone(),
                group: format!("S_{name}"),
                into_src,
                into_tgt,
            });
            edge_over.push(e);
            edge_groups.push(sub);
            edge_twist.push((xs, xt));
        }
    }
    let base_name = vspecs[cover_of_point[g.basepoint()][0]].name.clone();
    let total = GraphOfGroups::new(groups, vspecs, especs, Some(&base_name))?;
    Ok(CoveringGoG {
        base: Arc::clone(g),
        total,
        degree: n,
        vertex_over,
        edge_over,
        vertex_orbits,
        vertex_groups,
        edge_groups,
        edge_twist,
    })
}

/// Local ids of `x i(b) x⁻¹` in `vertex` for each `b` of `edge`, or `None`
/// if some image leaves `vertex`.
fn twisted_inclusion(
    edge: &Subgroup,
    vertex: &Subgroup,
    x: Elem,
    incl: &GroupHom,
) -> Option<Vec<Elem>> {
    let vg = &vertex.ambient;
    edge.embedding
        .iter()
        .map(|&b| vertex.local_id(vg.conj(x, incl.apply(b))))
        .collect()
}

fn cover_error(msg: String) -> Error {
    Error::InvalidGraph(format!("inconsistent cover: {msg}"))
}

impl CoveringGoG {
    /// Rebuilds a cover from stored data, checking that the groups and
    /// inclusions of `total` are the ones the subgroups and twists give.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        base: Arc<GraphOfGroups>,
        total: GraphOfGroups,
        degree: usize,
        vertex_over: Vec<VertexId>,
        edge_over: Vec<EdgeId>,
        vertex_orbits: Vec<Vec<usize>>,
        vertex_embeddings: &[Vec<Elem>],
        edge_embeddings: &[Vec<Elem>],
        edge_twist: Vec<(Elem, Elem)>,
    ) -> Result<Self> {
        let nv = total.vertices().len();
        let ne = total.edges().len();
        if vertex_over.len() != nv
            || vertex_orbits.len() != nv
            || vertex_embeddings.len() != nv
            || edge_over.len() != ne
            || edge_embeddings.len() != ne
            || edge_twist.len() != ne
        {
            return Err(cover_error("lists do not match the total graph".into()));
        }
        let mut vertex_groups = Vec::with_capacity(nv);
        for (i, &v) in vertex_over.iter().enumerate() {
            let grp = &base
                .vertices()
                .get(v)
                .ok_or_else(|| cover_error(format!("no base vertex {v}")))?
                .group;
            let sub = grp.subgroup(total.vertex_group_name(i), &vertex_embeddings[i])?;
            if !sub.group.same_law(&total.vertex(i).group) {
                return Err(cover_error(format!(
                    "group of `{}` is not its stored subgroup",
                    total.vertex(i).name
                )));
            }
            vertex_groups.push(sub);
        }
        for v in 0..base.vertices().len() {
            let mut pts: Vec<usize> = (0..nv)
                .filter(|&i| vertex_over[i] == v)
                .flat_map(|i| vertex_orbits[i].iter().copied())
                .collect();
            pts.sort_unstable();
            if pts != (0..degree).collect::<Vec<_>>() {
                return Err(cover_error(format!(
                    "orbits over `{}` do not partition the fiber",
                    base.vertex(v).name
                )));
            }
        }
        let mut edge_groups = Vec::with_capacity(ne);
        for (i, &e) in edge_over.iter().enumerate() {
            let be = base
                .edges()
                .get(e)
                .ok_or_else(|| cover_error(format!("no base edge {e}")))?;
            let sub = be
                .group
                .subgroup(total.edge_group_name(i), &edge_embeddings[i])?;
            let te = total.edge(i);
            if vertex_over[te.src] != be.src || vertex_over[te.tgt] != be.tgt {
                return Err(cover_error(format!(
                    "edge `{}` does not lie over `{}`",
                    te.name, be.name
                )));
            }
            let (xs, xt) = edge_twist[i];
            let src = twisted_inclusion(&sub, &vertex_groups[te.src], xs, &be.into_src);
            let tgt = twisted_inclusion(&sub, &vertex_groups[te.tgt], xt, &be.into_tgt);
            if src.as_deref() != Some(te.into_src.images())
                || tgt.as_deref() != Some(te.into_tgt.images())
            {
                return Err(cover_error(format!(
                    "inclusions of `{}` disagree with its twists",
                    te.name
                )));
            }
            edge_groups.push(sub);
        }
        Ok(CoveringGoG {
            base,
            total,
            degree,
            vertex_over,
            edge_over,
            vertex_orbits,
            vertex_groups,
            edge_groups,
            edge_twist,
        })
    }

    /// `Σ [G_v : G_ṽ]` over the covering vertices above `v`.
    pub fn vertex_degree(&self, v: VertexId) -> usize {
        let order = self.base.vertex(v).group.order();
        (0..self.vertex_over.len())
            .filter(|&i| self.vertex_over[i] == v)
            .map(|i| order / self.vertex_groups[i].group.order())
            .sum()
    }

    pub fn edge_degree(&self, e: EdgeId) -> usize {
        let order = self.base.edge(e).group.order();
        (0..self.edge_over.len())
            .filter(|&i| self.edge_over[i] == e)
            .map(|i| order / self.edge_groups[i].group.order())
            .sum()
    }

    /// Fiber points over the basepoint: `(covering vertex, least element of its coset)`.
    fn fiber(&self, v: VertexId) -> Vec<(usize, Elem)> {
        let grp = &self.base.vertex(v).group;
        let mut out = Vec::new();
        for (cv, &over) in self.vertex_over.iter().enumerate() {
            if over != v {
                continue;
            }
            let mut reps = HashSet::new();
            for h in grp.elements() {
                reps.insert(self.coset_rep(cv, h));
            }
            let mut reps: Vec<Elem> = reps.into_iter().collect();
            reps.sort_unstable();
            out.extend(reps.into_iter().map(|r| (cv, r)));
        }
        out
    }

    /// Least element of `G_ṽ · h`.
    fn coset_rep(&self, cv: usize, h: Elem) -> Elem {
        let grp = &self.base.vertex(self.vertex_over[cv]).group;
        self.vertex_groups[cv]
            .embedding
            .iter()
            .map(|&s| grp.mul(s, h))
            .min()
            .expect("nonempty subgroup")
    }

    /// Lifts one syllable starting at the point `(cv, G_cv h)`.
    fn lift(&self, (cv, h): (usize, Elem), s: Syllable) -> Result<(usize, Elem)> {
        let base = &self.base;
        match s {
            Syllable::Elem { vertex, elem } => {
                let grp = &base.vertex(vertex).group;
                Ok((cv, self.coset_rep(cv, grp.mul(h, elem))))
            }
            Syllable::Edge(d) => {
                let e = d.edge;
                let vgrp = &base.vertex(base.origin(d)).group;
                let pre = &base.tables().at_origin(d).preimage;
                for ce in 0..self.edge_over.len() {
                    if self.edge_over[ce] != e {
                        continue;
                    }
                    let (from, to) = {
                        let edge = self.total.edge(ce);
                        if d.forward {
                            (edge.src, edge.tgt)
                        } else {
                            (edge.tgt, edge.src)
                        }
                    };
                    if from != cv {
                        continue;
                    }
                    let (x_from, x_to) = if d.forward {
                        (self.edge_twist[ce].0, self.edge_twist[ce].1)
                    } else {
                        (self.edge_twist[ce].1, self.edge_twist[ce].0)
                    };
                    for &st in &self.vertex_groups[cv].embedding {
                        // h = st · x · i(b)
                        let c = vgrp.mul(vgrp.inv(x_from), vgrp.mul(vgrp.inv(st), h));
                        if let Some(b) = pre[c as usize] {
                            let tgrp = &base.vertex(base.terminus(d)).group;
                            let h2 = tgrp.mul(x_to, base.omega(d).apply(b));
                            return Ok((to, self.coset_rep(to, h2)));
                        }
                    }
                }
                Err(Error::InvalidAction(format!(
                    "no edge over `{}` leaves covering vertex `{}`",
                    base.edge(e).name,
                    self.total.vertex(cv).name
                )))
            }
        }
    }
}

/// The action of π₁ on the fiber over the basepoint, by lifting the loop of
/// each generator through the cover data.
pub fn monodromy(c: &CoveringGoG) -> Result<Pi1Action> {
    let g = &c.base;
    let p = Arc::new(pi1_presentation(g, g.basepoint())?);
    let fiber = c.fiber(g.basepoint());
    let index: HashMap<(usize, Elem), usize> =
        fiber.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let n = fiber.len();
    let mut images = Vec::with_capacity(p.generator_count());
    for l in 0..p.generator_count() {
        let lp = p.word_to_loop(g, &PresWord::letter(l, 1));
        let mut img = Vec::with_capacity(n);
        for &start in &fiber {
            let mut pt = start;
            for &s in &lp.syllables {
                pt = c.lift(pt, s)?;
            }
            let j = index
                .get(&pt)
                .ok_or_else(|| Error::InvalidAction("lift left the fiber".into()))?;
            img.push(*j as u32);
        }
        images.push(Perm::from_images(img)?);
    }
    if n == 0 {
        return Err(Error::InvalidAction("empty fiber".into()));
    }
    Pi1Action::new(p, images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianCheck {
    pub holds: bool,
    /// Order of the stabilizer of the point inside `G_v`.
    pub stabilizer_order: usize,
    /// Covering vertex containing the point.
    pub covering_vertex: String,
}

/// Compares the stabilizer of `point` under `G_v` with the group of the
/// covering vertex through it, transported by the twist to that point.
pub fn inertia_cartesian_check(
    g: &Arc<GraphOfGroups>,
    a: &Pi1Action,
    v: VertexId,
    point: usize,
) -> Result<CartesianCheck> {
    if v >= g.vertices().len() || point >= a.degree {
        return Err(Error::InvalidAction(format!(
            "no point {point} over vertex {v}"
        )));
    }
    let cover = covering_from_action(g, a)?;
    let fr = frames(g, a);
    let grp = &g.vertex(v).group;
    let stab: Vec<Elem> = grp
        .elements()
        .filter(|&x| fr.rho[v][x as usize].apply(point) == point)
        .collect();
    let cv = (0..cover.vertex_over.len())
        .find(|&i| cover.vertex_over[i] == v && cover.vertex_orbits[i].contains(&point))
        .expect("every point lies in an orbit");
    let p0 = cover.vertex_orbits[cv][0];
    let x = grp
        .elements()
        .find(|&x| fr.rho[v][x as usize].apply(p0) == point)
        .expect("same orbit");
    let xi = grp.inv(x);
    let mut moved: Vec<Elem> = cover.vertex_groups[cv]
        .embedding
        .iter()
        .map(|&s| grp.conj(xi, s))
        .collect();
    moved.sort_unstable();
    Ok(CartesianCheck {
        holds: moved == stab,
        stabilizer_order: stab.len(),
        covering_vertex: cover.total.vertex(cv).name.clone(),
    })
}

/// The ball of the universal cover, which is the Bass–Serre tree.
pub fn universal_cover_ball(g: &GraphOfGroups, radius: usize) -> Result<TreeBall> {
    bass_serre_ball(g, g.basepoint(), radius)
}

pub fn euler_characteristic(g: &GraphOfGroups) -> Ratio<i64> {
    g.euler_characteristic()
}

/// Transitive actions of degree at most `n_max`, one per conjugacy class,
/// ordered by degree and then by canonical form.
pub fn enumerate_actions(p: &Arc<Pi1Presentation>, n_max: usize) -> Result<Vec<Pi1Action>> {
    let cap = degree_cap();
    if n_max > cap {
        return Err(Error::CapExceeded {
            what: "action enumeration degree",
            needed: n_max,
            cap,
        });
    }
    let k = p.generator_count();
    let relators: Vec<Vec<(usize, bool)>> = p
        .relators
        .iter()
        .map(|r| r.expanded().into_iter().map(|(g, s)| (g, s > 0)).collect())
        .collect();
    let mut found: Vec<(usize, Vec<Vec<u32>>)> = Vec::new();
    let mut seen = HashSet::new();
    if n_max >= 1 {
        let mut t = Table {
            fwd: vec![vec![None; k]; n_max],
            bwd: vec![vec![None; k]; n_max],
            used: 1,
        };
        search(&mut t, n_max, &relators, &mut |t: &Table| {
            let images: Vec<Perm> = (0..k)
                .map(|g| {
                    Perm::from_images_unchecked(
                        (0..t.used).map(|x| t.fwd[x][g].unwrap() as u32).collect(),
                    )
                })
                .collect();
            let form = canonical_form(&images, t.used);
            if seen.insert((t.used, form.clone())) {
                found.push((t.used, form));
            }
        });
    }
    found.sort();
    found
        .into_iter()
        .map(|(n, form)| {
            let images = if k == 0 {
                Vec::new()
            } else {
                form.into_iter()
                    .map(Perm::from_images)
                    .collect::<Result<Vec<_>>>()?
            };
            Ok(Pi1Action {
                presentation: Arc::clone(p),
                degree: n,
                images,
            })
        })
        .collect()
}

struct Table {
    fwd: Vec<Vec<Option<usize>>>,
    bwd: Vec<Vec<Option<usize>>>,
    used: usize,
}

impl Table {
    fn step(&self, p: usize, (g, forward): (usize, bool)) -> Option<usize> {
        if forward {
            self.fwd[p][g]
        } else {
            self.bwd[p][g]
        }
    }

    /// False if some relator closes at a point other than its start.
    fn consistent(&self, relators: &[Vec<(usize, bool)>]) -> bool {
        for r in relators {
            for start in 0..self.used {
                let mut p = Some(start);
                for &l in r {
                    p = p.and_then(|x| self.step(x, l));
                    if p.is_none() {
                        break;
                    }
                }
                if let Some(end) = p {
                    if end != start {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn search(
    t: &mut Table,
    n_max: usize,
    relators: &[Vec<(usize, bool)>],
    emit: &mut dyn FnMut(&Table),
) {
    let k = t.fwd[0].len();
    let slot = (0..t.used)
        .flat_map(|p| (0..k).map(move |g| (p, g)))
        .find_map(|(p, g)| {
            if t.fwd[p][g].is_none() {
                Some((p, g, true))
            } else if t.bwd[p][g].is_none() {
                Some((p, g, false))
            } else {
                None
            }
        });
    let Some((p, g, forward)) = slot else {
        emit(t);
        return;
    };
    let limit = (t.used + 1).min(n_max);
    for q in 0..limit {
        let free = if forward {
            t.bwd[q][g].is_none()
        } else {
            t.fwd[q][g].is_none()
        };
        if !free {
            continue;
        }
        let fresh = q == t.used;
        if fresh {
            t.used += 1;
        }
        if forward {
            t.fwd[p][g] = Some(q);
            t.bwd[q][g] = Some(p);
        } else {
            t.bwd[p][g] = Some(q);
            t.fwd[q][g] = Some(p);
        }
        if t.consistent(relators) {
            search(t, n_max, relators, emit);
        }
        if forward {
            t.fwd[p][g] = None;
            t.bwd[q][g] = None;
        } else {
            t.bwd[p][g] = None;
            t.fwd[q][g] = None;
        }
        if fresh {
            t.used -= 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct UniformizationReport {
    pub certificate: OmegaReport,
    /// A cover with all vertex groups trivial, if one of degree at most the
    /// search bound exists. `None` is inconclusive.
    pub torsion_free_cover: Option<Pi1Action>,
    pub searched_degree: usize,
}

/// Injectivity certificate plus a bounded search for a finite cover with
/// trivial vertex groups.
pub fn uniformize(g: &Arc<GraphOfGroups>, max_degree: usize) -> Result<UniformizationReport> {
    let certificate = omega_injectivity_certificate(g)?;
    let p = Arc::new(pi1_presentation(g, g.basepoint())?);
    let mut torsion_free_cover = None;
    for a in enumerate_actions(&p, max_degree)? {
        let fr = frames(g, &a);
        let free = fr.rho.iter().all(|perms| {
            perms
                .iter()
                .skip(1)
                .all(|q| (0..a.degree).all(|x| q.apply(x) != x))
        });
        if free {
            torsion_free_cover = Some(a);
            break;
        }
    }
    Ok(UniformizationReport {
        certificate,
        torsion_free_cover,
        searched_degree: max_degree,
    })
}
