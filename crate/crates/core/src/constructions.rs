//! 2-fiber products, inertia, double cosets and the action form of fiber
//! products of action groupoids.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupHom, Subgroup};
use crate::groupoid::{
    ArrowId, FiniteGroupoid, GroupAction, GroupoidFunctor, NaturalTransformation, ObjId,
};

pub use crate::limits::{arrow_cap, DEFAULT_ARROW_CAP};

#[derive(Debug, Clone)]
pub struct FiberProductResult {
    pub total: Arc<FiniteGroupoid>,
    pub proj_left: GroupoidFunctor,
    pub proj_right: GroupoidFunctor,
    /// `proj_left ; f => proj_right ; g`, with component `α` at `(y, z, α)`.
    pub two_cell: NaturalTransformation,
    /// `(y, z, α)` for each object.
    pub triples: Vec<(ObjId, ObjId, ArrowId)>,
    /// `(u, v)` for each arrow.
    pub pairs: Vec<(ArrowId, ArrowId)>,
}

impl FiberProductResult {
    pub fn object_of(&self, y: ObjId, z: ObjId, alpha: ArrowId) -> Option<ObjId> {
        self.triples.binary_search(&(y, z, alpha)).ok()
    }
}

pub fn fiber_product(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Result<FiberProductResult> {
    fiber_product_with_cap(f, g, arrow_cap())
}

/// Objects `(y, z, α: f y -> g z)` in lexicographic order; arrows
/// `(u, v): (y, z, α) -> (y', z', f(u)⁻¹ ; α ; g(v))` grouped by source.
pub fn fiber_product_with_cap(
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
    cap: usize,
) -> Result<FiberProductResult> {
    let c = &f.codomain;
    if !Arc::ptr_eq(c, &g.codomain) && **c != *g.codomain {
        return Err(Error::MismatchedBase);
    }
    let (ys, zs) = (&f.domain, &g.domain);
    let mut triples = Vec::new();
    let mut needed = 0usize;
    for y in 0..ys.object_count() {
        for z in 0..zs.object_count() {
            let hom = c.hom(f.obj_map[y], g.obj_map[z]);
            needed = needed
                .saturating_add(hom.len() * ys.arrows_from(y).len() * zs.arrows_from(z).len());
            triples.extend(hom.iter().map(|&a| (y, z, a)));
        }
    }
    if needed > cap {
        return Err(Error::CapExceeded {
            what: "fiber product arrows",
            needed,
            cap,
        });
    }
    // dense indices: triples by (y, z, α); arrows of triple i from base[i],
    // ordered by the positions of u and v among the arrows leaving y and z
    let (nz, na) = (zs.object_count(), c.arrow_count());
    let mut index = vec![usize::MAX; ys.object_count() * nz * na];
    let mut base = Vec::with_capacity(triples.len());
    let mut next = 0;
    for (i, &(y, z, a)) in triples.iter().enumerate() {
        index[(y * nz + z) * na + a] = i;
        base.push(next);
        next += ys.arrows_from(y).len() * zs.arrows_from(z).len();
    }
    let arrow_id = |i: ObjId, u: ArrowId, v: ArrowId| {
        let width = zs.arrows_from(zs.src(v)).len();
        base[i] + ys.out_position(u) * width + zs.out_position(v)
    };
    let mut arrows = Vec::with_capacity(needed);
    let mut pairs = Vec::with_capacity(needed);
    for (i, &(y, z, alpha)) in triples.iter().enumerate() {
        for &u in ys.arrows_from(y) {
            for &v in zs.arrows_from(z) {
                let moved = c.compose(c.compose(c.inverse(f.arr_map[u]), alpha), g.arr_map[v]);
                arrows.push((i, index[(ys.tgt(u) * nz + zs.tgt(v)) * na + moved]));
                pairs.push((u, v));
            }
        }
    }
    let identities = triples
        .iter()
        .enumerate()
        .map(|(i, &(y, z, _))| arrow_id(i, ys.identity(y), zs.identity(z)))
        .collect();
    let names = triples
        .iter()
        .map(|&(y, z, a)| format!("({},{},{})", ys.object_name(y), zs.object_name(z), a))
        .collect();
    // arrows out of the target of (u1, v1) run over (u2, v2) in the same
    // order as the positions, so each row is an outer sum
    let positions = |h: &FiniteGroupoid, a: ArrowId| -> Vec<usize> {
        h.arrows_from(h.tgt(a))
            .iter()
            .map(|&b| h.out_position(h.compose(a, b)))
            .collect()
    };
    let (left_rows, right_rows): (Vec<Vec<usize>>, Vec<Vec<usize>>) = (
        (0..ys.arrow_count()).map(|u| positions(ys, u)).collect(),
        (0..zs.arrow_count()).map(|v| positions(zs, v)).collect(),
    );
    let total = Arc::new(FiniteGroupoid::from_rows(
        names,
        arrows.clone(),
        identities,
        |p, _, row| {
            let (u1, v1) = pairs[p];
            let start = base[arrows[p].0];
            let width = zs.arrows_from(zs.src(v1)).len();
            for &pu in &left_rows[u1] {
                let first = start + pu * width;
                row.extend(right_rows[v1].iter().map(|&pv| first + pv));
            }
        },
    ));
    let proj_left = GroupoidFunctor::new_unchecked(
        Arc::clone(&total),
        Arc::clone(ys),
        triples.iter().map(|t| t.0).collect(),
        pairs.iter().map(|p| p.0).collect(),
    );
    let proj_right = GroupoidFunctor::new_unchecked(
        Arc::clone(&total),
        Arc::clone(zs),
        triples.iter().map(|t| t.1).collect(),
        pairs.iter().map(|p| p.1).collect(),
    );
    let two_cell = NaturalTransformation {
        source: proj_left.then(f),
        target: proj_right.then(g),
        component: triples.iter().map(|t| t.2).collect(),
    };
    Ok(FiberProductResult {
        total,
        proj_left,
        proj_right,
        two_cell,
        triples,
        pairs,
    })
}

/// Product groupoid: object `(x, y)` at `x * |Y| + y`, arrow `(a, b)` at `a * |R_Y| + b`.
pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let (nb, mb) = (b.object_count(), b.arrow_count());
    let names = (0..a.object_count())
        .flat_map(|x| (0..nb).map(move |y| (x, y)))
        .map(|(x, y)| format!("({},{})", a.object_name(x), b.object_name(y)))
        .collect();
    let arrows = (0..a.arrow_count())
        .flat_map(|u| (0..mb).map(move |v| (u, v)))
        .map(|(u, v)| (a.src(u) * nb + b.src(v), a.tgt(u) * nb + b.tgt(v)))
        .collect();
    let identities = (0..a.object_count())
        .flat_map(|x| (0..nb).map(move |y| (x, y)))
        .map(|(x, y)| a.identity(x) * mb + b.identity(y))
        .collect();
    FiniteGroupoid::from_parts(names, arrows, identities, |p, q| {
        a.compose(p / mb, q / mb) * mb + b.compose(p % mb, q % mb)
    })
}

/// The diagonal `g -> g x g`.
pub fn diagonal(g: &Arc<FiniteGroupoid>) -> GroupoidFunctor {
    let (n, m) = (g.object_count(), g.arrow_count());
    GroupoidFunctor::new_unchecked(
        Arc::clone(g),
        Arc::new(product(g, g)),
        (0..n).map(|x| x * n + x).collect(),
        (0..m).map(|a| a * m + a).collect(),
    )
}

#[derive(Debug, Clone)]
pub struct Inertia {
    pub groupoid: Arc<FiniteGroupoid>,
    pub projection: GroupoidFunctor,
    /// `(x, α)` for each object.
    pub pairs: Vec<(ObjId, ArrowId)>,
}

/// Objects `(x, α)` with `α: x -> x`, in lexicographic order; arrows
/// `γ: (x, α) -> (x', γ⁻¹ ; α ; γ)` grouped by source.
pub fn inertia(g: &Arc<FiniteGroupoid>) -> Inertia {
    let mut pairs = Vec::new();
    for x in 0..g.object_count() {
        pairs.extend(g.hom(x, x).iter().map(|&a| (x, a)));
    }
    let index: HashMap<(ObjId, ArrowId), ObjId> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut arrows = Vec::new();
    let mut labels = Vec::new();
    for (i, &(x, alpha)) in pairs.iter().enumerate() {
        for &c in g.arrows_from(x) {
            let moved = g.compose(g.compose(g.inverse(c), alpha), c);
            arrows.push((i, index[&(g.tgt(c), moved)]));
            labels.push(c);
        }
    }
    let arrow_index: HashMap<(ObjId, ArrowId), ArrowId> = labels
        .iter()
        .enumerate()
        .map(|(a, &c)| ((arrows[a].0, c), a))
        .collect();
    let identities = pairs
        .iter()
        .enumerate()
        .map(|(i, &(x, _))| arrow_index[&(i, g.identity(x))])
        .collect();
    let names = pairs
        .iter()
        .map(|&(x, a)| format!("({},{})", g.object_name(x), a))
        .collect();
    let total = Arc::new(FiniteGroupoid::from_parts(
        names,
        arrows.clone(),
        identities,
        |p, q| arrow_index[&(arrows[p].0, g.compose(labels[p], labels[q]))],
    ));
    let projection = GroupoidFunctor::new_unchecked(
        Arc::clone(&total),
        Arc::clone(g),
        pairs.iter().map(|p| p.0).collect(),
        labels,
    );
    Inertia {
        groupoid: total,
        projection,
        pairs,
    }
}

/// One `(representative, centralizer)` per conjugacy class, representatives least.
pub fn inertia_of_bg(group: &Arc<FiniteGroup>) -> Vec<(Elem, Subgroup)> {
    group
        .conjugacy_classes()
        .into_iter()
        .map(|class| {
            let a = class[0];
            let c = group
                .subgroup(&format!("C({a})"), &group.centralizer(a))
                .expect("centralizers are subgroups");
            (a, c)
        })
        .collect()
}

/// `⊔ B C_a` over the classes of `inertia_of_bg`.
pub fn inertia_of_bg_groupoid(group: &Arc<FiniteGroup>) -> FiniteGroupoid {
    inertia_of_bg(group)
        .into_iter()
        .fold(FiniteGroupoid::empty(), |acc, (a, c)| {
            let b = FiniteGroupoid::classifying(&c.group).with_object_names(vec![format!("{a}")]);
            acc.disjoint_union(&b)
        })
}

#[derive(Debug, Clone)]
pub struct DoubleCoset {
    /// Least element of the double coset.
    pub representative: Elem,
    /// Elements of `H' a K'`, increasing.
    pub elements: Vec<Elem>,
    /// `C_a = {(h, k) : f(h) a g(k)⁻¹ = a}` inside `H x K`.
    pub stabilizer: Subgroup,
}

#[derive(Debug, Clone)]
pub struct DoubleCosetDecomposition {
    pub ambient: Arc<FiniteGroup>,
    /// `H x K`, element `(h, k)` at `h * |K| + k`.
    pub product: Arc<FiniteGroup>,
    pub cosets: Vec<DoubleCoset>,
}

impl DoubleCosetDecomposition {
    /// `⊔ B C_a`.
    pub fn groupoid(&self) -> FiniteGroupoid {
        self.cosets.iter().fold(FiniteGroupoid::empty(), |acc, dc| {
            let b = FiniteGroupoid::classifying(&dc.stabilizer.group)
                .with_object_names(vec![format!("{}", dc.representative)]);
            acc.disjoint_union(&b)
        })
    }
}

/// `G = ⊔ f(H) a g(K)` with stabilizers, for `H -f-> G <-g- K`.
pub fn double_coset_fiber_product(f: &GroupHom, g: &GroupHom) -> Result<DoubleCosetDecomposition> {
    let ambient = &f.codomain;
    if !Arc::ptr_eq(ambient, &g.codomain) && !ambient.same_law(&g.codomain) {
        return Err(Error::MismatchedBase);
    }
    let (h, k) = (&f.domain, &g.domain);
    let product = Arc::new(FiniteGroup::direct_product(h, k));
    let hs = f.image_set();
    let ks = g.image_set();
    let mut seen = vec![false; ambient.order()];
    let mut cosets = Vec::new();
    for a in ambient.elements() {
        if seen[a as usize] {
            continue;
        }
        let mut elements = Vec::new();
        for &x in &hs {
            for &y in &ks {
                let e = ambient.mul(ambient.mul(x, a), y);
                if !seen[e as usize] {
                    seen[e as usize] = true;
                    elements.push(e);
                }
            }
        }
        elements.sort_unstable();
        let nk = k.order() as Elem;
        let stab: Vec<Elem> = product
            .elements()
            .filter(|&p| {
                let (hh, kk) = (p / nk, p % nk);
                ambient.mul(ambient.mul(f.apply(hh), a), ambient.inv(g.apply(kk))) == a
            })
            .collect();
        let stabilizer = product.subgroup(&format!("C({a})"), &stab)?;
        cosets.push(DoubleCoset {
            representative: a,
            elements,
            stabilizer,
        });
    }
    Ok(DoubleCosetDecomposition {
        ambient: Arc::clone(ambient),
        product,
        cosets,
    })
}

/// An action of `H x K` on `P₀ = (Y x Z) x_(X x X) (G x X)`.
#[derive(Debug, Clone)]
pub struct ActionFiberProduct {
    pub action: GroupAction,
    /// `(y, z, d)` with `d · p(y) = q(z)`, lexicographic.
    pub triples: Vec<(usize, usize, Elem)>,
    /// The arrow `(d, p(y))` of the target action groupoid, per triple.
    pub base_arrows: Vec<ArrowId>,
    pub groupoid: Arc<FiniteGroupoid>,
}

/// An equivariant map of actions along `hom`.
#[derive(Debug, Clone)]
pub struct EquivariantMap<'a> {
    pub source: &'a GroupAction,
    pub hom: &'a GroupHom,
    pub points: &'a [usize],
}

fn check_equivariant(m: &EquivariantMap<'_>, target: &GroupAction, side: &str) -> Result<()> {
    let a = m.source;
    if m.points.len() != a.points.len() || m.points.iter().any(|&x| x >= target.points.len()) {
        return Err(Error::NotEquivariant(format!(
            "{side} point map has the wrong shape"
        )));
    }
    if m.hom.codomain.order() != target.group.order() || m.hom.domain.order() != a.group.order() {
        return Err(Error::NotEquivariant(format!(
            "{side} homomorphism does not match the groups"
        )));
    }
    for h in a.group.elements() {
        for y in 0..a.points.len() {
            let lhs = m.points[a.act[h as usize][y]];
            let rhs = target.act[m.hom.apply(h) as usize][m.points[y]];
            if lhs != rhs {
                return Err(Error::NotEquivariant(format!(
                    "{side}: p({h}·{y}) = {lhs} but {}·p({y}) = {rhs}",
                    m.hom.apply(h)
                )));
            }
        }
    }
    Ok(())
}

/// `(h, k) · (y, z, d) = (h y, k z, ψ(k) d φ(h)⁻¹)`.
pub fn action_fiber_product(
    left: EquivariantMap<'_>,
    right: EquivariantMap<'_>,
    target: &GroupAction,
) -> Result<ActionFiberProduct> {
    check_equivariant(&left, target, "left")?;
    check_equivariant(&right, target, "right")?;
    let g = &target.group;
    let (ha, ka) = (left.source, right.source);
    let mut triples = Vec::new();
    for y in 0..ha.points.len() {
        for z in 0..ka.points.len() {
            for d in g.elements() {
                if target.act[d as usize][left.points[y]] == right.points[z] {
                    triples.push((y, z, d));
                }
            }
        }
    }
    let index: HashMap<(usize, usize, Elem), usize> =
        triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let hk = Arc::new(FiniteGroup::direct_product(&ha.group, &ka.group));
    let nk = ka.group.order() as Elem;
    let act: Vec<Vec<usize>> = hk
        .elements()
        .map(|p| {
            let (h, k) = (p / nk, p % nk);
            let (ph, pk) = (left.hom.apply(h), right.hom.apply(k));
            triples
                .iter()
                .map(|&(y, z, d)| {
                    let d2 = g.mul(g.mul(pk, d), g.inv(ph));
                    index[&(ha.act[h as usize][y], ka.act[k as usize][z], d2)]
                })
                .collect()
        })
        .collect();
    let names = triples
        .iter()
        .map(|&(y, z, d)| format!("({},{},{})", ha.points[y], ka.points[z], d))
        .collect();
    let base_arrows = triples
        .iter()
        .map(|&(y, _, d)| left.points[y] * g.order() + d as usize)
        .collect();
    let action = GroupAction::new(hk, names, act)?;
    let groupoid = Arc::new(action.groupoid());
    Ok(ActionFiberProduct {
        action,
        triples,
        base_arrows,
        groupoid,
    })
}

impl ActionFiberProduct {
    /// The isomorphism onto the fiber product of the action groupoids,
    /// `fp` computed with the functors induced by the same equivariant maps.
    pub fn comparison(&self, fp: &FiberProductResult) -> Result<GroupoidFunctor> {
        let hk = &self.action.group;
        let ys = &fp.proj_left.codomain;
        let zs = &fp.proj_right.codomain;
        let h_order = ys.arrow_count() / ys.object_count().max(1);
        let k_order = zs.arrow_count() / zs.object_count().max(1);
        let nk = k_order as Elem;
        if hk.order() != h_order * k_order {
            return Err(Error::MismatchedBase);
        }
        let obj_map = self
            .triples
            .iter()
            .zip(&self.base_arrows)
            .map(|(&(y, z, d), &alpha)| {
                fp.object_of(y, z, alpha)
                    .ok_or_else(|| Error::UnknownObject(format!("({y},{z},{d})")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arrow_index: HashMap<(ObjId, ArrowId, ArrowId), ArrowId> = fp
            .pairs
            .iter()
            .enumerate()
            .map(|(a, &(u, v))| ((fp.total.src(a), u, v), a))
            .collect();
        let mut arr_map = Vec::with_capacity(self.groupoid.arrow_count());
        for a in 0..self.groupoid.arrow_count() {
            let (point, p) = (a / hk.order(), (a % hk.order()) as Elem);
            let (y, z, _) = self.triples[point];
            let u = y * h_order + (p / nk) as usize;
            let v = z * k_order + (p % nk) as usize;
            arr_map.push(arrow_index[&(obj_map[point], u, v)]);
        }
        GroupoidFunctor::new(
            Arc::clone(&self.groupoid),
            Arc::clone(&fp.total),
            obj_map,
            arr_map,
        )
    }
}

/// Functor of action groupoids induced by an equivariant map.
pub fn action_functor(m: &EquivariantMap<'_>, target: &GroupAction) -> Result<GroupoidFunctor> {
    check_equivariant(m, target, "map")?;
    let (nh, ng) = (m.source.group.order(), target.group.order());
    let arr_map = (0..m.source.points.len() * nh)
        .map(|a| {
            let (y, h) = (a / nh, (a % nh) as Elem);
            m.points[y] * ng + m.hom.apply(h) as usize
        })
        .collect();
    GroupoidFunctor::new(
        Arc::new(m.source.groupoid()),
        Arc::new(target.groupoid()),
        m.points.to_vec(),
        arr_map,
    )
}

/// The isotropy group at `x` and its classifying groupoid.
pub fn residue_gerbe(g: &FiniteGroupoid, x: ObjId) -> Result<(Arc<FiniteGroup>, FiniteGroupoid)> {
    let iso = g.isotropy(x)?;
    let b = FiniteGroupoid::classifying(&iso.group)
        .with_object_names(vec![g.object_name(x).to_string()]);
    Ok((iso.group, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morita::{group_isomorphic, is_isomorphism, morita_equivalent};

    fn s3_pair() -> (GroupoidFunctor, GroupoidFunctor) {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let t = s3.generators()[0];
        let c = s3.generators()[1];
        let z2 = s3.subgroup("Z2", &s3.closure(&[t])).unwrap();
        let z3 = s3.subgroup("Z3", &s3.closure(&[c])).unwrap();
        let f = GroupoidFunctor::from_subgroup(&z2);
        let mut g = GroupoidFunctor::from_subgroup(&z3);
        g.codomain = Arc::clone(&f.codomain);
        (f, g)
    }

    #[test]
    fn fiber_product_of_subgroups_is_a_point() {
        let (f, g) = s3_pair();
        let fp = fiber_product(&f, &g).unwrap();
        assert_eq!(fp.total.object_count(), 6);
        assert_eq!(fp.total.arrow_count(), 36);
        assert_eq!(fp.total.pi0().len(), 1);
        assert_eq!(fp.total.isotropy(0).unwrap().group.order(), 1);
        assert!(fp.two_cell.is_natural());
        assert!(morita_equivalent(&fp.total, &FiniteGroupoid::unit("pt"))
            .unwrap()
            .is_some());
    }

    #[test]
    fn fiber_product_along_identities() {
        let bz2 = Arc::new(FiniteGroupoid::classifying(&FiniteGroup::cyclic(2)));
        let id = GroupoidFunctor::identity(&bz2);
        let fp = fiber_product(&id, &id).unwrap();
        assert_eq!(fp.total.object_count(), 2);
        assert_eq!(fp.total.pi0().len(), 1);
        assert_eq!(fp.total.isotropy(0).unwrap().group.order(), 2);
        assert!(morita_equivalent(&fp.total, &bz2).unwrap().is_some());
    }

    #[test]
    fn fiber_product_checks_base_and_cap() {
        let (f, _) = s3_pair();
        let other = GroupoidFunctor::identity(&Arc::new(FiniteGroupoid::unit("pt")));
        assert!(matches!(
            fiber_product(&f, &other),
            Err(Error::MismatchedBase)
        ));
        let (f, g) = s3_pair();
        assert!(matches!(
            fiber_product_with_cap(&f, &g, 35),
            Err(Error::CapExceeded {
                needed: 36,
                cap: 35,
                ..
            })
        ));
    }

    #[test]
    fn inertia_examples() {
        let bs3 = Arc::new(FiniteGroupoid::classifying(&FiniteGroup::symmetric(3)));
        let i = inertia(&bs3);
        assert_eq!(i.groupoid.object_count(), 6);
        let mut orders: Vec<usize> = i
            .groupoid
            .pi0()
            .iter()
            .map(|c| i.groupoid.isotropy(c[0]).unwrap().group.order())
            .collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 3, 6]);
        let bz4 = Arc::new(FiniteGroupoid::classifying(&FiniteGroup::cyclic(4)));
        let i = inertia(&bz4);
        assert_eq!(i.groupoid.pi0().len(), 4);
        let disc = Arc::new(FiniteGroupoid::discrete(&["a", "b", "c"]));
        assert!(is_isomorphism(&inertia(&disc).projection));
    }

    #[test]
    fn inertia_matches_diagonal_self_product() {
        let s3 = FiniteGroup::symmetric(3);
        let swap = GroupAction::cyclic(
            &["a", "b"],
            &crate::perm::Perm::parse_cycles("(1 2)", 2).unwrap(),
        )
        .unwrap()
        .groupoid();
        let g = Arc::new(FiniteGroupoid::classifying(&s3).disjoint_union(&swap));
        let d = diagonal(&g);
        let fp = fiber_product(&d, &d).unwrap();
        assert!(morita_equivalent(&inertia(&g).groupoid, &fp.total)
            .unwrap()
            .is_some());
    }

    #[test]
    fn inertia_of_bg_examples() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let orders: Vec<usize> = inertia_of_bg(&s3)
            .iter()
            .map(|(_, c)| c.group.order())
            .collect();
        assert_eq!(orders, vec![6, 2, 3]);
        let bs3 = Arc::new(FiniteGroupoid::classifying(&s3));
        assert!(
            morita_equivalent(&inertia_of_bg_groupoid(&s3), &inertia(&bs3).groupoid)
                .unwrap()
                .is_some()
        );
        assert_eq!(inertia_of_bg(&Arc::new(FiniteGroup::trivial())).len(), 1);
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        assert!(inertia_of_bg(&z4).iter().all(|(_, c)| c.group.order() == 4));
    }

    #[test]
    fn double_coset_examples() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let id = GroupHom::identity(&s3);
        let dc = double_coset_fiber_product(&id, &id).unwrap();
        assert_eq!(dc.cosets.len(), 1);
        assert!(group_isomorphic(&dc.cosets[0].stabilizer.group, &s3)
            .unwrap()
            .is_some());

        let (f, g) = s3_pair();
        let t = s3.generators()[0];
        let c = s3.generators()[1];
        let z2 = s3.subgroup("Z2", &s3.closure(&[t])).unwrap().inclusion();
        let z3 = s3.subgroup("Z3", &s3.closure(&[c])).unwrap().inclusion();
        let dc = double_coset_fiber_product(&z2, &z3).unwrap();
        assert_eq!(dc.cosets.len(), 1);
        assert_eq!(dc.cosets[0].stabilizer.group.order(), 1);
        let fp = fiber_product(&f, &g).unwrap();
        assert!(morita_equivalent(&dc.groupoid(), &fp.total)
            .unwrap()
            .is_some());

        let triv = Arc::new(FiniteGroup::trivial());
        let e = GroupHom::new(triv.clone(), s3.clone(), vec![0]).unwrap();
        let dc = double_coset_fiber_product(&e, &e).unwrap();
        assert_eq!(dc.cosets.len(), 6);
        assert!(dc.cosets.iter().all(|c| c.stabilizer.group.order() == 1));
    }

    #[test]
    fn action_form_is_isomorphic_to_fiber_product() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let t = s3.generators()[0];
        let c = s3.generators()[1];
        let z2 = s3.subgroup("Z2", &s3.closure(&[t])).unwrap();
        let z3 = s3.subgroup("Z3", &s3.closure(&[c])).unwrap();
        let (i2, i3) = (z2.inclusion(), z3.inclusion());
        let ya = GroupAction::on_point(z2.group.clone());
        let za = GroupAction::on_point(z3.group.clone());
        let xa = GroupAction::on_point(s3.clone());
        let left = EquivariantMap {
            source: &ya,
            hom: &i2,
            points: &[0],
        };
        let right = EquivariantMap {
            source: &za,
            hom: &i3,
            points: &[0],
        };
        let afp = action_fiber_product(left.clone(), right.clone(), &xa).unwrap();
        assert_eq!(afp.triples.len(), 6);
        let fp = fiber_product(
            &action_functor(&left, &xa).unwrap(),
            &action_functor(&right, &xa).unwrap(),
        )
        .unwrap();
        let cmp = afp.comparison(&fp).unwrap();
        assert!(is_isomorphism(&cmp));
    }

    #[test]
    fn action_form_rejects_non_equivariant_maps() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let swap = GroupAction::new(
            z2.clone(),
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let fixed = GroupAction::trivial(z2.clone(), &["a", "b"]);
        let id = GroupHom::identity(&z2);
        let bad = EquivariantMap {
            source: &fixed,
            hom: &id,
            points: &[0, 1],
        };
        let good = EquivariantMap {
            source: &swap,
            hom: &id,
            points: &[0, 1],
        };
        assert!(matches!(
            action_fiber_product(bad, good, &swap),
            Err(Error::NotEquivariant(_))
        ));
    }

    #[test]
    fn residue_gerbe_examples() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let swap = GroupAction::new(
            z2.clone(),
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap()
        .groupoid();
        let (i, b) = residue_gerbe(&swap, 0).unwrap();
        assert_eq!(i.order(), 1);
        let orbit = swap.restrict(&swap.orbit(0).unwrap()).unwrap();
        assert!(morita_equivalent(&b, &orbit).unwrap().is_some());
        let fixed = GroupAction::trivial(z2, &["a", "b"]).groupoid();
        assert_eq!(residue_gerbe(&fixed, 0).unwrap().0.order(), 2);
        assert!(matches!(
            residue_gerbe(&fixed, 5),
            Err(Error::UnknownObject(_))
        ));
    }
}
