//! Equivalences of finite groupoids.
//!
//! Over a discrete carrier an epimorphism of object sets is a surjection up
//! to isomorphism, so weak equivalences are the fully faithful, essentially
//! surjective functors, and two finite groupoids are Morita equivalent iff
//! their components match with isomorphic isotropy groups.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{extend_images, Elem, FiniteGroup, GroupHom, TABLE_LIMIT};
use crate::groupoid::{ArrowId, FiniteGroupoid, GroupoidFunctor, ObjId};

/// Generator cap for isomorphism search.
pub const MAX_ISO_GENERATORS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakEquivalenceFailure {
    NotFaithful {
        x: ObjId,
        y: ObjId,
    },
    NotFull {
        x: ObjId,
        y: ObjId,
        domain_arrows: usize,
        codomain_arrows: usize,
    },
    NotEssentiallySurjective {
        object: ObjId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakEquivalenceCertificate {
    /// Object pairs whose hom-sets were shown to be in bijection.
    pub bijective_pairs: usize,
    /// For each codomain object, a domain object whose image is isomorphic to it.
    pub essential_preimage: Vec<Option<ObjId>>,
    pub failure: Option<WeakEquivalenceFailure>,
}

impl WeakEquivalenceCertificate {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Fully faithful and essentially surjective, checked hom-set by hom-set.
pub fn is_weak_equivalence(f: &GroupoidFunctor) -> WeakEquivalenceCertificate {
    let d = &f.domain;
    let c = &f.codomain;
    let mut cert = WeakEquivalenceCertificate {
        bijective_pairs: 0,
        essential_preimage: vec![None; c.object_count()],
        failure: None,
    };
    'pairs: for x in 0..d.object_count() {
        for y in 0..d.object_count() {
            let src = d.hom(x, y);
            let tgt = c.hom(f.obj_map[x], f.obj_map[y]);
            let mut images: Vec<ArrowId> = src.iter().map(|&a| f.arr_map[a]).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() < src.len() {
                cert.failure = Some(WeakEquivalenceFailure::NotFaithful { x, y });
                break 'pairs;
            }
            if images.len() < tgt.len() {
                cert.failure = Some(WeakEquivalenceFailure::NotFull {
                    x,
                    y,
                    domain_arrows: src.len(),
                    codomain_arrows: tgt.len(),
                });
                break 'pairs;
            }
            cert.bijective_pairs += 1;
        }
    }
    let cs = c.coarse_space();
    let mut hit = vec![None; cs.len()];
    for x in 0..d.object_count() {
        let p = cs.projection[f.obj_map[x]];
        if hit[p].is_none() {
            hit[p] = Some(x);
        }
    }
    for z in 0..c.object_count() {
        cert.essential_preimage[z] = hit[cs.projection[z]];
    }
    if cert.failure.is_none() {
        if let Some(object) = (0..c.object_count()).find(|&z| cert.essential_preimage[z].is_none())
        {
            cert.failure = Some(WeakEquivalenceFailure::NotEssentiallySurjective { object });
        }
    }
    cert
}

/// Surjective on objects, and arrows of the domain in bijection with the
/// pulled-back arrows `(X' x X') x_(X x X) R`.
pub fn is_elementary_morita(f: &GroupoidFunctor) -> bool {
    let d = &f.domain;
    let c = &f.codomain;
    let mut hit = vec![false; c.object_count()];
    for &y in &f.obj_map {
        hit[y] = true;
    }
    if hit.iter().any(|h| !h) {
        return false;
    }
    // each pulled-back arrow (x', y', r) must have exactly one preimage
    for x in 0..d.object_count() {
        for y in 0..d.object_count() {
            let pulled = c.hom(f.obj_map[x], f.obj_map[y]);
            let mut images: Vec<ArrowId> = d.hom(x, y).iter().map(|&a| f.arr_map[a]).collect();
            images.sort_unstable();
            if images.len() != pulled.len() || images != pulled {
                return false;
            }
        }
    }
    true
}

/// Bijective on objects and on arrows.
pub fn is_isomorphism(f: &GroupoidFunctor) -> bool {
    let bij = |map: &[usize], n: usize| {
        let mut seen = vec![false; n];
        map.len() == n
            && map.iter().all(|&x| {
                let fresh = !seen[x];
                seen[x] = true;
                fresh
            })
    };
    bij(&f.obj_map, f.codomain.object_count()) && bij(&f.arr_map, f.codomain.arrow_count())
}

#[derive(Debug, Clone)]
pub struct Skeleton {
    pub groupoid: Arc<FiniteGroupoid>,
    pub inclusion: GroupoidFunctor,
    /// Least object of each component, in component order.
    pub representatives: Vec<ObjId>,
    /// For each object of the original, the least arrow to its representative.
    pub retraction: Vec<ArrowId>,
}

/// One object per component, the least one; the full subgroupoid on them.
pub fn skeleton(g: &Arc<FiniteGroupoid>) -> Skeleton {
    let classes = g.pi0();
    let reps: Vec<ObjId> = classes.iter().map(|c| c[0]).collect();
    let (sk, objs, arrs) = g
        .restrict_with_inclusion(&reps)
        .expect("representatives exist");
    let mut retraction = vec![0; g.object_count()];
    for class in &classes {
        for &x in class {
            retraction[x] = g.hom(x, class[0])[0];
        }
    }
    let sk = Arc::new(sk);
    let inclusion = GroupoidFunctor::new_unchecked(Arc::clone(&sk), Arc::clone(g), objs, arrs);
    Skeleton {
        groupoid: sk,
        inclusion,
        representatives: reps,
        retraction,
    }
}

/// An explicit isomorphism `a -> b`, or `None` if the groups are not
/// isomorphic. Screens by order, element-order profile, derived subgroup
/// and class count, then backtracks over images of a small generating set.
pub fn group_isomorphic(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Result<Option<GroupHom>> {
    if a.order() != b.order() || a.order_profile() != b.order_profile() {
        return Ok(None);
    }
    if a.same_law(b) {
        return Ok(Some(GroupHom::new_unchecked(
            Arc::clone(a),
            Arc::clone(b),
            a.elements().collect(),
        )));
    }
    if a.is_abelian() != b.is_abelian()
        || a.derived_subgroup_order() != b.derived_subgroup_order()
        || a.conjugacy_classes().len() != b.conjugacy_classes().len()
    {
        return Ok(None);
    }
    if a.order() > TABLE_LIMIT {
        return Err(Error::CapExceeded {
            what: "isomorphism search group order",
            needed: a.order(),
            cap: TABLE_LIMIT,
        });
    }
    let gens = a.greedy_generators();
    if gens.len() > MAX_ISO_GENERATORS {
        return Err(Error::CapExceeded {
            what: "isomorphism search generators",
            needed: gens.len(),
            cap: MAX_ISO_GENERATORS,
        });
    }
    let b_orders: Vec<usize> = b.elements().map(|x| b.element_order(x)).collect();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&s| {
            let o = a.element_order(s);
            b.elements()
                .filter(|&x| b_orders[x as usize] == o)
                .collect()
        })
        .collect();
    let mut chosen = Vec::with_capacity(gens.len());
    Ok(iso_search(a, b, &gens, &candidates, &mut chosen)
        .map(|image| GroupHom::new_unchecked(Arc::clone(a), Arc::clone(b), image)))
}

fn iso_search(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    chosen: &mut Vec<Elem>,
) -> Option<Vec<Elem>> {
    let depth = chosen.len();
    if depth == gens.len() {
        let image = extend_images(a, b, gens, chosen)?;
        let mut seen = vec![false; b.order()];
        for &x in &image {
            if seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        return Some(image);
    }
    for &x in &candidates[depth] {
        // pairwise products must keep their orders
        let consistent = (0..depth).all(|i| {
            a.element_order(a.mul(gens[i], gens[depth])) == b.element_order(b.mul(chosen[i], x))
        });
        if !consistent {
            continue;
        }
        chosen.push(x);
        if let Some(found) = iso_search(a, b, gens, candidates, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Matching of components with isomorphisms of their isotropy groups.
#[derive(Debug, Clone)]
pub struct MoritaWitness {
    /// `(rep in g, rep in h)` per component of `g`, in component order.
    pub matching: Vec<(ObjId, ObjId)>,
    /// Isomorphism from the isotropy group of the `g` representative to that of the `h` one.
    pub isomorphisms: Vec<GroupHom>,
}

/// Decides Morita equivalence by matching components with isomorphic isotropy.
pub fn morita_equivalent(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Result<Option<MoritaWitness>> {
    let gc = g.pi0();
    let hc = h.pi0();
    if gc.len() != hc.len() {
        return Ok(None);
    }
    let h_iso: Vec<_> = hc.iter().map(|c| h.isotropy(c[0]).unwrap()).collect();
    let mut used = vec![false; hc.len()];
    let mut matching = Vec::new();
    let mut isomorphisms = Vec::new();
    for class in &gc {
        let gi = g.isotropy(class[0]).unwrap();
        let mut found = None;
        for (j, hi) in h_iso.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(iso) = group_isomorphic(&gi.group, &hi.group)? {
                found = Some((j, iso));
                break;
            }
        }
        match found {
            Some((j, iso)) => {
                used[j] = true;
                matching.push((class[0], hc[j][0]));
                isomorphisms.push(iso);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(MoritaWitness {
        matching,
        isomorphisms,
    }))
}

impl MoritaWitness {
    /// The span `g <- skeleton(g) -> h`; both legs are weak equivalences.
    pub fn span(
        &self,
        g: &Arc<FiniteGroupoid>,
        h: &Arc<FiniteGroupoid>,
    ) -> (GroupoidFunctor, GroupoidFunctor) {
        let sk = skeleton(g);
        let left = sk.inclusion.clone();
        let mut obj_map = vec![0; sk.groupoid.object_count()];
        let mut arr_map = vec![0; sk.groupoid.arrow_count()];
        for (i, &(gr, hr)) in self.matching.iter().enumerate() {
            let gi = g.isotropy(gr).unwrap();
            let hi = h.isotropy(hr).unwrap();
            let local = sk.representatives.iter().position(|&r| r == gr).unwrap();
            obj_map[local] = hr;
            for (a, &orig) in left.arr_map.iter().enumerate() {
                if g.src(orig) == gr {
                    let e = gi.element_of(orig).unwrap();
                    arr_map[a] = hi.labels[self.isomorphisms[i].apply(e) as usize];
                }
            }
        }
        let right = GroupoidFunctor::new_unchecked(
            Arc::clone(&sk.groupoid),
            Arc::clone(h),
            obj_map,
            arr_map,
        );
        (left, right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{action_groupoid, GroupAction};

    fn grp(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    fn swap() -> Arc<FiniteGroupoid> {
        let z2 = grp(FiniteGroup::cyclic(2));
        Arc::new(
            action_groupoid(
                z2,
                vec!["a".into(), "b".into()],
                vec![vec![0, 1], vec![1, 0]],
            )
            .unwrap(),
        )
    }

    #[test]
    fn weak_equivalence_examples() {
        let s = swap();
        assert!(is_weak_equivalence(&GroupoidFunctor::identity(&s)).holds());
        // the representative's full subgroupoid includes as an equivalence
        let sk = skeleton(&s);
        assert!(is_weak_equivalence(&sk.inclusion).holds());
        // BZ2 -> BS3 is not full
        let s3 = grp(FiniteGroup::symmetric(3));
        let sub = s3.subgroup("Z2", &[0, s3.generators()[0]]).unwrap();
        let inc = GroupoidFunctor::from_subgroup(&sub);
        let cert = is_weak_equivalence(&inc);
        assert_eq!(
            cert.failure,
            Some(WeakEquivalenceFailure::NotFull {
                x: 0,
                y: 0,
                domain_arrows: 2,
                codomain_arrows: 6
            })
        );
    }

    #[test]
    fn skeleton_examples() {
        let sk = skeleton(&swap());
        assert_eq!(
            (sk.groupoid.object_count(), sk.groupoid.arrow_count()),
            (1, 1)
        );
        assert_eq!(sk.groupoid.object_name(0), "a");
        let bs3 = Arc::new(FiniteGroupoid::classifying(&FiniteGroup::symmetric(3)));
        assert_eq!(*skeleton(&bs3).groupoid, *bs3);
        let both = Arc::new(bs3.disjoint_union(&swap()));
        let sk = skeleton(&both);
        assert_eq!(sk.representatives, vec![0, 1]);
        assert_eq!(sk.groupoid.arrow_count(), 7);
        assert!(is_weak_equivalence(&sk.inclusion).holds());
    }

    #[test]
    fn elementary_morita_examples() {
        let s = swap();
        assert!(is_elementary_morita(&GroupoidFunctor::identity(&s)));
        let point = Arc::new(FiniteGroupoid::unit("pt"));
        let collapse = GroupoidFunctor::new(s.clone(), point, vec![0, 0], vec![0; 4]).unwrap();
        assert!(is_elementary_morita(&collapse));
        let s3 = grp(FiniteGroup::symmetric(3));
        let sub = s3.subgroup("Z2", &[0, s3.generators()[0]]).unwrap();
        assert!(!is_elementary_morita(&GroupoidFunctor::from_subgroup(&sub)));
    }

    #[test]
    fn group_isomorphism_examples() {
        let s3 = grp(FiniteGroup::symmetric(3));
        let z6 = grp(FiniteGroup::cyclic(6));
        assert!(group_isomorphic(&s3, &z6).unwrap().is_none());
        let v4 = grp(FiniteGroup::klein_four());
        let z4 = grp(FiniteGroup::cyclic(4));
        assert!(group_isomorphic(&v4, &z4).unwrap().is_none());
        let id = group_isomorphic(&s3, &s3).unwrap().unwrap();
        assert_eq!(id.images(), &[0, 1, 2, 3, 4, 5]);
        // D3 and S3 share nothing but the isomorphism type
        let d3 = grp(FiniteGroup::dihedral(3));
        let iso = group_isomorphic(&d3, &s3).unwrap().unwrap();
        assert!(GroupHom::new(d3, s3, iso.images().to_vec())
            .unwrap()
            .is_injective());
        // D4 and Q8 have the same order but different order profiles
        let d4 = grp(FiniteGroup::dihedral(4));
        let q8 = grp(FiniteGroup::quaternion());
        assert!(group_isomorphic(&d4, &q8).unwrap().is_none());
    }

    #[test]
    fn morita_examples() {
        let point = FiniteGroupoid::unit("pt");
        let w = morita_equivalent(&swap(), &point).unwrap().unwrap();
        assert_eq!(w.matching, vec![(0, 0)]);
        let bs3 = FiniteGroupoid::classifying(&FiniteGroup::symmetric(3));
        let bz6 = FiniteGroupoid::classifying(&FiniteGroup::cyclic(6));
        assert!(morita_equivalent(&bs3, &bz6).unwrap().is_none());
        let g = Arc::new(bs3.disjoint_union(&swap()));
        let sk = skeleton(&g);
        assert!(morita_equivalent(&g, &sk.groupoid).unwrap().is_some());
    }

    #[test]
    fn witness_span_legs_are_weak_equivalences() {
        let z3 = grp(FiniteGroup::cyclic(3));
        let free = GroupAction::new(
            z3.clone(),
            vec!["0".into(), "1".into(), "2".into()],
            (0..3)
                .map(|g| (0..3).map(|x| (x + g) % 3).collect())
                .collect(),
        )
        .unwrap()
        .groupoid();
        let g = Arc::new(FiniteGroupoid::classifying(&z3).disjoint_union(&free));
        let h =
            Arc::new(FiniteGroupoid::unit("p").disjoint_union(&FiniteGroupoid::classifying(&z3)));
        let w = morita_equivalent(&g, &h).unwrap().unwrap();
        let (left, right) = w.span(&g, &h);
        GroupoidFunctor::new(
            right.domain.clone(),
            right.codomain.clone(),
            right.obj_map.clone(),
            right.arr_map.clone(),
        )
        .unwrap();
        assert!(is_weak_equivalence(&left).holds());
        assert!(is_weak_equivalence(&right).holds());
    }
}
