//! Oracle-backed self-test: every derived example, then the property suites.

use std::sync::Arc;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::constructions::{
    action_fiber_product, action_functor, double_coset_fiber_product, fiber_product, inertia,
    inertia_of_bg, residue_gerbe, EquivariantMap,
};
use crate::covering::{
    covering_from_action, enumerate_actions, inertia_cartesian_check, is_connected_cover,
    monodromy, universal_cover_ball, validate_action, Pi1Action,
};
use crate::error::Result;
use crate::formats::{self, ActionDoc, CoverDoc, Document, Report};
use crate::gog::{
    inertia_gog, omega_injectivity_certificate, pi1_presentation, reduce_word, syllable_length,
    GraphOfGroups, PresWord,
};
use crate::group::{FiniteGroup, GroupHom};
use crate::groupoid::{
    enumerate_functors, validate_groupoid, FiniteGroupoid, GroupAction, GroupoidFunctor,
    NaturalTransformation,
};
use crate::morita::{
    group_isomorphic, is_elementary_morita, is_weak_equivalence, morita_equivalent, skeleton,
};
use crate::oracle;
use crate::perm::Perm;

/// Default seed for every randomized suite.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

type Outcome = std::result::Result<String, String>;
/// Named checks, run in order.
type Checks = Vec<(&'static str, Box<dyn Fn() -> Outcome>)>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn swap_groupoid() -> FiniteGroupoid {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    GroupAction::new(
        z2,
        vec!["a".into(), "b".into()],
        vec![vec![0, 1], vec![1, 0]],
    )
    .expect("swap action")
    .groupoid()
}

fn s3_subgroup_inclusions() -> (Arc<FiniteGroup>, GroupHom, GroupHom) {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let t = s3.generators()[0];
    let c = s3.generators()[1];
    let z2 = s3.subgroup("Z2", &s3.closure(&[t])).expect("subgroup");
    let z3 = s3.subgroup("Z3", &s3.closure(&[c])).expect("subgroup");
    (s3, z2.inclusion(), z3.inclusion())
}

fn bg_functor(h: &GroupHom, codomain: &Arc<FiniteGroupoid>) -> GroupoidFunctor {
    let mut f = GroupoidFunctor::from_group_hom(h);
    f.codomain = Arc::clone(codomain);
    f
}

fn dinfty() -> Arc<GraphOfGroups> {
    Arc::new(GraphOfGroups::cyclic_segment(2, 2, 1).expect("segment"))
}

fn modular() -> Arc<GraphOfGroups> {
    Arc::new(GraphOfGroups::cyclic_segment(2, 3, 1).expect("segment"))
}

fn cycles(s: &str, n: usize) -> Perm {
    Perm::parse_cycles(s, n).expect("cycle literal")
}

fn groupoid_checks() -> Checks {
    vec![
        (
            "groupoid: action groupoid of S3 on a point validates",
            Box::new(|| {
                let g = GroupAction::on_point(Arc::new(FiniteGroup::symmetric(3))).groupoid();
                let r = validate_groupoid(&g.to_data());
                ensure(r.is_ok(), r.to_string())?;
                Ok(format!("{} arrows", g.arrow_count()))
            }),
        ),
        (
            "groupoid: Z2 swap has 2 objects, 4 arrows, hom-sets of size 1",
            Box::new(|| {
                let g = swap_groupoid();
                let sizes: Vec<usize> = (0..2)
                    .flat_map(|x| (0..2).map(move |y| (x, y)))
                    .map(|(x, y)| g.hom(x, y).len())
                    .collect();
                ensure(
                    g.object_count() == 2 && g.arrow_count() == 4 && sizes == [1, 1, 1, 1],
                    format!("{sizes:?}"),
                )?;
                Ok("2 objects, 4 arrows".into())
            }),
        ),
        (
            "groupoid: Z2 swap isotropy at a is trivial",
            Box::new(|| {
                let iso = lift(swap_groupoid().isotropy(0))?;
                ensure(
                    iso.group.order() == 1,
                    format!("order {}", iso.group.order()),
                )?;
                Ok("order 1".into())
            }),
        ),
        (
            "groupoid: Z3 on 6 points by (123)(456) has 2 classes",
            Box::new(|| {
                let pts = ["1", "2", "3", "4", "5", "6"];
                let a = lift(GroupAction::cyclic(&pts, &cycles("(1 2 3)(4 5 6)", 6)))?;
                let n = a.groupoid().coarse_space().len();
                ensure(n == 2, format!("{n} classes"))?;
                Ok("2 classes".into())
            }),
        ),
        (
            "groupoid: Z2 swap coarse space is a point and restricts to the unit groupoid",
            Box::new(|| {
                let g = swap_groupoid();
                ensure(g.coarse_space().len() == 1, "coarse space is not a point")?;
                let r = lift(g.restrict(&[0]))?;
                ensure(
                    r == FiniteGroupoid::unit("a"),
                    "restriction is not the unit groupoid",
                )?;
                Ok("point".into())
            }),
        ),
        (
            "groupoid: conjugation on the identity functor of BS3 is natural",
            Box::new(|| {
                let b = Arc::new(FiniteGroupoid::classifying(&FiniteGroup::symmetric(3)));
                let id = GroupoidFunctor::identity(&b);
                for g in 0..b.arrow_count() {
                    // component g from the identity to conjugation by g
                    let conj = GroupoidFunctor::new(
                        Arc::clone(&b),
                        Arc::clone(&b),
                        vec![0],
                        (0..b.arrow_count())
                            .map(|u| b.compose(b.compose(b.inverse(g), u), g))
                            .collect(),
                    );
                    let conj = lift(conj)?;
                    let nt = NaturalTransformation {
                        source: id.clone(),
                        target: conj,
                        component: vec![g],
                    };
                    ensure(
                        nt.is_natural(),
                        format!("conjugation by {g} is not natural"),
                    )?;
                }
                Ok("6 of 6".into())
            }),
        ),
    ]
}

fn construction_checks() -> Checks {
    vec![
        (
            "constructions: BZ2 x_BS3 BZ3 is 6 objects, connected, trivial isotropy",
            Box::new(|| {
                let (s3, i2, i3) = s3_subgroup_inclusions();
                let base = Arc::new(FiniteGroupoid::classifying(&s3));
                let (f, g) = (bg_functor(&i2, &base), bg_functor(&i3, &base));
                let fp = lift(fiber_product(&f, &g))?;
                oracle::check_fiber_product(&f, &g, &fp)?;
                let c = oracle::census(&fp.total);
                ensure(c.objects == 6 && c.components == [(6, 1)], format!("{c:?}"))?;
                ensure(
                    lift(morita_equivalent(&fp.total, &FiniteGroupoid::unit("*")))?.is_some(),
                    "not a point",
                )?;
                Ok(format!("{c:?}"))
            }),
        ),
        (
            "constructions: BZ2 x_BZ2 BZ2 along identities is BZ2",
            Box::new(|| {
                let z2 = Arc::new(FiniteGroup::cyclic(2));
                let id = GroupHom::identity(&z2);
                let base = Arc::new(FiniteGroupoid::classifying(&z2));
                let (f, g) = (bg_functor(&id, &base), bg_functor(&id, &base));
                let fp = lift(fiber_product(&f, &g))?;
                oracle::check_fiber_product(&f, &g, &fp)?;
                let c = oracle::census(&fp.total);
                ensure(c.objects == 2 && c.components == [(2, 2)], format!("{c:?}"))?;
                Ok(format!("{c:?}"))
            }),
        ),
        (
            "constructions: inertia of BS3 has 6 objects in 3 components of isotropy 6, 2, 3",
            Box::new(|| {
                let s3 = FiniteGroup::symmetric(3);
                let i = inertia(&Arc::new(FiniteGroupoid::classifying(&s3)));
                let c = oracle::census(&i.groupoid);
                let mut expected: Vec<(usize, usize)> = oracle::conjugation_orbits(&s3)
                    .iter()
                    .map(|&(_, cent)| (s3.order() / cent, cent))
                    .collect();
                expected.sort_unstable();
                ensure(
                    c.objects == 6 && c.components == expected,
                    format!("{c:?} vs {expected:?}"),
                )?;
                Ok(format!("{:?}", c.components))
            }),
        ),
        (
            "constructions: inertia of BS3 by classes has centralizers 6, 2, 3",
            Box::new(|| {
                let s3 = Arc::new(FiniteGroup::symmetric(3));
                let got: Vec<(u32, usize)> = inertia_of_bg(&s3)
                    .iter()
                    .map(|(a, c)| (*a, c.group.order()))
                    .collect();
                let want = oracle::conjugation_orbits(&s3);
                ensure(
                    got == want && want.iter().map(|c| c.1).collect::<Vec<_>>() == [6, 2, 3],
                    format!("{got:?}"),
                )?;
                Ok(format!("{got:?}"))
            }),
        ),
        (
            "constructions: <(12)> and <(123)> have one double coset in S3 with trivial stabilizer",
            Box::new(|| {
                let (s3, i2, i3) = s3_subgroup_inclusions();
                let d = lift(double_coset_fiber_product(&i2, &i3))?;
                let brute = oracle::double_cosets(&s3, &i2.image_set(), &i3.image_set());
                let got: Vec<(Vec<u32>, usize)> = d
                    .cosets
                    .iter()
                    .map(|c| (c.elements.clone(), c.stabilizer.group.order()))
                    .collect();
                ensure(
                    got == brute && got.len() == 1 && got[0].1 == 1,
                    format!("{got:?} vs {brute:?}"),
                )?;
                Ok("1 coset, |C| = 1".into())
            }),
        ),
        (
            "constructions: action form on points matches the fiber product",
            Box::new(|| {
                let (s3, i2, i3) = s3_subgroup_inclusions();
                let xa = GroupAction::on_point(Arc::clone(&s3));
                let ya = GroupAction::on_point(Arc::clone(&i2.domain));
                let za = GroupAction::on_point(Arc::clone(&i3.domain));
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
                let afp = lift(action_fiber_product(left.clone(), right.clone(), &xa))?;
                let fp = lift(fiber_product(
                    &lift(action_functor(&left, &xa))?,
                    &lift(action_functor(&right, &xa))?,
                ))?;
                let cmp = lift(afp.comparison(&fp))?;
                ensure(
                    crate::morita::is_isomorphism(&cmp),
                    "comparison is not an isomorphism",
                )?;
                ensure(
                    afp.triples.len() == 6,
                    format!("{} points", afp.triples.len()),
                )?;
                let d = lift(double_coset_fiber_product(&i2, &i3))?;
                ensure(
                    lift(morita_equivalent(&afp.groupoid, &d.groupoid()))?.is_some(),
                    "action form disagrees with double cosets",
                )?;
                Ok("6 points, isomorphic".into())
            }),
        ),
        (
            "constructions: residue gerbe of the swap at a is a point",
            Box::new(|| {
                let g = swap_groupoid();
                let (iso, b) = lift(residue_gerbe(&g, 0))?;
                let orbit = lift(g.restrict(&lift(g.orbit(0))?))?;
                ensure(iso.order() == 1 && b.arrow_count() == 1, "nontrivial gerbe")?;
                ensure(
                    lift(morita_equivalent(&orbit, &FiniteGroupoid::unit("*")))?.is_some(),
                    "orbit is not a point",
                )?;
                Ok("trivial".into())
            }),
        ),
    ]
}

fn morita_checks() -> Checks {
    vec![
        (
            "morita: a class representative includes into a connected groupoid as a weak equivalence",
            Box::new(|| {
                let g = Arc::new(FiniteGroupoid::indiscrete(&["x", "y", "z"]));
                let sk = skeleton(&g);
                let cert = is_weak_equivalence(&sk.inclusion);
                ensure(cert.holds(), format!("{:?}", cert.failure))?;
                Ok(format!("{} pairs", cert.bijective_pairs))
            }),
        ),
        (
            "morita: BZ2 into BS3 is neither full nor elementary",
            Box::new(|| {
                let (s3, i2, _) = s3_subgroup_inclusions();
                let f = bg_functor(&i2, &Arc::new(FiniteGroupoid::classifying(&s3)));
                ensure(!is_weak_equivalence(&f).holds(), "accepted as a weak equivalence")?;
                ensure(!is_elementary_morita(&f), "accepted as elementary")?;
                Ok("2 vs 6 arrows".into())
            }),
        ),
        (
            "morita: the 2-object contractible groupoid maps elementarily to a point",
            Box::new(|| {
                let g = Arc::new(FiniteGroupoid::indiscrete(&["x", "y"]));
                let p = Arc::new(FiniteGroupoid::unit("*"));
                let f = lift(GroupoidFunctor::new(g, p, vec![0, 0], vec![0; 4]))?;
                ensure(is_elementary_morita(&f), "rejected")?;
                Ok("4 arrows".into())
            }),
        ),
        (
            "morita: skeletons of the swap and of BS3 + swap",
            Box::new(|| {
                let swap = Arc::new(swap_groupoid());
                let sk = skeleton(&swap);
                ensure(sk.groupoid.object_count() == 1 && sk.groupoid.arrow_count() == 1, "swap skeleton")?;
                let both = Arc::new(FiniteGroupoid::classifying(&FiniteGroup::symmetric(3)).disjoint_union(&swap));
                let sk = skeleton(&both);
                let c = oracle::census(&sk.groupoid);
                ensure(c.components == [(1, 1), (1, 6)], format!("{c:?}"))?;
                Ok(format!("{:?}", c.components))
            }),
        ),
        (
            "morita: S3 and Z6 are not isomorphic; swap ~ point; BS3 !~ BZ6",
            Box::new(|| {
                let s3 = Arc::new(FiniteGroup::symmetric(3));
                let z6 = Arc::new(FiniteGroup::cyclic(6));
                ensure(lift(group_isomorphic(&s3, &z6))?.is_none(), "S3 = Z6")?;
                ensure(
                    lift(morita_equivalent(&swap_groupoid(), &FiniteGroupoid::unit("*")))?.is_some(),
                    "swap !~ point",
                )?;
                ensure(
                    lift(morita_equivalent(
                        &FiniteGroupoid::classifying(&s3),
                        &FiniteGroupoid::classifying(&z6),
                    ))?
                    .is_none(),
                    "BS3 ~ BZ6",
                )?;
                Ok("ok".into())
            }),
        ),
    ]
}

fn reduce_text(
    g: &Arc<GraphOfGroups>,
    text: &str,
) -> std::result::Result<(PresWord, PresWord, usize), String> {
    let p = lift(pi1_presentation(g, g.basepoint()))?;
    let w = lift(p.parse_word(text))?;
    let r = lift(reduce_word(g, g.tables(), &p.word_to_loop(g, &w)))?;
    Ok((w, lift(p.reduced_to_word(g, &r))?, syllable_length(&r)))
}

fn gog_checks() -> Checks {
    vec![
        (
            "gog: a a b reduces to b in Z2 * Z2",
            Box::new(|| {
                let (w, r, _) = reduce_text(&dinfty(), "a a b")?;
                let want = oracle::free_product_rewrite(&[2, 2], &w.expanded());
                ensure(r.0 == want && r.0 == [(1, 1)], format!("{r:?} vs {want:?}"))?;
                Ok("b".into())
            }),
        ),
        (
            "gog: (ab)^6 has syllable length 12 in Z2 * Z3",
            Box::new(|| {
                let (w, r, len) = reduce_text(&modular(), "a b a b a b a b a b a b")?;
                let want = oracle::free_product_rewrite(&[2, 3], &w.0);
                ensure(
                    len == 12 && want.len() == 12 && r.0 == want,
                    format!("length {len}"),
                )?;
                Ok("12".into())
            }),
        ),
        (
            "gog: abab and baba differ in Z2 * Z2",
            Box::new(|| {
                let (_, x, _) = reduce_text(&dinfty(), "abab")?;
                let (_, y, _) = reduce_text(&dinfty(), "baba")?;
                ensure(x != y, "equal")?;
                Ok("distinct".into())
            }),
        ),
        (
            "gog: Bass-Serre balls of (Z2, Z3, 1) have 3 and 7 vertices",
            Box::new(|| {
                let g = modular();
                let sizes: Vec<usize> = (1..=2)
                    .map(|r| universal_cover_ball(&g, r).map(|b| b.len()))
                    .collect::<Result<_>>()
                    .map_err(|e| e.to_string())?;
                ensure(sizes == [3, 7], format!("{sizes:?}"))?;
                for (name, h) in oracle::omega_corpus() {
                    for r in 0..4 {
                        let got = lift(universal_cover_ball(&h, r))?.len();
                        let want = oracle::ball_size(&h, r);
                        ensure(got == want, format!("{name} radius {r}: {got} vs {want}"))?;
                    }
                }
                Ok("3, 7".into())
            }),
        ),
        (
            "gog: inertia of doubled segments matches inertia of BG",
            Box::new(|| {
                for (grp, v, e) in [
                    (FiniteGroup::cyclic(2), 4, 2),
                    (FiniteGroup::symmetric(3), 6, 3),
                ] {
                    let ids: Vec<u32> = grp.elements().collect();
                    let g = lift(GraphOfGroups::segment(
                        grp.clone(),
                        grp.clone(),
                        grp.clone(),
                        ids.clone(),
                        ids,
                    ))?;
                    let i = lift(inertia_gog(&g))?;
                    ensure(
                        i.vertices().len() == v && i.edges().len() == e,
                        format!("{} vertices", i.vertices().len()),
                    )?;
                    let mut want: Vec<usize> = oracle::conjugation_orbits(&grp)
                        .iter()
                        .map(|c| c.1)
                        .collect();
                    want.extend(want.clone());
                    let got: Vec<usize> = i.vertices().iter().map(|x| x.group.order()).collect();
                    ensure(got == want, format!("{got:?} vs {want:?}"))?;
                }
                Ok("4 + 2, 6 + 3".into())
            }),
        ),
        (
            "gog: HNN loop with A = G passes the injectivity certificate",
            Box::new(|| {
                let z3 = FiniteGroup::cyclic(3);
                let g = lift(GraphOfGroups::hnn(
                    z3.clone(),
                    z3,
                    vec![0, 1, 2],
                    vec![0, 1, 2],
                ))?;
                let r = lift(omega_injectivity_certificate(&g))?;
                ensure(r.passed(), format!("{:?}", r.counterexample))?;
                Ok(format!("{} checked", r.total_checked()))
            }),
        ),
    ]
}

fn action(
    g: &Arc<GraphOfGroups>,
    degree: usize,
    images: &[(&str, &str)],
) -> std::result::Result<Pi1Action, String> {
    let p = Arc::new(lift(pi1_presentation(g, g.basepoint()))?);
    let images: Vec<(&str, Perm)> = images
        .iter()
        .map(|&(s, c)| (s, cycles(c, degree)))
        .collect();
    lift(Pi1Action::from_symbols(p, degree, &images))
}

fn covering_checks() -> Checks {
    vec![
        (
            "covering: a, b -> (12) is a valid connected action of Z2 * Z2",
            Box::new(|| {
                let a = action(&dinfty(), 2, &[("a", "(1 2)"), ("b", "(1 2)")])?;
                ensure(
                    validate_action(&a).valid && is_connected_cover(&a),
                    "rejected",
                )?;
                Ok("valid".into())
            }),
        ),
        (
            "covering: the degree-2 cover of Z2 * Z2 is a circle with trivial groups",
            Box::new(|| {
                let g = dinfty();
                let a = action(&g, 2, &[("a", "(1 2)"), ("b", "(1 2)")])?;
                let c = lift(covering_from_action(&g, &a))?;
                let t = &c.total;
                ensure(
                    t.vertices().len() == 2 && t.edges().len() == 2 && t.betti_number() == 1,
                    "not a 2-cycle",
                )?;
                ensure(
                    t.vertices().iter().all(|v| v.group.order() == 1),
                    "nontrivial vertex group",
                )?;
                ensure(lift(monodromy(&c))?.is_conjugate(&a), "monodromy differs")?;
                Ok("2-cycle".into())
            }),
        ),
        (
            "covering: the degree-3 cover of Z2 * Z3 has groups 1, Z2 over v1 and 1 over v2",
            Box::new(|| {
                let g = modular();
                let a = action(&g, 3, &[("a", "(1 2)"), ("b", "(1 2 3)")])?;
                let c = lift(covering_from_action(&g, &a))?;
                let orders: Vec<(usize, usize)> = c
                    .vertex_over
                    .iter()
                    .zip(c.total.vertices())
                    .map(|(&v, x)| (v, x.group.order()))
                    .collect();
                ensure(orders == [(0, 1), (0, 2), (1, 1)], format!("{orders:?}"))?;
                ensure(
                    c.total.edges().len() == 3
                        && c.total.edges().iter().all(|e| e.group.order() == 1),
                    "edges",
                )?;
                ensure(
                    c.total.euler_characteristic() == Ratio::new(-1, 2),
                    "euler characteristic",
                )?;
                ensure(lift(monodromy(&c))?.is_conjugate(&a), "monodromy differs")?;
                Ok(format!("{orders:?}"))
            }),
        ),
        (
            "covering: stabilizers at points 3 and 1 over the Z2 vertex match the cover",
            Box::new(|| {
                let g = modular();
                let a = action(&g, 3, &[("a", "(1 2)"), ("b", "(1 2 3)")])?;
                let p3 = lift(inertia_cartesian_check(&g, &a, 0, 2))?;
                let p1 = lift(inertia_cartesian_check(&g, &a, 0, 0))?;
                ensure(p3.holds && p3.stabilizer_order == 2, format!("{p3:?}"))?;
                ensure(p1.holds && p1.stabilizer_order == 1, format!("{p1:?}"))?;
                Ok("Z2 at 3, 1 at 1".into())
            }),
        ),
        (
            "covering: transitive actions of degree at most 2 number 2 for Z and 4 for Z2 * Z2",
            Box::new(|| {
                let circle = Arc::new(lift(GraphOfGroups::hnn(
                    FiniteGroup::trivial(),
                    FiniteGroup::trivial(),
                    vec![0],
                    vec![0],
                ))?);
                let pz = Arc::new(lift(pi1_presentation(&circle, 0))?);
                let pd = Arc::new(lift(pi1_presentation(&dinfty(), 0))?);
                let (nz, nd) = (
                    lift(enumerate_actions(&pz, 2))?.len(),
                    lift(enumerate_actions(&pd, 2))?.len(),
                );
                ensure(nz == 2 && nd == 4, format!("{nz}, {nd}"))?;
                Ok("2, 4".into())
            }),
        ),
    ]
}

fn format_checks() -> Checks {
    vec![
        (
            "formats: the Euler characteristic of (Z2, Z3, 1) is -1/6 exactly",
            Box::new(|| {
                let v = formats::rational_json(modular().euler_characteristic());
                ensure(v == json!({"num": -1, "den": 6}), v.to_string())?;
                Ok(v.to_string())
            }),
        ),
        (
            "formats: the radius-1 ball of (Z2, Z3, 1) has 3 DOT nodes",
            Box::new(|| {
                let g = modular();
                let b = lift(universal_cover_ball(&g, 1))?;
                let dot = formats::tree_ball_dot(&g, &b);
                let again = formats::tree_ball_dot(&g, &lift(universal_cover_ball(&g, 1))?);
                ensure(
                    dot.matches("|G|=").count() == oracle::ball_size(&g, 1) && dot == again,
                    dot.clone(),
                )?;
                Ok("3 nodes".into())
            }),
        ),
    ]
}

/// Up to `k` functors spread evenly over the full enumeration.
fn spread(all: Vec<GroupoidFunctor>, k: usize) -> Vec<GroupoidFunctor> {
    if all.len() <= k {
        return all;
    }
    let n = all.len();
    (0..k)
        .map(|i| all[i * (n - 1) / (k - 1).max(1)].clone())
        .collect()
}

/// Fiber products of functor pairs into each small groupoid, checked
/// against the brute-force oracle: for every domain and codomain, up to
/// `per_pair` functors spread over all of them, `usize::MAX` meaning every
/// pair. Returns the number of instances.
pub fn fiber_product_suite(per_pair: usize) -> std::result::Result<usize, String> {
    let corpus = oracle::small_groupoids();
    let mut instances = 0;
    for (cn, c) in &corpus {
        let into_c: Vec<Vec<GroupoidFunctor>> = corpus
            .iter()
            .map(|(_, a)| spread(enumerate_functors(a, c, usize::MAX), per_pair))
            .collect();
        for ((an, _), fs) in corpus.iter().zip(&into_c) {
            for ((bn, _), gs) in corpus.iter().zip(&into_c) {
                for f in fs {
                    for g in gs {
                        let fp = lift(fiber_product(f, g))?;
                        oracle::check_fiber_product(f, g, &fp)
                            .map_err(|e| format!("{an} -> {cn} <- {bn}: {e}"))?;
                        instances += 1;
                    }
                }
            }
        }
    }
    Ok(instances)
}

/// Random words on every corpus graph checked for idempotence, relation
/// triviality and inverse cancellation.
pub fn reduction_suite(seed: u64, words: usize) -> std::result::Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus = oracle::omega_corpus();
    for i in 0..words {
        let (name, g) = &corpus[i % corpus.len()];
        let len = 1 + i % 16;
        oracle::check_reduction(g, len, &mut rng).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(words)
}

/// Reflexivity, symmetry and transitivity of Morita equivalence on random
/// action groupoids, with the expected answer known by construction.
pub fn morita_suite(seed: u64, groupoids: usize) -> std::result::Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<(FiniteGroupoid, FiniteGroupoid)> = (0..groupoids)
        .map(|_| oracle::random_action_groupoid(&mut rng))
        .collect();
    let eq =
        |a: &FiniteGroupoid, b: &FiniteGroupoid| lift(morita_equivalent(a, b)).map(|w| w.is_some());
    for (i, (g, sk)) in pool.iter().enumerate() {
        ensure(
            eq(g, g)?,
            format!("groupoid {i} is not equivalent to itself"),
        )?;
        ensure(
            eq(g, sk)? && eq(sk, g)?,
            format!("groupoid {i} differs from its stabilizers"),
        )?;
    }
    for i in 0..pool.len() {
        let j = (i * 7 + 3) % pool.len();
        let k = (i * 13 + 5) % pool.len();
        let (a, b, c) = (&pool[i].0, &pool[j].0, &pool[k].0);
        let ab = eq(a, b)?;
        ensure(ab == eq(b, a)?, format!("symmetry fails on {i}, {j}"))?;
        let fingerprint = oracle::morita_fingerprint(a) == oracle::morita_fingerprint(b);
        ensure(
            ab == fingerprint,
            format!("{i} ~ {j} is {ab}, fingerprints say {fingerprint}"),
        )?;
        let via = eq(b, c)?;
        if ab && via {
            ensure(eq(a, c)?, format!("transitivity fails on {i}, {j}, {k}"))?;
        }
    }
    Ok(pool.len())
}

/// Canonical documents of the golden corpus, by file name.
pub fn golden_documents() -> Result<Vec<(&'static str, Document)>> {
    let g = modular();
    let a = action(&g, 3, &[("a", "(1 2)"), ("b", "(1 2 3)")])
        .map_err(crate::error::Error::InvalidAction)?;
    let cover = covering_from_action(&g, &a)?;
    let (s3, i2, _) = s3_subgroup_inclusions();
    let swap = Arc::new(swap_groupoid());
    let point = Arc::new(FiniteGroupoid::unit("*"));
    let collapse = GroupoidFunctor::new(
        Arc::clone(&swap),
        Arc::clone(&point),
        vec![0, 0],
        vec![0; 4],
    )?;
    Ok(vec![
        (
            "unit.groupoid.json",
            Document::Groupoid(FiniteGroupoid::unit("*")),
        ),
        ("swap.groupoid.json", Document::Groupoid((*swap).clone())),
        (
            "bs3.groupoid.json",
            Document::Groupoid(FiniteGroupoid::classifying(&s3)),
        ),
        (
            "z6.group.json",
            Document::Group(FiniteGroup::from_table(
                "Z6",
                6,
                (0..36).map(|i| ((i / 6 + i % 6) % 6) as u32).collect(),
            )?),
        ),
        ("s3.group.json", Document::Group((*s3).clone())),
        ("z2_in_s3.hom.json", Document::Hom(i2)),
        ("swap_to_point.functor.json", Document::Functor(collapse)),
        ("segment_z2_z3.gog.json", Document::Gog((*g).clone())),
        ("dinfty.gog.json", Document::Gog((*dinfty()).clone())),
        (
            "modular_degree3.action.json",
            Document::Action(ActionDoc::from_action(&a)),
        ),
        (
            "modular_degree3.cover.json",
            Document::Cover(CoverDoc::from_cover(&cover)),
        ),
        (
            "segment_z2_z3.report.json",
            Document::Report(
                Report::new()
                    .with("abelianization", json!("Z6"))
                    .with(
                        "euler_characteristic",
                        formats::rational_json(g.euler_characteristic()),
                    )
                    .with("presentation", json!(pi1_presentation(&g, 0)?.to_string())),
            ),
        ),
    ])
}

/// The checked-in golden files.
pub fn golden_files() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "unit.groupoid.json",
            include_str!("../golden/unit.groupoid.json"),
        ),
        (
            "swap.groupoid.json",
            include_str!("../golden/swap.groupoid.json"),
        ),
        (
            "bs3.groupoid.json",
            include_str!("../golden/bs3.groupoid.json"),
        ),
        ("z6.group.json", include_str!("../golden/z6.group.json")),
        ("s3.group.json", include_str!("../golden/s3.group.json")),
        (
            "z2_in_s3.hom.json",
            include_str!("../golden/z2_in_s3.hom.json"),
        ),
        (
            "swap_to_point.functor.json",
            include_str!("../golden/swap_to_point.functor.json"),
        ),
        (
            "segment_z2_z3.gog.json",
            include_str!("../golden/segment_z2_z3.gog.json"),
        ),
        ("dinfty.gog.json", include_str!("../golden/dinfty.gog.json")),
        (
            "modular_degree3.action.json",
            include_str!("../golden/modular_degree3.action.json"),
        ),
        (
            "modular_degree3.cover.json",
            include_str!("../golden/modular_degree3.cover.json"),
        ),
        (
            "segment_z2_z3.report.json",
            include_str!("../golden/segment_z2_z3.report.json"),
        ),
    ]
}

/// `serialize(parse(f)) == f` for every golden file, and each file is the
/// serialization of the document it is named after.
pub fn golden_suite() -> std::result::Result<usize, String> {
    let docs = lift(golden_documents())?;
    let files = golden_files();
    ensure(docs.len() == files.len(), "corpus lists differ")?;
    for ((name, doc), (fname, text)) in docs.iter().zip(&files) {
        ensure(name == fname, format!("{name} vs {fname}"))?;
        let parsed = formats::parse(text, Some(doc.kind())).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            formats::serialize(&parsed) == *text,
            format!("{name} does not round-trip"),
        )?;
        ensure(formats::serialize(doc) == *text, format!("{name} is stale"))?;
    }
    Ok(files.len())
}

fn suite_checks(seed: u64, per_pair: usize) -> Checks {
    vec![
        (
            "suite: fiber-product universal property on small groupoids",
            Box::new(move || {
                let n = fiber_product_suite(per_pair)?;
                ensure(n >= 50, format!("{n} instances"))?;
                Ok(format!("{n} instances"))
            }),
        ),
        (
            "suite: reduce_word idempotence and relation triviality",
            Box::new(move || Ok(format!("{} words", reduction_suite(seed, 10_000)?))),
        ),
        (
            "suite: Morita relation axioms on random groupoids",
            Box::new(move || Ok(format!("{} groupoids", morita_suite(seed, 120)?))),
        ),
        (
            "suite: golden corpus round-trips bit-exactly",
            Box::new(|| Ok(format!("{} files", golden_suite()?))),
        ),
    ]
}

/// Functors per domain and codomain in the quick fiber-product suite.
pub const FUNCTOR_SAMPLE: usize = 3;

/// All checks, with the fiber product of every functor pair.
pub fn run(seed: u64) -> SelftestReport {
    run_with(seed, usize::MAX)
}

/// All checks; names are unique and the report is sorted by name.
/// `per_pair` is passed to [`fiber_product_suite`].
pub fn run_with(seed: u64, per_pair: usize) -> SelftestReport {
    let mut all = Vec::new();
    all.extend(groupoid_checks());
    all.extend(construction_checks());
    all.extend(morita_checks());
    all.extend(gog_checks());
    all.extend(covering_checks());
    all.extend(format_checks());
    all.extend(suite_checks(seed, per_pair));
    let mut checks: Vec<Check> = all
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(&f))
            {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(_) => (false, "panicked".to_string()),
            };
            Check {
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    SelftestReport { seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        // the exhaustive fiber-product suite runs in the acceptance target
        let report = run_with(DEFAULT_SEED, FUNCTOR_SAMPLE);
        let failures: Vec<String> = report
            .failures()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        assert!(failures.is_empty(), "{failures:#?}");
        let mut names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        names.dedup();
        assert_eq!(names.len(), report.checks.len());
    }
}
