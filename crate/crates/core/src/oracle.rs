//! Brute-force oracles and generators for cross-checking the fast paths.
//!
//! Each oracle recomputes a quantity from raw tables without the indices,
//! transversals or canonical forms the library uses.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::constructions::FiberProductResult;
use crate::gog::{Dir, EdgeSpec, GraphOfGroups, ReducedWord, Syllable, VertexSpec, Word};
use crate::group::{Elem, FiniteGroup};
use crate::groupoid::{
    check_natural_transformation, ArrowId, FiniteGroupoid, GroupAction, GroupoidFunctor, ObjId,
};

/// `(least element, centralizer order)` per conjugacy class, by direct orbit enumeration.
pub fn conjugation_orbits(g: &FiniteGroup) -> Vec<(Elem, usize)> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for a in g.elements() {
        if seen[a as usize] {
            continue;
        }
        for x in g.elements() {
            seen[g.mul(g.mul(x, a), g.inv(x)) as usize] = true;
        }
        let cent = g.elements().filter(|&x| g.mul(x, a) == g.mul(a, x)).count();
        out.push((a, cent));
    }
    out
}

/// Sizes and isotropy orders of the components of a groupoid, sorted.
fn components(objects: usize, arrows: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut parent: Vec<usize> = (0..objects).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(s, t) in arrows {
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        parent[a.max(b)] = a.min(b);
    }
    let mut size: BTreeMap<usize, usize> = BTreeMap::new();
    let mut loops: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..objects {
        *size.entry(find(&mut parent, x)).or_default() += 1;
    }
    for &(s, t) in arrows {
        if s == t {
            *loops.entry(s).or_default() += 1;
        }
    }
    let mut out: Vec<(usize, usize)> = size
        .iter()
        .map(|(&r, &n)| (n, loops.get(&r).copied().unwrap_or(0)))
        .collect();
    out.sort_unstable();
    out
}

/// Objects, arrows and `(size, isotropy order)` per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub objects: usize,
    pub arrows: usize,
    pub components: Vec<(usize, usize)>,
}

pub fn census(g: &FiniteGroupoid) -> Census {
    let arrows: Vec<(usize, usize)> = (0..g.arrow_count()).map(|a| (g.src(a), g.tgt(a))).collect();
    Census {
        objects: g.object_count(),
        arrows: arrows.len(),
        components: components(g.object_count(), &arrows),
    }
}

/// Census of the 2-fiber product from a scan over every arrow of the base,
/// with arrows found by scanning every pair `(u, v)`.
pub fn fiber_product_census(f: &GroupoidFunctor, g: &GroupoidFunctor) -> Census {
    let c = &f.codomain;
    let (a, b) = (&f.domain, &g.domain);
    let mut triples = Vec::new();
    for y in 0..a.object_count() {
        for z in 0..b.object_count() {
            for alpha in 0..c.arrow_count() {
                if c.src(alpha) == f.obj_map[y] && c.tgt(alpha) == g.obj_map[z] {
                    triples.push((y, z, alpha));
                }
            }
        }
    }
    // generated in lexicographic order
    let index =
        |t: (ObjId, ObjId, ArrowId)| triples.binary_search(&t).expect("target triple exists");
    let mut arrows = Vec::new();
    for (i, &(y, z, alpha)) in triples.iter().enumerate() {
        for u in 0..a.arrow_count() {
            if a.src(u) != y {
                continue;
            }
            for v in 0..b.arrow_count() {
                if b.src(v) != z {
                    continue;
                }
                let moved = c.compose(c.compose(c.inverse(f.arr_map[u]), alpha), g.arr_map[v]);
                arrows.push((i, index((a.tgt(u), b.tgt(v), moved))));
            }
        }
    }
    Census {
        objects: triples.len(),
        arrows: arrows.len(),
        components: components(triples.len(), &arrows),
    }
}

/// Checks a computed fiber product against the brute-force census, the
/// naturality of its 2-cell and the bijection of cones from the arrow
/// groupoid: every compatible `(u, v)` lifts to exactly one arrow.
pub fn check_fiber_product(
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
    fp: &FiberProductResult,
) -> Result<(), String> {
    let expected = fiber_product_census(f, g);
    let got = census(&fp.total);
    if expected != got {
        return Err(format!("census {got:?}, brute force {expected:?}"));
    }
    if !check_natural_transformation(&fp.two_cell) {
        return Err("two-cell is not natural".into());
    }
    let c = &f.codomain;
    for w in 0..fp.total.object_count() {
        let (y, z, alpha) = fp.triples[w];
        if fp.proj_left.obj_map[w] != y
            || fp.proj_right.obj_map[w] != z
            || fp.two_cell.component[w] != alpha
        {
            return Err(format!("object {w} does not project to its triple"));
        }
    }
    let mut lifts: Vec<(ObjId, ArrowId, ArrowId)> = Vec::with_capacity(fp.total.arrow_count());
    for p in 0..fp.total.arrow_count() {
        let w = fp.total.src(p);
        let (u, v) = (fp.proj_left.arr_map[p], fp.proj_right.arr_map[p]);
        let (_, _, alpha) = fp.triples[w];
        let (_, _, beta) = fp.triples[fp.total.tgt(p)];
        if c.compose(alpha, g.arr_map[v]) != c.compose(f.arr_map[u], beta) {
            return Err(format!("arrow {p} is not compatible with the two-cell"));
        }
        if f.domain.src(u) != fp.triples[w].0 || g.domain.src(v) != fp.triples[w].1 {
            return Err(format!("arrow {p} does not leave its triple"));
        }
        lifts.push((w, u, v));
    }
    lifts.sort_unstable();
    lifts.dedup();
    let expected_lifts: usize = (0..fp.total.object_count())
        .map(|w| {
            let (y, z, _) = fp.triples[w];
            f.domain.arrows_from(y).len() * g.domain.arrows_from(z).len()
        })
        .sum();
    if lifts.len() != expected_lifts || fp.total.arrow_count() != expected_lifts {
        return Err("cones do not lift uniquely".into());
    }
    Ok(())
}

/// `(elements, stabilizer order)` of each double coset `H a K` from all
/// products `h a k⁻¹`, ordered by least element.
pub fn double_cosets(g: &FiniteGroup, h: &[Elem], k: &[Elem]) -> Vec<(Vec<Elem>, usize)> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for a in g.elements() {
        if seen[a as usize] {
            continue;
        }
        let mut coset = BTreeSet::new();
        let mut stab = 0;
        for &x in h {
            for &y in k {
                let b = g.mul(g.mul(x, a), g.inv(y));
                coset.insert(b);
                if b == a {
                    stab += 1;
                }
            }
        }
        for &b in &coset {
            seen[b as usize] = true;
        }
        out.push((coset.into_iter().collect(), stab));
    }
    out
}

/// Vertices of the Bass–Serre ball by counting types: a vertex over `v`
/// reached along `d` has `[G_v : G_e]` children along each `d'` leaving
/// `v`, one fewer along `d̄`.
pub fn ball_size(g: &GraphOfGroups, radius: usize) -> usize {
    let index = |d: Dir| g.vertex(g.origin(d)).group.order() / g.edge(d.edge).group.order();
    let mut layer: BTreeMap<(usize, Option<Dir>), usize> = BTreeMap::new();
    layer.insert((g.basepoint(), None), 1);
    let mut total = 1;
    for _ in 0..radius {
        let mut next: BTreeMap<(usize, Option<Dir>), usize> = BTreeMap::new();
        for (&(v, via), &count) in &layer {
            for d in g.dirs_from(v) {
                let mut k = index(d);
                if via == Some(d.reverse()) {
                    k -= 1;
                }
                if k > 0 {
                    *next.entry((g.terminus(d), Some(d))).or_default() += count * k;
                }
            }
        }
        total += next.values().sum::<usize>();
        layer = next;
    }
    total
}

/// Normal form in a free product of cyclic groups `Z_{orders[0]} * ..` by
/// cancelling adjacent powers of the same letter.
pub fn free_product_rewrite(orders: &[usize], word: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut stack: Vec<(usize, i64)> = Vec::new();
    for &(x, k) in word {
        let n = orders[x] as i64;
        match stack.last_mut() {
            Some(top) if top.0 == x => {
                top.1 = (top.1 + k).rem_euclid(n);
                if top.1 == 0 {
                    stack.pop();
                }
            }
            _ => {
                let k = k.rem_euclid(n);
                if k != 0 {
                    stack.push((x, k));
                }
            }
        }
    }
    stack
}

/// Order and element-order multiset of `(Z_m + Z_n) / ⟨(m/d, -n/d)⟩` by
/// enumerating cosets.
pub fn amalgam_abelianization_profile(m: usize, n: usize, d: usize) -> (usize, Vec<usize>) {
    let (sm, sn) = (m / d, n / d);
    let sub: BTreeSet<(usize, usize)> = (0..d)
        .map(|k| ((k * sm) % m, (n - (k * sn) % n) % n))
        .collect();
    let add = |(a, b): (usize, usize), (c, e): (usize, usize)| ((a + c) % m, (b + e) % n);
    let mut coset_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut reps = Vec::new();
    for a in 0..m {
        for b in 0..n {
            if coset_of.contains_key(&(a, b)) {
                continue;
            }
            let id = reps.len();
            reps.push((a, b));
            for &s in &sub {
                coset_of.insert(add((a, b), s), id);
            }
        }
    }
    let mut profile: Vec<usize> = reps
        .iter()
        .map(|&x| {
            let mut y = x;
            let mut k = 1;
            while !sub.contains(&y) {
                y = add(y, x);
                k += 1;
            }
            k
        })
        .collect();
    profile.sort_unstable();
    (reps.len(), profile)
}

/// Element-order multiset of `Z^0 + Z_{t1} + ..`.
pub fn cyclic_product_profile(torsion: &[u64]) -> Vec<usize> {
    let mut profile = vec![1usize];
    for &t in torsion {
        let t = t as usize;
        let mut next = Vec::with_capacity(profile.len() * t);
        for &o in &profile {
            for k in 0..t {
                let ok = t / gcd(t, k);
                next.push(o / gcd(o, ok) * ok);
            }
        }
        profile = next;
    }
    profile.sort_unstable();
    profile
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A random path from `start` of about `len` syllables.
pub fn random_path(
    g: &GraphOfGroups,
    start: usize,
    len: usize,
    rng: &mut impl Rng,
) -> (Word, usize) {
    let mut syllables = Vec::with_capacity(len);
    let mut at = start;
    for _ in 0..len {
        let dirs = g.dirs_from(at);
        if dirs.is_empty() || rng.gen_bool(0.5) {
            let order = g.vertex(at).group.order() as Elem;
            syllables.push(Syllable::Elem {
                vertex: at,
                elem: rng.gen_range(0..order),
            });
        } else {
            let d = *dirs.choose(rng).expect("nonempty");
            syllables.push(Syllable::Edge(d));
            at = g.terminus(d);
        }
    }
    (Word::new(syllables), at)
}

/// A random loop at `v` that is trivial by one defining relation.
pub fn random_relation(g: &GraphOfGroups, v: usize, rng: &mut impl Rng) -> Word {
    let dirs = g.dirs_from(v);
    let grp = &g.vertex(v).group;
    if dirs.is_empty() || rng.gen_bool(0.3) {
        let x = rng.gen_range(0..grp.order() as Elem);
        let y = rng.gen_range(0..grp.order() as Elem);
        let xy = grp.mul(x, y);
        return Word::new(vec![
            Syllable::Elem { vertex: v, elem: x },
            Syllable::Elem { vertex: v, elem: y },
            Syllable::Elem {
                vertex: v,
                elem: grp.inv(xy),
            },
        ]);
    }
    let d = *dirs.choose(rng).expect("nonempty");
    let c = rng.gen_range(0..g.edge(d.edge).group.order() as Elem);
    let w = g.terminus(d);
    let tg = &g.vertex(w).group;
    Word::new(vec![
        Syllable::Elem {
            vertex: v,
            elem: g.alpha(d).apply(c),
        },
        Syllable::Edge(d),
        Syllable::Elem {
            vertex: w,
            elem: tg.inv(g.omega(d).apply(c)),
        },
        Syllable::Edge(d.reverse()),
    ])
}

/// Checks idempotence, relation triviality and `w w⁻¹ = 1` on one random word.
pub fn check_reduction(g: &GraphOfGroups, len: usize, rng: &mut impl Rng) -> Result<(), String> {
    let tables = g.tables();
    let start = g.basepoint();
    let (w, end) = random_path(g, start, len, rng);
    let err = |e: crate::error::Error| e.to_string();
    let r = ReducedWord::from_path(g, tables, start, &w).map_err(err)?;
    let again = ReducedWord::from_path(g, tables, start, &r.to_word(g)).map_err(err)?;
    if again != r {
        return Err(format!("not idempotent on {}", w.display(g)));
    }
    if r.end(g) != end {
        return Err(format!("reduction of {} moved its endpoint", w.display(g)));
    }
    let cut = rng.gen_range(0..=w.syllables.len());
    let mut at = start;
    for s in &w.syllables[..cut] {
        if let Syllable::Edge(d) = s {
            at = g.terminus(*d);
        }
    }
    let prefix = Word::new(w.syllables[..cut].to_vec());
    let suffix = Word::new(w.syllables[cut..].to_vec());
    let rel = random_relation(g, at, rng);
    let padded = prefix.concat(&rel).concat(&suffix);
    let rp = ReducedWord::from_path(g, tables, start, &padded).map_err(err)?;
    if rp != r {
        return Err(format!(
            "inserting {} changed {}",
            rel.display(g),
            w.display(g)
        ));
    }
    let back = w.concat(&w.inverse(g));
    if !ReducedWord::from_path(g, tables, start, &back)
        .map_err(err)?
        .is_identity()
    {
        return Err(format!("{} times its inverse is not trivial", w.display(g)));
    }
    Ok(())
}

/// Groupoids with at most 3 objects and isotropy of order at most 6.
pub fn small_groupoids() -> Vec<(String, Arc<FiniteGroupoid>)> {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let swap = GroupAction::new(
        z2.clone(),
        vec!["a".into(), "b".into()],
        vec![vec![0, 1], vec![1, 0]],
    )
    .expect("swap action");
    let s3_on_3 = GroupAction::natural(s3.clone()).expect("natural action");
    let list = vec![
        ("point", FiniteGroupoid::unit("*")),
        ("BZ2", FiniteGroupoid::classifying(&z2)),
        ("BZ3", FiniteGroupoid::classifying(&FiniteGroup::cyclic(3))),
        ("BS3", FiniteGroupoid::classifying(&s3)),
        ("BZ6", FiniteGroupoid::classifying(&FiniteGroup::cyclic(6))),
        ("swap", swap.groupoid()),
        ("two points", FiniteGroupoid::discrete(&["p", "q"])),
        (
            "BZ2 + point",
            FiniteGroupoid::classifying(&z2).disjoint_union(&FiniteGroupoid::unit("p")),
        ),
        ("S3 on 3", s3_on_3.groupoid()),
        ("indiscrete 3", FiniteGroupoid::indiscrete(&["x", "y", "z"])),
    ];
    list.into_iter()
        .map(|(n, g)| (n.to_string(), Arc::new(g)))
        .collect()
}

/// Graphs of groups with finite vertex groups, including loops and
/// multiple edges, for the injectivity certificate.
pub fn omega_corpus() -> Vec<(String, GraphOfGroups)> {
    let mut out = Vec::new();
    let mut add = |name: &str, g: crate::error::Result<GraphOfGroups>| {
        out.push((name.to_string(), g.expect("corpus graph is valid")));
    };
    let z = FiniteGroup::cyclic;
    add("Z2 *_1 Z3", GraphOfGroups::cyclic_segment(2, 3, 1));
    add("Z4 *_Z2 Z6", GraphOfGroups::cyclic_segment(4, 6, 2));
    add("Z6 *_Z3 Z9", GraphOfGroups::cyclic_segment(6, 9, 3));
    add("Z2 *_1 Z2", GraphOfGroups::cyclic_segment(2, 2, 1));
    let s3 = FiniteGroup::symmetric(3);
    let t = s3.generators()[0];
    add(
        "S3 *_Z2 S3",
        GraphOfGroups::segment(s3.clone(), s3, z(2), vec![0, t], vec![0, t]),
    );
    add(
        "circle",
        GraphOfGroups::hnn(
            FiniteGroup::trivial(),
            FiniteGroup::trivial(),
            vec![0],
            vec![0],
        ),
    );
    add(
        "Z4 HNN Z2",
        GraphOfGroups::hnn(z(4), z(2), vec![0, 2], vec![0, 2]),
    );
    add(
        "Z4 HNN Z4 inverted",
        GraphOfGroups::hnn(z(4), z(4), vec![0, 1, 2, 3], vec![0, 3, 2, 1]),
    );
    add(
        "Z6 HNN Z3",
        GraphOfGroups::hnn(z(6), z(3), vec![0, 2, 4], vec![0, 4, 2]),
    );
    let groups = |list: &[(&str, FiniteGroup)]| -> Vec<(String, Arc<FiniteGroup>)> {
        list.iter()
            .map(|(n, g)| (n.to_string(), Arc::new(g.clone())))
            .collect()
    };
    let vertex = |name: &str, group: &str| VertexSpec {
        name: name.into(),
        group: group.into(),
    };
    let edge =
        |name: &str, src: &str, tgt: &str, group: &str, a: Vec<Elem>, b: Vec<Elem>| EdgeSpec {
            name: name.into(),
            src: src.into(),
            tgt: tgt.into(),
            group: group.into(),
            into_src: a,
            into_tgt: b,
        };
    add(
        "double edge Z2 Z2",
        GraphOfGroups::new(
            groups(&[("Z2", z(2)), ("1", FiniteGroup::trivial())]),
            vec![vertex("u", "Z2"), vertex("w", "Z2")],
            vec![
                edge("e1", "u", "w", "1", vec![0], vec![0]),
                edge("e2", "u", "w", "1", vec![0], vec![0]),
            ],
            None,
        ),
    );
    add(
        "triangle Z2 Z3 Z4",
        GraphOfGroups::new(
            groups(&[
                ("Z2", z(2)),
                ("Z3", z(3)),
                ("Z4", z(4)),
                ("1", FiniteGroup::trivial()),
            ]),
            vec![vertex("a", "Z2"), vertex("b", "Z3"), vertex("c", "Z4")],
            vec![
                edge("ab", "a", "b", "1", vec![0], vec![0]),
                edge("bc", "b", "c", "1", vec![0], vec![0]),
                edge("ca", "c", "a", "1", vec![0], vec![0]),
            ],
            None,
        ),
    );
    add(
        "Z4 with loop and leaf",
        GraphOfGroups::new(
            groups(&[("Z4", z(4)), ("Z2", z(2)), ("Z6", z(6))]),
            vec![vertex("v", "Z4"), vertex("w", "Z6")],
            vec![
                edge("loop", "v", "v", "Z2", vec![0, 2], vec![0, 2]),
                edge("leaf", "v", "w", "Z2", vec![0, 2], vec![0, 3]),
            ],
            None,
        ),
    );
    add(
        "triple edge Z6 Z6",
        GraphOfGroups::new(
            groups(&[("Z6", z(6)), ("Z2", z(2)), ("Z3", z(3))]),
            vec![vertex("p", "Z6"), vertex("q", "Z6")],
            vec![
                edge("x", "p", "q", "Z2", vec![0, 3], vec![0, 3]),
                edge("y", "p", "q", "Z3", vec![0, 2, 4], vec![0, 2, 4]),
                edge("z", "q", "p", "Z2", vec![0, 3], vec![0, 3]),
            ],
            None,
        ),
    );
    let q8 = FiniteGroup::quaternion();
    let central = q8
        .elements()
        .find(|&x| x != 0 && q8.element_order(x) == 2)
        .expect("Q8 has a central involution");
    add(
        "Q8 *_Z2 Z4",
        GraphOfGroups::segment(q8, z(4), z(2), vec![0, central], vec![0, 2]),
    );
    out
}

/// A transitive action of `g` on the cosets `xH`, `H` the closure of `gens`.
pub fn coset_action(g: &Arc<FiniteGroup>, gens: &[Elem]) -> GroupAction {
    let h = g.closure(gens);
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x as usize] != usize::MAX {
            continue;
        }
        for &y in &h {
            coset_of[g.mul(x, y) as usize] = reps.len();
        }
        reps.push(x);
    }
    let act = g
        .elements()
        .map(|a| {
            reps.iter()
                .map(|&x| coset_of[g.mul(a, x) as usize])
                .collect()
        })
        .collect();
    let points = reps.iter().map(|x| format!("{x}H")).collect();
    GroupAction::new(Arc::clone(g), points, act).expect("left multiplication is an action")
}

/// The same groupoid with objects renumbered by `perm`: object `x` becomes `perm[x]`.
pub fn relabel_objects(g: &FiniteGroupoid, perm: &[usize]) -> FiniteGroupoid {
    let mut d = g.to_data();
    let mut names = vec![String::new(); d.objects.len()];
    for (x, name) in d.objects.iter().enumerate() {
        names[perm[x]] = name.clone();
    }
    let mut identities = vec![0; d.identities.len()];
    for (x, &i) in d.identities.iter().enumerate() {
        identities[perm[x]] = i;
    }
    d.objects = names;
    d.identities = identities;
    for a in d.arrows.iter_mut() {
        *a = (perm[a.0], perm[a.1]);
    }
    FiniteGroupoid::from_data(d).expect("relabeling keeps the axioms")
}

/// Element-order profile of each component's isotropy, sorted; equal for
/// Morita-equivalent groupoids and complete for groups of order at most 15
/// and the subgroups of `S4`.
pub fn morita_fingerprint(g: &FiniteGroupoid) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = g
        .pi0()
        .iter()
        .map(|c| {
            g.isotropy(c[0])
                .expect("object exists")
                .group
                .order_profile()
        })
        .collect();
    out.sort();
    out
}

/// Random disjoint unions of coset actions, each paired with the union of
/// classifying groupoids of the stabilizers it should be equivalent to.
pub fn random_action_groupoid(rng: &mut impl Rng) -> (FiniteGroupoid, FiniteGroupoid) {
    let ambients = [
        FiniteGroup::symmetric(3),
        FiniteGroup::symmetric(4),
        FiniteGroup::cyclic(4),
        FiniteGroup::cyclic(6),
        FiniteGroup::klein_four(),
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion(),
    ];
    let parts = rng.gen_range(1..=3);
    let mut total = FiniteGroupoid::empty();
    let mut skeleton = FiniteGroupoid::empty();
    for _ in 0..parts {
        let g = Arc::new(ambients.choose(rng).expect("nonempty").clone());
        let k = rng.gen_range(0..=2);
        let gens: Vec<Elem> = (0..k)
            .map(|_| rng.gen_range(0..g.order() as Elem))
            .collect();
        let action = coset_action(&g, &gens);
        total = total.disjoint_union(&action.groupoid());
        let h = g
            .subgroup("H", &g.closure(&gens))
            .expect("closure is a subgroup");
        skeleton = skeleton.disjoint_union(&FiniteGroupoid::classifying(&h.group));
    }
    let mut perm: Vec<usize> = (0..total.object_count()).collect();
    perm.shuffle(rng);
    (relabel_objects(&total, &perm), skeleton)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn oracles_on_known_values() {
        let s3 = FiniteGroup::symmetric(3);
        let cents: Vec<usize> = conjugation_orbits(&s3).iter().map(|c| c.1).collect();
        assert_eq!(cents, vec![6, 2, 3]);
        assert_eq!(
            free_product_rewrite(&[2, 2], &[(0, 1), (0, 1), (1, 1)]),
            vec![(1, 1)]
        );
        assert_eq!(amalgam_abelianization_profile(2, 3, 1).0, 6);
        assert_eq!(
            cyclic_product_profile(&[6]),
            amalgam_abelianization_profile(2, 3, 1).1
        );
        let g = GraphOfGroups::cyclic_segment(2, 3, 1).unwrap();
        assert_eq!(
            (0..4).map(|r| ball_size(&g, r)).collect::<Vec<_>>(),
            vec![1, 3, 7, 11]
        );
    }

    #[test]
    fn corpus_is_large_enough() {
        let corpus = omega_corpus();
        assert!(corpus.len() >= 10);
        assert!(corpus
            .iter()
            .any(|(_, g)| g.edges().iter().any(|e| e.src == e.tgt)));
    }

    #[test]
    fn reductions_hold_on_the_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (_, g) in omega_corpus() {
            for _ in 0..20 {
                check_reduction(&g, 12, &mut rng).unwrap();
            }
        }
    }
}
