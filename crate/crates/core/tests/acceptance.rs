//! Acceptance criteria, one PASS/FAIL line each. Every tolerance is exact.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use stacklab::constructions::{double_coset_fiber_product, fiber_product, inertia};
use stacklab::covering::{
    covering_from_action, enumerate_actions, is_connected_cover, monodromy, validate_action,
    Pi1Action,
};
use stacklab::gog::{omega_injectivity_certificate, pi1_presentation, GraphOfGroups};
use stacklab::group::FiniteGroup;
use stacklab::groupoid::{FiniteGroupoid, GroupoidFunctor};
use stacklab::morita::{group_isomorphic, morita_equivalent};
use stacklab::oracle;
use stacklab::perm::Perm;
use stacklab::selftest::{self, DEFAULT_SEED};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lift<T>(r: stacklab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn c1_segment_pi1() -> Outcome {
    let g = lift(GraphOfGroups::cyclic_segment(2, 3, 1))?;
    let p = lift(pi1_presentation(&g, g.basepoint()))?;
    let text = p.to_string();
    ensure(text == "<a, b | a^2, b^3>", format!("presentation {text}"))?;
    let ab = p.abelianization();
    ensure(
        ab.free_rank == 0 && ab.torsion == [6],
        format!("abelianization {ab}"),
    )?;
    Ok(format!("{text}, abelianization {ab}"))
}

fn c2_weighted_projective_lines() -> Outcome {
    let mut seen = Vec::new();
    for (m, n, d) in [(2, 3, 1), (4, 6, 2), (6, 9, 3)] {
        let start = Instant::now();
        let g = lift(GraphOfGroups::cyclic_segment(m, n, d))?;
        let ab = lift(pi1_presentation(&g, g.basepoint()))?.abelianization();
        let (order, profile) = oracle::amalgam_abelianization_profile(m, n, d);
        ensure(
            ab.free_rank == 0,
            format!("({m},{n},{d}): infinite abelianization {ab}"),
        )?;
        ensure(
            ab.order() == Some(order as u64),
            format!("({m},{n},{d}): order {ab} vs {order}"),
        )?;
        ensure(
            order == m * n / d,
            format!("({m},{n},{d}): quotient order {order}"),
        )?;
        ensure(
            oracle::cyclic_product_profile(&ab.torsion) == profile,
            format!("({m},{n},{d}): element orders of {ab} differ from the quotient"),
        )?;
        within(start, Duration::from_secs(1), &format!("({m},{n},{d})"))?;
        seen.push(format!("({m},{n},{d}) -> {ab}"));
    }
    Ok(seen.join(", "))
}

fn s3_with_subgroups() -> (
    Arc<FiniteGroup>,
    stacklab::group::GroupHom,
    stacklab::group::GroupHom,
) {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let (t, c) = (s3.generators()[0], s3.generators()[1]);
    let z2 = s3.subgroup("Z2", &s3.closure(&[t])).unwrap();
    let z3 = s3.subgroup("Z3", &s3.closure(&[c])).unwrap();
    (s3, z2.inclusion(), z3.inclusion())
}

fn c3_double_coset_gerbe() -> Outcome {
    let (s3, i2, i3) = s3_with_subgroups();
    let f = GroupoidFunctor::from_group_hom(&i2);
    let mut g = GroupoidFunctor::from_group_hom(&i3);
    g.codomain = Arc::clone(&f.codomain);
    let fp = lift(fiber_product(&f, &g))?;
    ensure(
        lift(morita_equivalent(&fp.total, &FiniteGroupoid::unit("*")))?.is_some(),
        "fiber product is not equivalent to a point",
    )?;
    let brute = oracle::fiber_product_census(&f, &g);
    ensure(
        oracle::census(&fp.total) == brute,
        format!(
            "census {:?} vs triples {brute:?}",
            oracle::census(&fp.total)
        ),
    )?;
    oracle::check_fiber_product(&f, &g, &fp)?;
    let dc = lift(double_coset_fiber_product(&i2, &i3))?;
    ensure(
        dc.cosets.len() == 1,
        format!("{} double cosets", dc.cosets.len()),
    )?;
    ensure(
        dc.cosets[0].stabilizer.group.order() == 1,
        "nontrivial stabilizer",
    )?;
    let naive = oracle::double_cosets(&s3, i2.images(), i3.images());
    ensure(
        naive.len() == 1 && naive[0].1 == 1,
        format!("naive double cosets {naive:?}"),
    )?;
    ensure(
        brute.components == vec![(6, 1)],
        format!("components {:?}", brute.components),
    )?;
    Ok(format!(
        "{} objects, 1 component, trivial isotropy; 1 double coset",
        brute.objects
    ))
}

fn c4_inertia_of_bg() -> Outcome {
    let groups = [
        ("S3", FiniteGroup::symmetric(3)),
        ("Z4", FiniteGroup::cyclic(4)),
        ("D4", FiniteGroup::dihedral(4)),
        ("Q8", FiniteGroup::quaternion()),
        ("A4", FiniteGroup::alternating4()),
    ];
    let mut seen = Vec::new();
    for (name, grp) in groups {
        let bg = Arc::new(FiniteGroupoid::classifying(&grp));
        let iso_at_point = lift(bg.isotropy(0))?;
        let grp = Arc::new(grp);
        let inn = inertia(&bg);
        let comps = inn.groupoid.pi0();
        let classes = grp.conjugacy_classes().len();
        let orbits = oracle::conjugation_orbits(&grp);
        ensure(
            comps.len() == classes,
            format!("{name}: {} components, {classes} classes", comps.len()),
        )?;
        ensure(
            orbits.len() == classes,
            format!("{name}: brute force finds {} orbits", orbits.len()),
        )?;
        let mut from_inertia = Vec::new();
        for c in &comps {
            let alpha = inn.pairs[c[0]].1;
            let a = iso_at_point
                .element_of(alpha)
                .ok_or("loop is not in the isotropy group")?;
            let iso = lift(inn.groupoid.isotropy(c[0]))?;
            let cent = lift(grp.subgroup("C", &grp.centralizer(a)))?;
            ensure(
                lift(group_isomorphic(&iso.group, &cent.group))?.is_some(),
                format!("{name}: isotropy at class of {a} is not its centralizer"),
            )?;
            ensure(
                c.len() * iso.group.order() == grp.order(),
                format!("{name}: class-equation term for {a}"),
            )?;
            from_inertia.push((a, iso.group.order()));
        }
        from_inertia.sort_unstable();
        let mut brute = orbits.clone();
        brute.sort_unstable();
        ensure(
            from_inertia == brute,
            format!("{name}: {from_inertia:?} vs {brute:?}"),
        )?;
        seen.push(format!("{name}:{classes}"));
    }
    Ok(format!("components = classes for {}", seen.join(" ")))
}

/// All permutations of `0..n`.
fn all_perms(n: usize) -> Vec<Perm> {
    fn go(prefix: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(Perm::from_images(prefix.clone()).unwrap());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i as u32);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn c5_galois_round_trip() -> Outcome {
    let mut total = 0;
    for (m, n) in [(2, 2), (2, 3)] {
        let g = Arc::new(lift(GraphOfGroups::cyclic_segment(m, n, 1))?);
        let p = Arc::new(lift(pi1_presentation(&g, g.basepoint()))?);
        let actions = lift(enumerate_actions(&p, 4))?;
        for deg in 1..=4 {
            // transitive actions up to conjugacy, by brute force over S_deg x S_deg
            let perms = all_perms(deg);
            let mut classes = BTreeSet::new();
            for x in &perms {
                for y in &perms {
                    let a = lift(Pi1Action::new(Arc::clone(&p), vec![x.clone(), y.clone()]))?;
                    if validate_action(&a).valid && is_connected_cover(&a) {
                        classes.insert(a.canonical_form());
                    }
                }
            }
            let listed = actions.iter().filter(|a| a.degree == deg).count();
            ensure(
                listed == classes.len(),
                format!(
                    "Z{m}*Z{n} degree {deg}: {listed} listed, {} exist",
                    classes.len()
                ),
            )?;
        }
        for a in &actions {
            let c = lift(covering_from_action(&g, a))?;
            let back = lift(monodromy(&c))?;
            ensure(
                back.is_conjugate(a),
                format!("Z{m}*Z{n}: round trip changed {:?}", a.images),
            )?;
        }
        total += actions.len();
    }
    Ok(format!("{total} transitive actions round-trip"))
}

fn c6_local_structure() -> Outcome {
    let g = Arc::new(lift(GraphOfGroups::cyclic_segment(2, 3, 1))?);
    let p = Arc::new(lift(pi1_presentation(&g, g.basepoint()))?);
    let a = lift(Pi1Action::from_symbols(
        p,
        3,
        &[
            ("a", Perm::parse_cycles("(1 2)", 3).unwrap()),
            ("b", Perm::parse_cycles("(1 2 3)", 3).unwrap()),
        ],
    ))?;
    let c = lift(covering_from_action(&g, &a))?;
    let mut orders: Vec<Vec<usize>> = vec![Vec::new(); g.vertices().len()];
    for (i, &v) in c.vertex_over.iter().enumerate() {
        orders[v].push(c.total.vertex(i).group.order());
    }
    for o in &mut orders {
        o.sort_unstable();
    }
    ensure(
        orders == vec![vec![1, 2], vec![1]],
        format!("vertex groups {orders:?}"),
    )?;
    for v in 0..g.vertices().len() {
        let sum: usize = orders[v]
            .iter()
            .map(|k| g.vertex(v).group.order() / k)
            .sum();
        ensure(sum == 3, format!("index sum {sum} at {}", g.vertex(v).name))?;
    }
    let chi = c.total.euler_characteristic();
    ensure(
        chi == g.euler_characteristic() * Ratio::from_integer(3),
        format!("chi {chi}"),
    )?;
    ensure(chi == Ratio::new(-1, 2), format!("chi {chi}"))?;
    Ok(format!("vertex groups {orders:?}, chi {chi}"))
}

fn c7_uniformization_certificate() -> Outcome {
    let corpus = oracle::omega_corpus();
    ensure(corpus.len() >= 10, format!("{} graphs", corpus.len()))?;
    let has_loop = corpus
        .iter()
        .any(|(_, g)| g.edges().iter().any(|e| e.src == e.tgt));
    let has_multi = corpus.iter().any(|(_, g)| {
        let ends: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|e| (e.src.min(e.tgt), e.src.max(e.tgt)))
            .collect();
        ends.iter().collect::<BTreeSet<_>>().len() < ends.len()
    });
    ensure(
        has_loop && has_multi,
        "corpus lacks loops or multiple edges",
    )?;
    let mut elements = 0;
    for (name, g) in &corpus {
        let r = lift(omega_injectivity_certificate(g))?;
        ensure(r.passed(), format!("{name}: {:?}", r.counterexample))?;
        let expected: usize = g.vertices().iter().map(|v| v.group.order() - 1).sum();
        ensure(
            r.total_checked() == expected,
            format!("{name}: checked {} of {expected}", r.total_checked()),
        )?;
        elements += expected;
    }
    Ok(format!(
        "{} graphs, {elements} nontrivial vertex elements inject",
        corpus.len()
    ))
}

fn c8_property_suites() -> Outcome {
    let fp = selftest::fiber_product_suite(usize::MAX)?;
    ensure(fp >= 50, format!("{fp} fiber-product instances"))?;
    let words = selftest::reduction_suite(DEFAULT_SEED, 10_000)?;
    ensure(words >= 10_000, format!("{words} words"))?;
    let groupoids = selftest::morita_suite(DEFAULT_SEED, 120)?;
    ensure(groupoids >= 100, format!("{groupoids} groupoids"))?;
    let files = selftest::golden_suite()?;
    Ok(format!(
        "{fp} fiber products, {words} words, {groupoids} groupoids, {files} golden files"
    ))
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("{what} took {t:?}, limit {limit:?}"))
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    // runtime limits; the weighted projective lines are timed one by one
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 8] = [
        ("1 segment fundamental group", secs(1), c1_segment_pi1),
        (
            "2 weighted projective lines",
            None,
            c2_weighted_projective_lines,
        ),
        ("3 double-coset gerbe", secs(1), c3_double_coset_gerbe),
        ("4 inertia of BG", secs(5), c4_inertia_of_bg),
        (
            "5 Galois correspondence round trip",
            secs(30),
            c5_galois_round_trip,
        ),
        ("6 local structure of covers", None, c6_local_structure),
        (
            "7 uniformization certificate",
            None,
            c7_uniformization_certificate,
        ),
        ("8 property suites", secs(120), c8_property_suites),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check().and_then(|d| match limit {
            Some(l) => within(start, l, name).map(|_| d),
            None => Ok(d),
        });
        let t = start.elapsed();
        match outcome {
            Ok(d) => println!("PASS {name}: {d} ({t:.2?})"),
            Err(d) => {
                failed += 1;
                println!("FAIL {name}: {d} ({t:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
