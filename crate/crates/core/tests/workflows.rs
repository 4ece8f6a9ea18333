use std::sync::Arc;

use stacklab::constructions::{double_coset_fiber_product, fiber_product};
use stacklab::covering::{
    covering_from_action, enumerate_actions, is_connected_cover, monodromy, uniformize,
};
use stacklab::formats::{self, CoverDoc, Document, Kind};
use stacklab::gog::{inertia_gog, parse_gog, pi1_presentation, write_gog, GraphOfGroups};
use stacklab::group::{FiniteGroup, GroupHom};
use stacklab::groupoid::{FiniteGroupoid, GroupoidFunctor};
use stacklab::morita::morita_equivalent;
use stacklab::oracle;
use stacklab::Error;

const MODULAR: &str = "\
group Z2 cyclic 2
group Z3 cyclic 3
group A trivial
vertex v1 Z2
vertex v2 Z3
edge e v1 v2 group A into_v1 [0] into_v2 [0]
basepoint v1
";

#[test]
fn dsl_to_covers_and_back() {
    let g = Arc::new(parse_gog(MODULAR).unwrap());
    assert_eq!(parse_gog(&write_gog(&g)).unwrap().vertices().len(), 2);
    let p = Arc::new(pi1_presentation(&g, g.basepoint()).unwrap());
    assert_eq!(p.to_string(), "<a, b | a^2, b^3>");
    let actions = enumerate_actions(&p, 4).unwrap();
    assert!(!actions.is_empty());
    for a in &actions {
        let cover = covering_from_action(&g, a).unwrap();
        let text = formats::serialize(&Document::Cover(CoverDoc::from_cover(&cover)));
        let Document::Cover(doc) = formats::parse(&text, Some(Kind::Cover)).unwrap() else {
            panic!("expected a cover")
        };
        assert_eq!(formats::serialize(&Document::Cover(doc.clone())), text);
        assert!(monodromy(&doc.to_covering().unwrap())
            .unwrap()
            .is_conjugate(a));
    }
}

#[test]
fn only_degree_one_for_the_trivial_group() {
    let g = GraphOfGroups::segment(
        FiniteGroup::trivial(),
        FiniteGroup::trivial(),
        FiniteGroup::trivial(),
        vec![0],
        vec![0],
    )
    .unwrap();
    let p = Arc::new(pi1_presentation(&g, g.basepoint()).unwrap());
    let actions = enumerate_actions(&p, 5).unwrap();
    assert_eq!(actions.len(), 1);
    assert_eq!(actions[0].degree, 1);
}

#[test]
fn self_fiber_products_along_identities() {
    for (name, a) in oracle::small_groupoids() {
        let id = GroupoidFunctor::identity(&a);
        let fp = fiber_product(&id, &id).unwrap();
        assert!(
            morita_equivalent(&fp.total, &a).unwrap().is_some(),
            "{name}"
        );
    }
}

#[test]
fn trivial_subgroups_give_one_double_coset_per_element() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let one = Arc::new(FiniteGroup::trivial());
    let i = GroupHom::new(Arc::clone(&one), Arc::clone(&s3), vec![0]).unwrap();
    let d = double_coset_fiber_product(&i, &i).unwrap();
    assert_eq!(d.cosets.len(), 6);
    assert!(d.cosets.iter().all(|c| c.stabilizer.group.order() == 1));
    let full = GroupHom::identity(&s3);
    let d = double_coset_fiber_product(&full, &full).unwrap();
    assert_eq!(d.cosets.len(), 1);
    assert_eq!(d.cosets[0].stabilizer.group.order(), 6);
}

#[test]
fn inertia_of_an_s3_segment_has_centralizer_groups() {
    let s3 = FiniteGroup::symmetric(3);
    let id: Vec<u32> = (0..6).collect();
    let g = GraphOfGroups::segment(s3.clone(), s3.clone(), s3, id.clone(), id).unwrap();
    let ig = inertia_gog(&g).unwrap();
    assert_eq!((ig.vertices().len(), ig.edges().len()), (6, 3));
    let mut orders: Vec<usize> = ig.edges().iter().map(|e| e.group.order()).collect();
    orders.sort_unstable();
    assert_eq!(orders, [2, 3, 6]);
}

#[test]
fn uniformization_of_the_modular_group() {
    let g = Arc::new(parse_gog(MODULAR).unwrap());
    let u = uniformize(&g, 6).unwrap();
    assert!(u.certificate.passed());
    assert_eq!(u.certificate.total_checked(), 3);
    let a = u
        .torsion_free_cover
        .expect("a degree-6 torsion-free cover exists");
    let c = covering_from_action(&g, &a).unwrap();
    assert!(c.total.vertices().iter().all(|v| v.group.order() == 1));
}

#[test]
fn error_kinds_are_distinct() {
    assert!(matches!(
        formats::parse("{\"kind\": \"groupoid\"", None),
        Err(Error::Syntax { .. })
    ));
    assert!(matches!(
        formats::parse("{\"kind\": \"sheaf\", \"version\": 1}", None),
        Err(Error::UnsupportedKind(_))
    ));
    assert!(matches!(
        formats::parse(
            "{\"kind\": \"action\", \"version\": 2, \"degree\": 1, \"images\": {}}",
            None
        ),
        Err(Error::Schema { .. })
    ));
    let bad = "group Z2 cyclic 2\ngroup Z3 cyclic 3\nvertex v Z3\nvertex w Z3\nedge e v w group Z3 into_v [0 0 0] into_w [0 1 2]\n";
    assert!(matches!(
        parse_gog(bad),
        Err(Error::NonInjectiveInclusion { .. }) | Err(Error::NotAHomomorphism(_))
    ));
}

#[test]
fn unit_groupoids_are_morita_equivalent_only_to_points() {
    let one = FiniteGroupoid::unit("*");
    let two = FiniteGroupoid::discrete(&["x", "y"]);
    assert!(
        morita_equivalent(&one, &FiniteGroupoid::indiscrete(&["a", "b", "c"]))
            .unwrap()
            .is_some()
    );
    assert!(morita_equivalent(&one, &two).unwrap().is_none());
    assert!(
        morita_equivalent(&FiniteGroupoid::classifying(&FiniteGroup::trivial()), &one)
            .unwrap()
            .is_some()
    );
}

#[test]
fn direct_sums_are_disconnected() {
    let g = Arc::new(parse_gog(MODULAR).unwrap());
    let p = Arc::new(pi1_presentation(&g, g.basepoint()).unwrap());
    let a = &enumerate_actions(&p, 3).unwrap()[0];
    assert!(is_connected_cover(a));
    let sum = a.direct_sum(a);
    assert_eq!(sum.degree, 2 * a.degree);
    assert!(!is_connected_cover(&sum));
    assert_eq!(sum.orbits().len(), 2);
}
