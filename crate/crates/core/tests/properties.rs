use std::sync::Arc;

use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stacklab::abelian::AbelianInvariants;
use stacklab::constructions::{fiber_product, inertia};
use stacklab::covering::{covering_from_action, enumerate_actions, monodromy, Pi1Action};
use stacklab::formats::{self, Document};
use stacklab::gog::{pi1_presentation, reduce_word, GraphOfGroups};
use stacklab::groupoid::{enumerate_functors, validate_groupoid, FiniteGroupoid};
use stacklab::morita::{is_weak_equivalence, morita_equivalent, skeleton};
use stacklab::oracle;
use stacklab::perm::Perm;

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perm_products_associate_and_invert((p, q, r) in (1usize..7).prop_flat_map(|n| (perm(n), perm(n), perm(n)))) {
        prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(Perm::parse_cycles(&p.to_string(), p.degree()).unwrap(), p);
    }

    #[test]
    fn random_action_groupoids_satisfy_the_axioms(seed in any::<u64>()) {
        let (g, _) = oracle::random_action_groupoid(&mut rng(seed));
        prop_assert!(validate_groupoid(&g.to_data()).is_ok());
        for a in 0..g.arrow_count() {
            prop_assert_eq!(g.compose(a, g.inverse(a)), g.identity(g.src(a)));
            prop_assert_eq!(g.compose(g.identity(g.src(a)), a), a);
        }
    }

    #[test]
    fn skeleton_inclusion_is_a_weak_equivalence(seed in any::<u64>()) {
        let (g, stabilizers) = oracle::random_action_groupoid(&mut rng(seed));
        let g = Arc::new(g);
        let sk = skeleton(&g);
        prop_assert!(is_weak_equivalence(&sk.inclusion).holds());
        prop_assert_eq!(sk.groupoid.object_count(), g.pi0().len());
        prop_assert!(morita_equivalent(&g, &sk.groupoid).unwrap().is_some());
        prop_assert!(morita_equivalent(&stabilizers, &g).unwrap().is_some());
    }

    #[test]
    fn morita_equivalence_ignores_object_relabelling(seed in any::<u64>(), order in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle()) {
        let (g, _) = oracle::random_action_groupoid(&mut rng(seed));
        let n = g.object_count();
        let perm: Vec<usize> = order.into_iter().filter(|&i| i < n).collect();
        prop_assume!(perm.len() == n);
        let h = oracle::relabel_objects(&g, &perm);
        prop_assert!(morita_equivalent(&g, &h).unwrap().is_some());
        prop_assert_eq!(oracle::morita_fingerprint(&g), oracle::morita_fingerprint(&h));
    }

    #[test]
    fn fiber_products_match_the_oracle(c in 0usize..10, a in 0usize..10, b in 0usize..10, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let corpus = oracle::small_groupoids();
        let fs = enumerate_functors(&corpus[a].1, &corpus[c].1, usize::MAX);
        let gs = enumerate_functors(&corpus[b].1, &corpus[c].1, usize::MAX);
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let (f, g) = (&fs[i.index(fs.len())], &gs[j.index(gs.len())]);
        let fp = fiber_product(f, g).unwrap();
        prop_assert_eq!(oracle::check_fiber_product(f, g, &fp), Ok(()));
    }

    #[test]
    fn inertia_components_count_conjugacy_classes(seed in any::<u64>()) {
        let (g, _) = oracle::random_action_groupoid(&mut rng(seed));
        let g = Arc::new(g);
        let expected: usize = g
            .pi0()
            .iter()
            .map(|c| g.isotropy(c[0]).unwrap().group.conjugacy_classes().len())
            .sum();
        prop_assert_eq!(inertia(&g).groupoid.pi0().len(), expected);
    }

    #[test]
    fn reduction_is_idempotent_and_kills_relations(seed in any::<u64>(), graph in 0usize..14, len in 1usize..24) {
        let corpus = oracle::omega_corpus();
        let (name, g) = &corpus[graph];
        prop_assert_eq!(oracle::check_reduction(g, len, &mut rng(seed)), Ok(()), "{}", name);
    }

    #[test]
    fn free_products_of_cyclic_groups_match_the_rewrite_oracle(word in prop::collection::vec((0usize..2, -4i64..5), 0..30)) {
        let g = GraphOfGroups::cyclic_segment(2, 3, 1).unwrap();
        let p = pi1_presentation(&g, g.basepoint()).unwrap();
        let text: Vec<String> = word.iter().map(|&(x, k)| format!("{}^{}", p.symbols[x], k)).collect();
        let w = p.parse_word(&text.join(" ")).unwrap();
        let r = reduce_word(&g, g.tables(), &p.word_to_loop(&g, &w)).unwrap();
        let mut got = p.reduced_to_word(&g, &r).unwrap().0;
        for (x, k) in &mut got {
            *k = k.rem_euclid([2, 3][*x]);
        }
        got.retain(|&(_, k)| k != 0);
        prop_assert_eq!(got, oracle::free_product_rewrite(&[2, 3], &word));
    }

    #[test]
    fn amalgam_abelianizations_match_the_quotient((m, n, d) in (1usize..5, 1usize..5, 1usize..4).prop_map(|(a, b, d)| (a * d, b * d, d))) {
        let g = GraphOfGroups::cyclic_segment(m, n, d).unwrap();
        let ab = pi1_presentation(&g, g.basepoint()).unwrap().abelianization();
        let (order, profile) = oracle::amalgam_abelianization_profile(m, n, d);
        prop_assert_eq!(ab.order(), Some(order as u64));
        prop_assert_eq!(oracle::cyclic_product_profile(&ab.torsion), profile);
    }

    #[test]
    fn covers_round_trip_and_multiply_euler_characteristic(k in 0usize..40, shuffle in perm(5), segment in 0usize..3) {
        let (m, n) = [(2, 2), (2, 3), (3, 3)][segment];
        let g = Arc::new(GraphOfGroups::cyclic_segment(m, n, 1).unwrap());
        let p = Arc::new(pi1_presentation(&g, g.basepoint()).unwrap());
        let actions = enumerate_actions(&p, 5).unwrap();
        let a = &actions[k % actions.len()];
        // relabel the fiber by a random bijection
        let s: Vec<u32> = shuffle.images().iter().copied().filter(|&x| (x as usize) < a.degree).collect();
        let s = Perm::from_images(s).unwrap();
        let moved = Pi1Action::new(Arc::clone(&p), a.images.iter().map(|x| s.inverse().then(x).then(&s)).collect()).unwrap();
        prop_assert!(moved.is_conjugate(a));
        let c = covering_from_action(&g, &moved).unwrap();
        prop_assert!(monodromy(&c).unwrap().is_conjugate(a));
        prop_assert_eq!(c.total.euler_characteristic(), g.euler_characteristic() * Ratio::from_integer(a.degree as i64));
        for v in 0..g.vertices().len() {
            let sum: usize = (0..c.total.vertices().len())
                .filter(|&i| c.vertex_over[i] == v)
                .map(|i| g.vertex(v).group.order() / c.total.vertex(i).group.order())
                .sum();
            prop_assert_eq!(sum, a.degree);
        }
    }

    #[test]
    fn groupoid_documents_round_trip_bit_exactly(seed in any::<u64>()) {
        let (g, _) = oracle::random_action_groupoid(&mut rng(seed));
        let text = formats::serialize(&Document::Groupoid(g.clone()));
        let back = formats::parse_groupoid_text(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(formats::serialize(&Document::Groupoid(back)), text.clone());
        prop_assert_eq!(formats::canonicalize(&text).unwrap(), text);
    }

    #[test]
    fn dot_output_is_stable(seed in any::<u64>()) {
        let (g, _) = oracle::random_action_groupoid(&mut rng(seed));
        let doc = Document::Groupoid(g);
        prop_assert_eq!(formats::to_dot(&doc).unwrap(), formats::to_dot(&doc.clone()).unwrap());
    }
}

#[test]
fn trivial_group_has_trivial_invariants() {
    let ab = AbelianInvariants::from_cyclic_factors(&[1, 1]);
    assert!(ab.is_trivial());
    assert_eq!(ab.to_string(), "0");
    assert!(validate_groupoid(&FiniteGroupoid::empty().to_data()).is_ok());
}
