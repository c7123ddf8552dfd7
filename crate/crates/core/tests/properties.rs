use proptest::prelude::*;

use grpact::action::{GraphAction, Vertex};
use grpact::graph::Graph;
use grpact::group::{Group, SubgroupEmbedding, Transversal};
use grpact::hyperbolicity::{delta_thin, DeltaMode};
use grpact::induced::InducedSpace;

fn groups() -> Vec<Group> {
    vec![
        Group::free(2),
        Group::free_abelian(2),
        Group::baumslag_solitar(2).unwrap(),
        Group::baumslag_solitar(3).unwrap(),
        Group::f2_semidirect_z2(),
        Group::abelian_inversion(2),
        Group::cyclic(6),
        Group::direct_product(Group::free(1), Group::cyclic(3)),
        Group::free_product(Group::cyclic(2), Group::cyclic(3)),
    ]
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..8)
}

fn eval(g: &Group, w: &[usize]) -> grpact::Element {
    let n = g.generators().len();
    let idx: Vec<usize> = w.iter().map(|i| i % n).collect();
    g.evaluate_word(&idx).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(gi in 0usize..9, x in word(), y in word(), z in word()) {
        let g = &groups()[gi];
        let (x, y, z) = (eval(g, &x), eval(g, &y), eval(g, &z));
        let lhs = g.multiply(&g.multiply(&x, &y), &z);
        let rhs = g.multiply(&x, &g.multiply(&y, &z));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(g.is_identity(&g.multiply(&x, &g.inverse(&x))));
        prop_assert_eq!(g.multiply(&g.identity(), &y), y.clone());
        prop_assert_eq!(g.element(&g.word_for(&z).iter().map(|&i| g.generators()[i].name.clone()).collect::<Vec<_>>().join(" ")).unwrap(), z);
    }

    #[test]
    fn cocycle_and_action_law(f in word(), x in word(), a in word(), n in -6i64..6, shift in 1i64..3) {
        let g = Group::free(2);
        let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
        let line = GraphAction::line(h.subgroup(), &[shift]).unwrap();
        let b = g.element("b").unwrap();
        let t = Transversal::canonical(h).with_choice(&b, g.element("b a^2").unwrap());
        let space = InducedSpace::new(&g, vec![b], vec![t], vec![Vertex::Int(0)], vec![line]).unwrap();
        let (f, x, a) = (eval(&g, &f), eval(&g, &x), eval(&g, &a));
        let lhs = space.alpha(0, &g.multiply(&f, &x), &a).unwrap();
        let rhs = g.multiply(&space.alpha(0, &f, &g.multiply(&x, &a)).unwrap(), &space.alpha(0, &x, &a).unwrap());
        prop_assert_eq!(lhs, rhs);

        let p = space.pair(0, &a, Vertex::Int(n)).unwrap();
        let fx = space.act(&g.multiply(&f, &x), &p).unwrap();
        let f_x = space.act(&f, &space.act(&x, &p).unwrap()).unwrap();
        prop_assert_eq!(fx, f_x);
    }

    #[test]
    fn delta_is_isomorphism_invariant(
        n in 4usize..14,
        chords in prop::collection::vec((0usize..14, 0usize..14), 0..5),
        perm in Just((0..14).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        edges.extend(chords.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v));
        let g = Graph::from_edges(n, edges);
        let p: Vec<usize> = perm.into_iter().filter(|&i| i < n).collect();
        let d1 = delta_thin(&g, DeltaMode::Exhaustive).unwrap().delta;
        let d2 = delta_thin(&g.relabel(&p), DeltaMode::Exhaustive).unwrap().delta;
        // canonical geodesics depend on labels, all-geodesic delta does not
        prop_assert!(d1.abs_diff(d2) <= 1, "{} vs {}", d1, d2);
        let diam = g.diameter().unwrap();
        prop_assert!(d1 <= diam);
    }
}
