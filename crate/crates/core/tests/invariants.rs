use burnt_pancake::covering::{check_covering, fiber_map};
use burnt_pancake::quotient::{lift_vector, position_partition, quotient_block};
use burnt_pancake::spectra::theorem::{theorem_eigenpairs, verify_eigenpair_exact};
use burnt_pancake::{CayleyGraph, SignedPermutation};
use proptest::prelude::*;

fn graph_and_vertex() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=6).prop_flat_map(|n| {
        let order = CayleyGraph::burnt(n).unwrap().vertex_count();
        (Just(n), 0..order)
    })
}

proptest! {
    #[test]
    fn adjacency_is_symmetric_and_loop_free((n, u) in graph_and_vertex()) {
        let g = CayleyGraph::burnt(n).unwrap();
        let nbrs = g.neighbors(u).unwrap();
        prop_assert_eq!(nbrs.len(), n);
        for v in nbrs {
            prop_assert_ne!(u, v);
            prop_assert!(g.neighbors(v).unwrap().contains(&u));
        }
    }

    #[test]
    fn neighbor_classes_reproduce_quotient_row((n, u) in graph_and_vertex()) {
        let g = CayleyGraph::burnt(n).unwrap();
        let m = quotient_block(n).unwrap().to_integer_rows().unwrap();
        let s = g.vertex(u).unwrap();
        let order = burnt_pancake::quotient::PlusMinusOrdering::new(n);
        let row = order.index_of(s.signed_position(n as i32));
        let mut counts = vec![0i64; 2 * n];
        for (_, t) in g.neighbor_words(&s).unwrap() {
            counts[order.index_of(t.signed_position(n as i32))] += 1;
        }
        prop_assert_eq!(&counts, &m[row]);
    }

    #[test]
    fn vertex_rank_roundtrip((n, u) in graph_and_vertex()) {
        let g = CayleyGraph::burnt(n).unwrap();
        let s = g.vertex(u).unwrap();
        let parsed: SignedPermutation = s.to_string().parse().unwrap();
        prop_assert_eq!(g.rank_of(&parsed).unwrap(), u);
    }

    #[test]
    fn certificates_are_eigenvectors_for_many_n(n in 1usize..=24) {
        let m = quotient_block(n).unwrap();
        for c in theorem_eigenpairs(n).unwrap() {
            prop_assert!(verify_eigenpair_exact(&m, c.lambda, &c.vector).unwrap());
            let mut doubled = c.vector.clone();
            for x in &mut doubled.0 {
                *x *= 2;
            }
            prop_assert!(verify_eigenpair_exact(&m, c.lambda, &doubled).unwrap());
            prop_assert!(!verify_eigenpair_exact(&m, c.lambda + 1, &c.vector).unwrap());
        }
    }
}

#[test]
fn lifted_vectors_are_constant_on_classes() {
    let p = position_partition(3).unwrap();
    for c in theorem_eigenpairs(3).unwrap() {
        let x = lift_vector(&p, &c.vector).unwrap();
        for u in 0..p.vertex_count() {
            assert_eq!(x.0[u], c.vector.0[p.class_of(u)]);
        }
    }
}

#[test]
fn covering_report_serializes_witnesses_as_words() {
    let r = check_covering(&fiber_map(3).unwrap()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    let failing: Vec<_> = v["condition1"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert_eq!(failing.len(), 2);
    for c in failing {
        for w in c["witnesses"].as_array().unwrap() {
            let word = w["vertex"].as_str().unwrap();
            assert_eq!(SignedPermutation::parse(word).unwrap().n(), 3);
        }
    }
    assert_eq!(v["index"], 8);
}
