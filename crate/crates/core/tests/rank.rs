mod common;

use common::{arb_digraph, naive_cycle_rank};
use cyclerank::{
    cycle_rank, cycle_rank_decision, cycle_rank_with, verify_elimination_forest, Digraph, EliminationNode, Execution,
    ForestError, VertexSet,
};
use proptest::prelude::*;

fn relabel(g: &Digraph, perm: &[usize]) -> Digraph {
    Digraph::new(g.vertex_count(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

proptest! {
    #[test]
    fn matches_memo_free_recursion(g in arb_digraph(6)) {
        prop_assert_eq!(cycle_rank(&g).rank, naive_cycle_rank(&g, g.vertices().bits()));
    }

    #[test]
    fn witness_forest_certifies_the_rank(g in arb_digraph(8)) {
        let r = cycle_rank(&g);
        prop_assert_eq!(verify_elimination_forest(&g, &r.witness), Ok(r.rank));
        prop_assert_eq!(r.witness.depth(), r.rank);
    }

    #[test]
    fn rank_is_max_over_components(g in arb_digraph(8)) {
        let whole = cycle_rank(&g).rank;
        let parts = g.view().scc_decompose().components().iter()
            .map(|&c| cycle_rank(&g.extract(c).unwrap()).rank)
            .max()
            .unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn deleting_a_vertex_never_raises_the_rank(g in arb_digraph(8), v in 0usize..8) {
        prop_assume!(g.vertex_count() > 1);
        let v = v % g.vertex_count();
        let sub = g.extract(g.vertices().without(v)).unwrap();
        let (big, small) = (cycle_rank(&g).rank, cycle_rank(&sub).rank);
        prop_assert!(small <= big && big <= small + 1);
    }

    #[test]
    fn invariant_under_relabelling(g in arb_digraph(7), seed in any::<u64>()) {
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(cycle_rank(&g).rank, cycle_rank(&relabel(&g, &perm)).rank);
    }

    #[test]
    fn decision_matches_value(g in arb_digraph(7), k in 0usize..5) {
        prop_assert_eq!(cycle_rank_decision(&g, k), cycle_rank(&g).rank <= k);
    }

    #[test]
    fn modes_agree(g in arb_digraph(9)) {
        prop_assert_eq!(cycle_rank_with(&g, Execution::Sequential), cycle_rank_with(&g, Execution::Parallel));
    }
}

#[test]
fn known_values() {
    assert_eq!(cycle_rank(&Digraph::path(5)).rank, 0);
    assert_eq!(cycle_rank(&Digraph::cycle(5)).rank, 1);
    for n in 1..=6 {
        assert_eq!(cycle_rank(&Digraph::bidirected_complete(n)).rank, n - 1);
    }
    // two 2-cycles joined by a single edge
    let g = Digraph::new(4, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]).unwrap();
    assert_eq!(cycle_rank(&g).rank, 1);
}

#[test]
fn broken_forests_are_rejected() {
    let g = Digraph::cycle(3);
    let mut f = cycle_rank(&g).witness;
    f.roots[0].vertex = 7;
    assert!(matches!(verify_elimination_forest(&g, &f), Err(ForestError::VertexNotInScope { .. })));

    let g = Digraph::bidirected_complete(3);
    let mut f = cycle_rank(&g).witness;
    f.roots[0].children.clear();
    let err = verify_elimination_forest(&g, &f).unwrap_err();
    assert!(matches!(err, ForestError::ChildrenMismatch { .. }));
    assert_eq!(err.path(), &[0]);

    let stray = EliminationNode { vertex: 0, scope: VertexSet::from_bits(0b11), children: vec![] };
    let mut f = cycle_rank(&Digraph::path(2)).witness;
    f.roots.push(stray);
    assert!(verify_elimination_forest(&Digraph::path(2), &f).is_err());
}
