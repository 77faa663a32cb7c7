mod common;

use common::{arb_digraph, brute_sccs, reach_from};
use cyclerank::{Digraph, VertexSet};
use proptest::prelude::*;

fn masks(sets: &[VertexSet]) -> Vec<u64> {
    let mut m: Vec<u64> = sets.iter().map(|s| s.bits()).collect();
    m.sort_unstable();
    m
}

proptest! {
    #[test]
    fn sccs_match_transitive_closure(g in arb_digraph(7), keep in any::<u64>()) {
        let keep = VertexSet::from_bits(keep) & g.vertices();
        let view = g.view().within(keep);
        let scc = view.scc_decompose();
        prop_assert_eq!(masks(scc.components()), brute_sccs(&g, keep.bits()));
    }

    #[test]
    fn sccs_partition_in_topological_order(g in arb_digraph(8)) {
        let scc = g.view().scc_decompose();
        let union = scc.components().iter().fold(VertexSet::EMPTY, |a, &c| a | c);
        prop_assert_eq!(union, g.vertices());
        prop_assert_eq!(scc.components().iter().map(|c| c.len()).sum::<usize>(), g.vertex_count());
        for (u, v) in g.edges() {
            prop_assert!(scc.component_index(u).unwrap() <= scc.component_index(v).unwrap());
        }
    }

    #[test]
    fn reach_is_closed_and_idempotent(g in arb_digraph(8), seeds in any::<u64>()) {
        let seeds = VertexSet::from_bits(seeds) & g.vertices();
        let view = g.view();
        let r = view.reach_from(seeds);
        prop_assert_eq!(r.bits(), reach_from(&g, g.vertices().bits(), seeds.bits()));
        prop_assert_eq!(view.reach_from(r), r);
        prop_assert!(view.is_successor_closed(r));
        let back = view.reach_to(seeds);
        prop_assert_eq!(view.reach_to(back), back);
    }

    #[test]
    fn extract_keeps_induced_edges(g in arb_digraph(7), keep in any::<u64>()) {
        let keep = VertexSet::from_bits(keep) & g.vertices();
        prop_assume!(!keep.is_empty());
        let sub = g.extract(keep).unwrap();
        let ids = keep.to_vec();
        prop_assert_eq!(sub.vertex_count(), keep.len());
        for (u, v) in sub.edges() {
            prop_assert!(g.has_edge(ids[u], ids[v]));
        }
        let induced = g.edges().filter(|&(u, v)| keep.contains(u) && keep.contains(v)).count();
        prop_assert_eq!(sub.edge_count(), induced);
    }
}

#[test]
fn initial_components_and_hash() {
    let g = Digraph::new(5, [(0, 1), (1, 0), (1, 2), (3, 2), (2, 4)]).unwrap();
    let initial = g.view().initial_components();
    assert_eq!(masks(&initial), vec![0b00011, 0b01000]);
    assert_eq!(g.graph_hash().len(), 64);
    assert_ne!(g.graph_hash(), Digraph::new(6, g.edges()).unwrap().graph_hash());
    assert_eq!(g.canonical_edge_list().lines().next(), Some("n 5"));
}

#[test]
fn rejects_non_simple_input() {
    assert!(Digraph::new(2, [(0, 0)]).is_err());
    assert!(Digraph::new(2, [(0, 1), (0, 1)]).is_err());
    assert!(Digraph::new(2, [(0, 2)]).is_err());
    assert!(Digraph::new(0, []).is_err());
    assert!(Digraph::new(65, []).is_err());
}
