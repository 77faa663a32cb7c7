mod common;

use common::arb_digraph;
use cyclerank::io::{
    generate_random, parse_dot_subset, parse_edge_list, parse_graph, to_edge_list, GeneratorConfig, ParseErrorKind,
};
use cyclerank::Digraph;
use proptest::prelude::*;

fn to_dot(g: &Digraph) -> String {
    let mut out = String::from("digraph g {\n");
    for v in g.vertices() {
        out.push_str(&format!("  v{v} [shape=circle];\n"));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  v{u} -> v{v} [weight=1];\n"));
    }
    out.push('}');
    out
}

proptest! {
    #[test]
    fn edge_list_round_trip(g in arb_digraph(10)) {
        let text = to_edge_list(&g);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g.clone());
        prop_assert_eq!(parse_graph(&text).unwrap().graph_hash(), g.graph_hash());
    }

    #[test]
    fn dot_matches_edge_list(g in arb_digraph(8)) {
        let dot = parse_dot_subset(&to_dot(&g)).unwrap();
        prop_assert_eq!(dot.graph_hash(), g.graph_hash());
        prop_assert_eq!(parse_graph(&to_dot(&g)).unwrap(), dot);
    }

    #[test]
    fn generator_is_deterministic(n in 1usize..12, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let cfg = GeneratorConfig { n, p, seed };
        prop_assert_eq!(generate_random(cfg).unwrap(), generate_random(cfg).unwrap());
    }
}

#[test]
fn parse_examples() {
    assert_eq!(parse_edge_list("a b\nb c").unwrap().edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    assert_eq!(parse_edge_list("a a").unwrap_err().kind, ParseErrorKind::SelfLoop("a".into()));
    assert_eq!(parse_edge_list("# x\n1 2\n2 1").unwrap().edge_count(), 2);
    assert_eq!(parse_dot_subset("digraph{a->b;b->c;}").unwrap(), parse_edge_list("a b\nb c").unwrap());
    assert!(matches!(parse_dot_subset("graph{a--b;}").unwrap_err().kind, ParseErrorKind::Unsupported(_)));
    assert_eq!(parse_dot_subset("digraph{a->b[label=x];}").unwrap().edge_count(), 1);
}

#[test]
fn generator_examples() {
    assert_eq!(generate_random(GeneratorConfig { n: 1, p: 1.0, seed: 3 }).unwrap().vertex_count(), 1);
    assert_eq!(generate_random(GeneratorConfig { n: 3, p: 1.0, seed: 3 }).unwrap(), Digraph::bidirected_complete(3));
    assert_eq!(generate_random(GeneratorConfig { n: 5, p: 0.0, seed: 3 }).unwrap().edge_count(), 0);
}
