//! Monotone searcher scripts from elimination forests.

use crate::digraph::Digraph;
use crate::game::{ScriptMove, SearcherScript};
use crate::rank::{verify_elimination_forest, EliminationForest, EliminationNode, ForestError};
use crate::vertex_set::VertexSet;

/// Script that clears the graph component by component in topological order.
/// A single vertex is guarded and released; a cyclic component keeps a
/// searcher on its forest vertex while the rest of the component is cleared
/// the same way. Uses at most `depth(f) + 1` searchers.
pub fn synthesize_search_script(g: &Digraph, f: &EliminationForest) -> Result<SearcherScript, ForestError> {
    verify_elimination_forest(g, f)?;
    let mut moves = Vec::new();
    clear(g, g.vertices(), &f.roots, &mut moves);
    Ok(SearcherScript { moves })
}

fn clear(g: &Digraph, scope: VertexSet, nodes: &[EliminationNode], moves: &mut Vec<ScriptMove>) {
    for &c in g.view().within(scope).scc_decompose().components() {
        if c.len() == 1 {
            moves.push(ScriptMove::Place(c.first().unwrap()));
        } else {
            let node = nodes.iter().find(|n| n.scope == c).expect("verified forest covers every cyclic component");
            moves.push(ScriptMove::Place(node.vertex));
            clear(g, c.without(node.vertex), &node.children, moves);
        }
        moves.push(ScriptMove::Remove);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::cycle_rank;
    use ScriptMove::{Place, Remove};

    #[test]
    fn path_and_cycle_scripts() {
        let p = Digraph::path(3);
        let s = synthesize_search_script(&p, &cycle_rank(&p).witness).unwrap();
        assert_eq!(s.moves, vec![Place(0), Remove, Place(1), Remove, Place(2), Remove]);
        assert_eq!(s.max_depth(), Some(1));

        let c = Digraph::cycle(3);
        let s = synthesize_search_script(&c, &cycle_rank(&c).witness).unwrap();
        assert_eq!(s.moves, vec![Place(0), Place(1), Remove, Place(2), Remove, Remove]);
        assert_eq!(s.max_depth(), Some(2));
    }

    #[test]
    fn triangle_script_depth() {
        let g = Digraph::bidirected_complete(3);
        let s = synthesize_search_script(&g, &cycle_rank(&g).witness).unwrap();
        assert_eq!(s.max_depth(), Some(3));
    }

    #[test]
    fn invalid_forest_is_rejected() {
        let c = Digraph::cycle(3);
        assert!(synthesize_search_script(&c, &EliminationForest::default()).is_err());
    }
}
