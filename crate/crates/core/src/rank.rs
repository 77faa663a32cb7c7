//! Exact cycle-rank.
//!
//! The recursion is evaluated over strongly connected vertex subsets of one host
//! graph. Each strongly connected subproblem is memoized by its vertex set
//! together with the lowest-id vertex whose deletion attains the minimum, which
//! is all that is needed to rebuild an [`EliminationForest`] afterwards.

use std::cell::RefCell;
use std::collections::HashMap;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Digraph;
use crate::par::Execution;
use crate::vertex_set::{Vertex, VertexSet};

/// One deletion step: `vertex` is removed from the strongly connected `scope`,
/// and `children` cover the cyclic components of what remains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationNode {
    pub vertex: Vertex,
    pub scope: VertexSet,
    #[serde(default)]
    pub children: Vec<EliminationNode>,
}

impl EliminationNode {
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(EliminationNode::depth).max().unwrap_or(0)
    }
}

/// Certificate for an upper bound on cycle-rank. Acyclic parts of the graph
/// contribute no nodes, so an acyclic graph has the empty forest.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationForest {
    pub roots: Vec<EliminationNode>,
}

impl EliminationForest {
    pub fn depth(&self) -> usize {
        self.roots.iter().map(EliminationNode::depth).max().unwrap_or(0)
    }

    /// Root node whose scope is exactly `scope`.
    pub fn root_for(&self, scope: VertexSet) -> Option<&EliminationNode> {
        self.roots.iter().find(|n| n.scope == scope)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub witness: EliminationForest,
}

/// Memoizing cycle-rank evaluator bound to one host digraph.
///
/// The memo table is a concurrent map; values for a key are unique, so racing
/// inserts from parallel branches are harmless.
pub struct RankSolver<'g> {
    graph: &'g Digraph,
    memo: DashMap<VertexSet, (u8, u8)>,
    exec: Execution,
}

impl<'g> RankSolver<'g> {
    pub fn new(graph: &'g Digraph) -> Self {
        Self::with_execution(graph, Execution::default())
    }

    pub fn with_execution(graph: &'g Digraph, exec: Execution) -> Self {
        RankSolver { graph, memo: DashMap::new(), exec }
    }

    pub fn graph(&self) -> &'g Digraph {
        self.graph
    }

    /// Cycle-rank of the subgraph induced by `set`.
    pub fn rank_of(&self, set: VertexSet) -> usize {
        let comps = self.graph.view().within(set).nontrivial_components();
        self.exec
            .map(&comps, |&c| self.strong_rank(c).0)
            .into_iter()
            .max()
            .unwrap_or(0)
    }

    fn rank_sequential(&self, set: VertexSet) -> usize {
        self.graph
            .view()
            .within(set)
            .nontrivial_components()
            .into_iter()
            .map(|c| self.strong_rank(c).0)
            .max()
            .unwrap_or(0)
    }

    /// Rank of a strongly connected set and the lowest-id vertex whose removal
    /// attains it (`None` for a single vertex).
    pub fn strong_rank(&self, scope: VertexSet) -> (usize, Option<Vertex>) {
        if scope.len() <= 1 {
            return (0, None);
        }
        if let Some(hit) = self.memo.get(&scope) {
            let (r, v) = *hit;
            return (r as usize, Some(v as Vertex));
        }
        let view = self.graph.view();
        let mut best: Option<(usize, Vertex)> = None;
        for v in scope {
            let residual = scope.without(v);
            if let Some((b, _)) = best {
                if b == 1 {
                    break;
                }
                let lower = usize::from(view.within(residual).has_cycle());
                if 1 + lower >= b {
                    continue;
                }
            }
            let r = 1 + self.rank_sequential(residual);
            if best.is_none_or(|(b, _)| r < b) {
                best = Some((r, v));
            }
        }
        let (r, v) = best.expect("scope has at least two vertices");
        self.memo.insert(scope, (r as u8, v as u8));
        (r, Some(v))
    }

    /// Elimination forest over the cyclic components of `set`, following the
    /// memoized minimizing vertices.
    pub fn forest(&self, set: VertexSet) -> EliminationForest {
        let roots = self
            .graph
            .view()
            .within(set)
            .nontrivial_components()
            .into_iter()
            .map(|c| self.node(c))
            .collect();
        EliminationForest { roots }
    }

    fn node(&self, scope: VertexSet) -> EliminationNode {
        let (_, v) = self.strong_rank(scope);
        let vertex = v.expect("nontrivial scope");
        let children = self
            .graph
            .view()
            .within(scope.without(vertex))
            .nontrivial_components()
            .into_iter()
            .map(|c| self.node(c))
            .collect();
        EliminationNode { vertex, scope, children }
    }

    /// Number of memoized strongly connected subproblems.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// Exact cycle-rank of `g` with a witness forest of the same depth.
pub fn cycle_rank(g: &Digraph) -> RankResult {
    cycle_rank_with(g, Execution::default())
}

pub fn cycle_rank_with(g: &Digraph, exec: Execution) -> RankResult {
    let solver = RankSolver::with_execution(g, exec);
    let rank = solver.rank_of(g.vertices());
    let witness = solver.forest(g.vertices());
    RankResult { rank, witness }
}

/// Decides `cr(g) <= k`, stopping at the first deletion that fits the budget.
pub fn cycle_rank_decision(g: &Digraph, k: usize) -> bool {
    let decider = Decider { graph: g, bounds: RefCell::new(HashMap::new()) };
    decider.within(g.vertices(), k)
}

struct Decider<'g> {
    graph: &'g Digraph,
    // known (lower, upper) bounds on the rank of strongly connected sets
    bounds: RefCell<HashMap<VertexSet, (usize, usize)>>,
}

impl Decider<'_> {
    fn within(&self, set: VertexSet, k: usize) -> bool {
        self.graph
            .view()
            .within(set)
            .nontrivial_components()
            .into_iter()
            .all(|c| self.strong_within(c, k))
    }

    fn strong_within(&self, scope: VertexSet, k: usize) -> bool {
        let (lo, hi) = self.bounds.borrow().get(&scope).copied().unwrap_or((1, scope.len() - 1));
        if hi <= k {
            return true;
        }
        if lo > k {
            return false;
        }
        let ok = scope.iter().any(|v| self.within(scope.without(v), k - 1));
        let entry = if ok { (lo, hi.min(k)) } else { (lo.max(k + 1), hi) };
        self.bounds.borrow_mut().insert(scope, entry);
        ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("node {path:?}: scope {scope} is not strongly connected")]
    NotStronglyConnected { path: Vec<usize>, scope: VertexSet },
    #[error("node {path:?}: vertex {vertex} is not in scope {scope}")]
    VertexNotInScope { path: Vec<usize>, vertex: Vertex, scope: VertexSet },
    #[error("node {path:?}: child scopes {found:?} differ from the cyclic components {expected:?}")]
    ChildrenMismatch { path: Vec<usize>, expected: Vec<VertexSet>, found: Vec<VertexSet> },
    #[error("root scopes {found:?} differ from the cyclic components {expected:?} of the graph")]
    RootsMismatch { expected: Vec<VertexSet>, found: Vec<VertexSet> },
    #[error("node {path:?}: scope {scope} uses vertices outside the graph")]
    OutOfRange { path: Vec<usize>, scope: VertexSet },
}

impl ForestError {
    /// Child-index path from the roots to the failing node (empty for root-level errors).
    pub fn path(&self) -> &[usize] {
        match self {
            ForestError::NotStronglyConnected { path, .. }
            | ForestError::VertexNotInScope { path, .. }
            | ForestError::ChildrenMismatch { path, .. }
            | ForestError::OutOfRange { path, .. } => path,
            ForestError::RootsMismatch { .. } => &[],
        }
    }
}

/// Checks every node of `forest` against `g` and returns its depth, an upper
/// bound on `cr(g)`.
pub fn verify_elimination_forest(g: &Digraph, forest: &EliminationForest) -> Result<usize, ForestError> {
    let expected = sorted(g.view().nontrivial_components());
    let found = sorted(forest.roots.iter().map(|n| n.scope).collect());
    let mut path = Vec::new();
    for (i, root) in forest.roots.iter().enumerate() {
        path.push(i);
        check_node(g, root, &mut path)?;
        path.pop();
    }
    if expected != found {
        return Err(ForestError::RootsMismatch { expected, found });
    }
    Ok(forest.depth())
}

fn check_node(g: &Digraph, node: &EliminationNode, path: &mut Vec<usize>) -> Result<(), ForestError> {
    if !node.scope.is_subset(g.vertices()) {
        return Err(ForestError::OutOfRange { path: path.clone(), scope: node.scope });
    }
    let view = g.view().within(node.scope);
    if !view.is_strongly_connected() {
        return Err(ForestError::NotStronglyConnected { path: path.clone(), scope: node.scope });
    }
    if !node.scope.contains(node.vertex) {
        return Err(ForestError::VertexNotInScope {
            path: path.clone(),
            vertex: node.vertex,
            scope: node.scope,
        });
    }
    for (i, child) in node.children.iter().enumerate() {
        path.push(i);
        check_node(g, child, path)?;
        path.pop();
    }
    let expected = sorted(view.without(VertexSet::singleton(node.vertex)).nontrivial_components());
    let found = sorted(node.children.iter().map(|c| c.scope).collect());
    if expected != found {
        return Err(ForestError::ChildrenMismatch { path: path.clone(), expected, found });
    }
    Ok(())
}

fn sorted(mut sets: Vec<VertexSet>) -> Vec<VertexSet> {
    sets.sort();
    sets
}
