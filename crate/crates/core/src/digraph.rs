//! Simple finite digraphs over dense vertex ids and the structural queries the
//! solvers need: strongly connected components, reachability and induced
//! subgraph views.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::vertex_set::{Vertex, VertexSet, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("{0} vertices requested, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(Vertex, Vertex),
}

/// A simple digraph (no self-loops, no parallel edges) on vertices `0..n`.
///
/// Adjacency is kept as one [`VertexSet`] per vertex in both directions, so
/// every query below is a handful of word operations per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    succ: Vec<VertexSet>,
    pred: Vec<VertexSet>,
    labels: Vec<String>,
}

impl Digraph {
    /// Builds a digraph on `n` vertices labelled `"0".."n-1"`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        Self::with_labels((0..n).map(|v| v.to_string()).collect(), edges)
    }

    /// Builds a digraph whose vertex `i` carries `labels[i]`.
    pub fn with_labels(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut succ = vec![VertexSet::EMPTY; n];
        let mut pred = vec![VertexSet::EMPTY; n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if succ[u].contains(v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            succ[u].insert(v);
            pred[v].insert(u);
        }
        Ok(Digraph { succ, pred, labels })
    }

    /// Directed path `0 -> 1 -> .. -> n-1`.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    /// Directed cycle `0 -> 1 -> .. -> n-1 -> 0`; `n >= 2`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 2, "a simple directed cycle needs two vertices");
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    /// Complete digraph with both arcs between every pair of vertices.
    pub fn bidirected_complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Self::new(n, edges).expect("valid complete digraph")
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|s| s.len()).sum()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// Edges in lexicographic `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |v| (u, v)))
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.succ.get(u).is_some_and(|s| s.contains(v))
    }

    pub fn successors(&self, v: Vertex) -> VertexSet {
        self.succ[v]
    }

    pub fn predecessors(&self, v: Vertex) -> VertexSet {
        self.pred[v]
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn view(&self) -> View<'_> {
        View { graph: self, alive: self.vertices() }
    }

    /// View of the subgraph induced by `V(self) \ drop`, keeping original ids.
    pub fn induced_subgraph(&self, drop: VertexSet) -> Result<View<'_>, GraphError> {
        self.check_subset(drop)?;
        Ok(View { graph: self, alive: self.vertices() - drop })
    }

    /// View of the subgraph induced by `keep`.
    pub fn restrict(&self, keep: VertexSet) -> Result<View<'_>, GraphError> {
        self.check_subset(keep)?;
        Ok(View { graph: self, alive: keep })
    }

    pub(crate) fn check_subset(&self, set: VertexSet) -> Result<(), GraphError> {
        let n = self.vertex_count();
        if !set.is_subset(self.vertices()) {
            return Err(GraphError::VertexOutOfRange { vertex: set.span() - 1, n });
        }
        Ok(())
    }

    /// True iff no edge leaves `h` into the rest of the graph.
    pub fn is_successor_closed(&self, h: VertexSet) -> bool {
        self.view().is_successor_closed(h)
    }

    /// Canonical text form used for hashing: a header line `n <count>` followed by
    /// one `u v` line per edge in sorted dense-id order.
    pub fn canonical_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.vertex_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Lower-case hex SHA-256 of [`Digraph::canonical_edge_list`].
    pub fn graph_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_edge_list().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// The same graph restricted to `keep`, renumbered densely in id order.
    pub fn extract(&self, keep: VertexSet) -> Result<Digraph, GraphError> {
        self.check_subset(keep)?;
        let ids: Vec<Vertex> = keep.to_vec();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in ids.iter().enumerate() {
            new_id[v] = i;
        }
        let labels = ids.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges()
            .filter(|&(u, v)| keep.contains(u) && keep.contains(v))
            .map(|(u, v)| (new_id[u], new_id[v]));
        Digraph::with_labels(labels, edges)
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A host digraph together with the set of vertices still present.
#[derive(Clone, Copy)]
pub struct View<'g> {
    graph: &'g Digraph,
    alive: VertexSet,
}

impl<'g> View<'g> {
    pub fn graph(&self) -> &'g Digraph {
        self.graph
    }

    pub fn vertices(&self) -> VertexSet {
        self.alive
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    #[must_use]
    pub fn without(self, drop: VertexSet) -> Self {
        View { graph: self.graph, alive: self.alive - drop }
    }

    #[must_use]
    pub fn within(self, keep: VertexSet) -> Self {
        View { graph: self.graph, alive: self.alive & keep }
    }

    pub fn successors(&self, v: Vertex) -> VertexSet {
        self.graph.succ[v] & self.alive
    }

    pub fn predecessors(&self, v: Vertex) -> VertexSet {
        self.graph.pred[v] & self.alive
    }

    /// Vertices reachable from `seeds` by directed paths (length 0 included).
    pub fn reach_from(&self, seeds: VertexSet) -> VertexSet {
        closure(&self.graph.succ, self.alive, seeds)
    }

    /// Vertices that can reach `seeds`.
    pub fn reach_to(&self, seeds: VertexSet) -> VertexSet {
        closure(&self.graph.pred, self.alive, seeds)
    }

    pub fn is_successor_closed(&self, h: VertexSet) -> bool {
        let h = h & self.alive;
        h.iter().all(|v| self.successors(v).is_subset(h))
    }

    pub fn scc_decompose(&self) -> SccDecomposition {
        SccDecomposition::compute(*self)
    }

    pub fn is_strongly_connected(&self) -> bool {
        match self.alive.first() {
            None => false,
            Some(v) => self.reach_from(VertexSet::singleton(v)) == self.alive
                && self.reach_to(VertexSet::singleton(v)) == self.alive,
        }
    }

    /// True iff the view contains a directed cycle.
    pub fn has_cycle(&self) -> bool {
        // peel sources until nothing changes; whatever survives contains a cycle
        let mut rest = self.alive;
        loop {
            let sources: VertexSet =
                rest.iter().filter(|&v| (self.graph.pred[v] & rest).is_empty()).collect();
            if sources.is_empty() {
                return !rest.is_empty();
            }
            rest = rest - sources;
        }
    }

    /// Strongly connected components with no incoming edge from the rest of the view.
    pub fn initial_components(&self) -> Vec<VertexSet> {
        self.scc_decompose()
            .components()
            .iter()
            .copied()
            .filter(|&c| c.iter().all(|v| self.predecessors(v).is_subset(c)))
            .collect()
    }

    /// Components that contain at least one cycle, i.e. with two or more vertices.
    pub fn nontrivial_components(&self) -> Vec<VertexSet> {
        self.scc_decompose().components().iter().copied().filter(|c| c.len() >= 2).collect()
    }

    /// The strongly connected component containing `v`, or empty if `v` is not in the view.
    pub fn component_of(&self, v: Vertex) -> VertexSet {
        if !self.alive.contains(v) {
            return VertexSet::EMPTY;
        }
        let s = VertexSet::singleton(v);
        self.reach_from(s) & self.reach_to(s)
    }
}

fn closure(adj: &[VertexSet], alive: VertexSet, seeds: VertexSet) -> VertexSet {
    let mut seen = seeds & alive;
    let mut frontier = seen;
    while !frontier.is_empty() {
        let mut next = VertexSet::EMPTY;
        for v in frontier {
            next = next | adj[v];
        }
        frontier = next & alive & !seen;
        seen = seen | frontier;
    }
    seen
}

/// Strongly connected components of a view, listed in a topological order of the
/// condensation: every edge between distinct components goes from a lower index
/// to a higher one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    components: Vec<VertexSet>,
    comp_of: Vec<Option<usize>>,
}

impl SccDecomposition {
    fn compute(view: View<'_>) -> Self {
        let n = view.graph.vertex_count();
        let mut tarjan = Tarjan {
            view,
            index: vec![usize::MAX; n],
            low: vec![0; n],
            on_stack: VertexSet::EMPTY,
            stack: Vec::with_capacity(n),
            next_index: 0,
            found: Vec::new(),
        };
        for v in view.alive {
            if tarjan.index[v] == usize::MAX {
                tarjan.visit(v);
            }
        }
        // Tarjan emits sinks first
        let mut components = tarjan.found;
        components.reverse();
        let mut comp_of = vec![None; n];
        for (i, c) in components.iter().enumerate() {
            for v in *c {
                comp_of[v] = Some(i);
            }
        }
        SccDecomposition { components, comp_of }
    }

    /// Components in topological order.
    pub fn components(&self) -> &[VertexSet] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Index of the component holding `v`, `None` if `v` is outside the view.
    pub fn component_index(&self, v: Vertex) -> Option<usize> {
        self.comp_of.get(v).copied().flatten()
    }

    /// Positions of the components in topological order; components are stored
    /// already sorted, so this is the identity permutation.
    pub fn topo_order(&self) -> impl Iterator<Item = usize> {
        0..self.components.len()
    }
}

struct Tarjan<'g> {
    view: View<'g>,
    index: Vec<usize>,
    low: Vec<usize>,
    on_stack: VertexSet,
    stack: Vec<Vertex>,
    next_index: usize,
    found: Vec<VertexSet>,
}

impl Tarjan<'_> {
    // recursion depth is bounded by the 64-vertex limit
    fn visit(&mut self, v: Vertex) {
        self.index[v] = self.next_index;
        self.low[v] = self.next_index;
        self.next_index += 1;
        self.stack.push(v);
        self.on_stack.insert(v);
        for w in self.view.successors(v) {
            if self.index[w] == usize::MAX {
                self.visit(w);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack.contains(w) {
                self.low[v] = self.low[v].min(self.index[w]);
            }
        }
        if self.low[v] == self.index[v] {
            let mut comp = VertexSet::EMPTY;
            while let Some(w) = self.stack.pop() {
                self.on_stack.remove(w);
                comp.insert(w);
                if w == v {
                    break;
                }
            }
            self.found.push(comp);
        }
    }
}
