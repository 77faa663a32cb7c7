//! Exact cycle-rank, LIFO graph-searching games and their obstruction
//! certificates on small simple digraphs.

pub mod certificates;
pub mod digraph;
pub mod equiv;
pub mod game;
pub mod io;
pub mod par;
pub mod rank;
pub mod vertex_set;

pub use digraph::{Digraph, GraphError, SccDecomposition, View};
pub use par::Execution;
pub use rank::{
    cycle_rank, cycle_rank_decision, cycle_rank_with, verify_elimination_forest, EliminationForest,
    EliminationNode, ForestError, RankResult, RankSolver,
};
pub use vertex_set::{Vertex, VertexSet, MAX_VERTICES};
