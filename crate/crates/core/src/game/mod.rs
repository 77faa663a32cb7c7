//! The LIFO graph-searching game: positions, legal moves, fugitive responses,
//! exact solving and play simulation.

mod play;
mod solve;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Digraph;
use crate::vertex_set::{Vertex, VertexSet};

pub use play::{
    check_strategy, play, Escape, FirstResponseFugitive, FugitiveStrategy, Outcome, PlayError, PlayTrace, Searcher, StrategyFailure,
};
pub use solve::{
    all_search_numbers, all_search_numbers_with, solve, solve_at, solve_experimental, GameSolution,
    Restrictions, ScriptMove, SearchNumbers, SearcherScript, SearcherStrategy, SolveError, SolveReport,
    StrategyEntry, StrategyTable,
};

/// The four game variants: invisible or visible fugitive, moving along paths or
/// only inside strongly connected components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameVariant {
    I,
    Isc,
    V,
    Vsc,
}

impl GameVariant {
    pub const ALL: [GameVariant; 4] = [GameVariant::I, GameVariant::Isc, GameVariant::V, GameVariant::Vsc];

    pub fn is_visible(self) -> bool {
        matches!(self, GameVariant::V | GameVariant::Vsc)
    }

    pub fn is_strong(self) -> bool {
        matches!(self, GameVariant::Isc | GameVariant::Vsc)
    }

    pub fn name(self) -> &'static str {
        match self {
            GameVariant::I => "i",
            GameVariant::Isc => "isc",
            GameVariant::V => "v",
            GameVariant::Vsc => "vsc",
        }
    }
}

impl fmt::Display for GameVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown game variant {0:?} (expected i, isc, v or vsc)")]
pub struct UnknownVariant(pub String);

impl FromStr for GameVariant {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "i" => Ok(GameVariant::I),
            "isc" => Ok(GameVariant::Isc),
            "v" => Ok(GameVariant::V),
            "vsc" => Ok(GameVariant::Vsc),
            other => Err(UnknownVariant(other.to_string())),
        }
    }
}

/// Searcher placement as a word of distinct vertices; only the last letter may
/// be removed.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SearcherStack {
    word: Vec<Vertex>,
    #[serde(skip)]
    letters: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("vertex {0} appears twice in a searcher stack")]
pub struct RepeatedLetter(pub Vertex);

impl SearcherStack {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_word(word: Vec<Vertex>) -> Result<Self, RepeatedLetter> {
        let mut letters = VertexSet::EMPTY;
        for &v in &word {
            if letters.contains(v) {
                return Err(RepeatedLetter(v));
            }
            letters.insert(v);
        }
        Ok(SearcherStack { word, letters })
    }

    /// Drops repeated letters, keeping first occurrences.
    pub fn canonical(word: &[Vertex]) -> Self {
        let mut s = SearcherStack::empty();
        for &v in word {
            if !s.letters.contains(v) {
                s = s.pushed(v);
            }
        }
        s
    }

    pub fn word(&self) -> &[Vertex] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn letters(&self) -> VertexSet {
        self.letters
    }

    pub fn top(&self) -> Option<Vertex> {
        self.word.last().copied()
    }

    /// The stack with `v` placed on top. `v` must not already be on the stack.
    #[must_use]
    pub fn pushed(&self, v: Vertex) -> Self {
        debug_assert!(!self.letters.contains(v));
        let mut word = self.word.clone();
        word.push(v);
        SearcherStack { word, letters: self.letters.with(v) }
    }

    /// The stack with its top searcher removed.
    #[must_use]
    pub fn popped(&self) -> Self {
        let mut word = self.word.clone();
        match word.pop() {
            Some(v) => SearcherStack { word, letters: self.letters.without(v) },
            None => self.clone(),
        }
    }

    pub fn is_prefix_of(&self, other: &SearcherStack) -> bool {
        other.word.starts_with(&self.word)
    }
}

impl<'de> Deserialize<'de> for SearcherStack {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let word = Vec::<Vertex>::deserialize(deserializer)?;
        if let Some(&v) = word.iter().find(|&&v| v >= crate::vertex_set::MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex id {v} out of range")));
        }
        SearcherStack::from_word(word).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for SearcherStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SearcherStack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, v) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ">")
    }
}

/// A game position: searcher stack `X` and fugitive space `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub stack: SearcherStack,
    pub space: VertexSet,
}

impl Position {
    pub fn new(stack: SearcherStack, space: VertexSet) -> Self {
        Position { stack, space }
    }

    /// `(ε, V(g))`.
    pub fn start(g: &Digraph) -> Self {
        Position { stack: SearcherStack::empty(), space: g.vertices() }
    }

    pub fn is_captured(&self) -> bool {
        self.space.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.stack, self.space)
    }
}

/// Whether `pos` satisfies the position invariant of `variant`. The start
/// position `(ε, V)` is always admitted by the game even when this is false.
pub fn is_position(g: &Digraph, variant: GameVariant, pos: &Position) -> bool {
    let residual = g.view().without(pos.stack.letters());
    let r = pos.space;
    if !r.is_subset(residual.vertices()) {
        return false;
    }
    if r.is_empty() {
        return true;
    }
    match variant {
        GameVariant::I => residual.is_successor_closed(r),
        GameVariant::Isc => r.iter().all(|v| residual.component_of(v).is_subset(r)),
        GameVariant::V => {
            residual.is_successor_closed(r) && residual.within(r).initial_components().len() == 1
        }
        GameVariant::Vsc => residual.component_of(r.first().unwrap()) == r,
    }
}

/// True at `(ε, V)` in a visible variant where that pair is not itself a
/// position; the only searcher action there is to wait while the fugitive
/// picks a starting space.
pub fn is_special_start(g: &Digraph, variant: GameVariant, pos: &Position) -> bool {
    variant.is_visible() && pos.stack.is_empty() && pos.space == g.vertices() && !is_position(g, variant, pos)
}

/// Every stack reachable by removing the top searcher or placing one on a free
/// vertex without exceeding `k` searchers. Removal comes first, then
/// placements by ascending vertex.
pub fn searcher_moves(g: &Digraph, pos: &Position, k: usize) -> Vec<SearcherStack> {
    let mut out = Vec::new();
    if !pos.stack.is_empty() {
        out.push(pos.stack.popped());
    }
    if pos.stack.len() < k {
        for v in g.vertices() - pos.stack.letters() {
            out.push(pos.stack.pushed(v));
        }
    }
    out
}

/// The fugitive spaces available after the searchers move from `pos.stack` to
/// `next`. Visible variants offer one maximal space per escape route;
/// invisible variants always return exactly one space. A captured fugitive
/// stays captured, and no escape at all is reported as `[∅]`.
pub fn fugitive_responses(
    g: &Digraph,
    variant: GameVariant,
    pos: &Position,
    next: &SearcherStack,
) -> Vec<VertexSet> {
    let r = pos.space;
    if r.is_empty() {
        return vec![VertexSet::EMPTY];
    }
    let view = g.view();
    if is_special_start(g, variant, pos) && next.is_empty() {
        let comps = view.scc_decompose();
        return match variant {
            GameVariant::Vsc => comps.components().to_vec(),
            _ => comps.components().iter().map(|&c| view.reach_from(c)).collect(),
        };
    }
    let shared = pos.stack.letters() & next.letters();
    let during = view.without(shared);
    let after = view.without(next.letters());
    let free = after.vertices();
    let out: Vec<VertexSet> = match variant {
        GameVariant::I => vec![during.reach_from(r) & free],
        GameVariant::Isc => {
            let touched = during
                .scc_decompose()
                .components()
                .iter()
                .filter(|c| c.intersects(r))
                .fold(VertexSet::EMPTY, |acc, &c| acc | c);
            vec![touched & free]
        }
        GameVariant::Vsc => {
            let outer = during.scc_decompose();
            after
                .scc_decompose()
                .components()
                .iter()
                .copied()
                .filter(|c| {
                    let v = c.first().unwrap();
                    let enclosing = outer.component_index(v).map(|i| outer.components()[i]);
                    enclosing.is_some_and(|e| e.intersects(r))
                })
                .collect()
        }
        GameVariant::V => {
            let reachable = during.reach_from(r);
            after
                .scc_decompose()
                .components()
                .iter()
                .filter(|c| c.intersects(reachable))
                .map(|&c| after.reach_from(c))
                .collect()
        }
    };
    let out: Vec<VertexSet> = out.into_iter().filter(|s| !s.is_empty()).collect();
    if out.is_empty() {
        vec![VertexSet::EMPTY]
    } else {
        out
    }
}
