//! LIFO-havens, their construction from shelters and the fugitive strategy
//! they induce.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::shelter::{verify_shelter, Covers, ShelterError, StrongShelter};
use crate::digraph::Digraph;
use crate::rank::RankSolver;
use crate::game::{FugitiveStrategy, PlayError, Position, SearcherStack};
use crate::vertex_set::{Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HavenEntry {
    pub word: SearcherStack,
    pub space: VertexSet,
}

/// A haven of order `k`: a strongly connected escape region for every
/// repetition-free word of fewer than `k` letters, shrinking along prefixes.
/// Words with repeated letters are looked up through
/// [`SearcherStack::canonical`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LifoHaven {
    pub order: usize,
    pub table: Vec<HavenEntry>,
}

impl LifoHaven {
    pub fn to_map(&self) -> HashMap<SearcherStack, VertexSet> {
        self.table.iter().map(|e| (e.word.clone(), e.space)).collect()
    }

    pub fn get(&self, word: &[Vertex]) -> Option<VertexSet> {
        let w = SearcherStack::canonical(word);
        self.table.iter().find(|e| e.word == w).map(|e| e.space)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HavenError {
    #[error("word {0} is listed twice")]
    DuplicateWord(SearcherStack),
    #[error("word {0} uses vertices outside the graph")]
    OutOfRange(SearcherStack),
    #[error("word {0} is too long for the haven order")]
    ExtraWord(SearcherStack),
    #[error("no entry for word {0}")]
    MissingWord(SearcherStack),
    #[error("value {space} of word {word} is not a strongly connected component of the graph minus the word")]
    NotComponent { word: SearcherStack, space: VertexSet },
    #[error("value {space} of word {word} is not inside the value {parent_space} of its prefix {parent}")]
    NotNested { word: SearcherStack, space: VertexSet, parent: SearcherStack, parent_space: VertexSet },
    #[error(transparent)]
    Shelter(#[from] ShelterError),
}

/// Every repetition-free word over the vertices of `g` with fewer than `order`
/// letters, in depth-first lexicographic order.
pub fn haven_domain(g: &Digraph, order: usize) -> Vec<SearcherStack> {
    fn rec(g: &Digraph, w: SearcherStack, order: usize, out: &mut Vec<SearcherStack>) {
        if w.len() + 1 < order {
            for v in g.vertices() - w.letters() {
                rec(g, w.pushed(v), order, out);
            }
        }
        out.push(w);
    }
    let mut out = Vec::new();
    if order > 0 {
        rec(g, SearcherStack::empty(), order, &mut out);
    }
    out.sort_by(|a, b| a.word().cmp(b.word()));
    out
}

/// Checks domain completeness and both haven conditions; returns the order.
pub fn verify_haven(g: &Digraph, h: &LifoHaven) -> Result<usize, HavenError> {
    let mut map = HashMap::with_capacity(h.table.len());
    for e in &h.table {
        if !e.word.letters().is_subset(g.vertices()) {
            return Err(HavenError::OutOfRange(e.word.clone()));
        }
        if e.word.len() >= h.order {
            return Err(HavenError::ExtraWord(e.word.clone()));
        }
        if map.insert(e.word.clone(), e.space).is_some() {
            return Err(HavenError::DuplicateWord(e.word.clone()));
        }
    }
    for word in haven_domain(g, h.order) {
        let Some(&space) = map.get(&word) else {
            return Err(HavenError::MissingWord(word));
        };
        let residual = g.view().without(word.letters());
        let is_component = space
            .first()
            .is_some_and(|v| residual.component_of(v) == space);
        if !is_component {
            return Err(HavenError::NotComponent { word, space });
        }
        if !word.is_empty() {
            let parent = word.popped();
            let parent_space = map[&parent];
            if !space.is_subset(parent_space) {
                return Err(HavenError::NotNested { word, space, parent, parent_space });
            }
        }
    }
    Ok(h.order)
}

/// Turns a shelter of thickness `t` into a haven of order `t`, descending from
/// the lexicographically smallest maximal set and, after each placed
/// searcher, to the lexicographically smallest maximal proper subset that
/// avoids it.
pub fn shelter_to_haven(g: &Digraph, s: &StrongShelter) -> Result<LifoHaven, HavenError> {
    let order = verify_shelter(g, s)?;
    let covers = Covers::new(&s.sets);
    let heights = covers.heights();
    let lex_min = |ids: &mut dyn Iterator<Item = usize>| ids.min_by(|&a, &b| covers.sets[a].lex_cmp(covers.sets[b]));
    let root = lex_min(&mut covers.maximal.iter().copied()).expect("a verified shelter is nonempty");
    let mut table = Vec::new();
    let mut todo = vec![(SearcherStack::empty(), root)];
    while let Some((word, at)) = todo.pop() {
        debug_assert!(heights[at] + word.len() >= order);
        let residual = g.view().without(word.letters());
        let shelter_set = covers.sets[at];
        let space = residual.component_of(shelter_set.first().unwrap());
        if word.len() + 1 < order {
            for v in g.vertices() - word.letters() {
                let mut avoiding = covers.below[at].iter().copied().filter(|&j| !covers.sets[j].contains(v));
                let next = lex_min(&mut avoiding).expect("covers of a verified shelter have no common vertex");
                todo.push((word.pushed(v), next));
            }
        }
        table.push(HavenEntry { word, space });
    }
    table.sort_by(|a, b| a.word.word().cmp(b.word.word()));
    Ok(LifoHaven { order, table })
}

/// Builds a haven of order `cr(g) + 1` directly from cycle-rank: start in a
/// component of maximum rank and, whenever a searcher lands inside the current
/// value, move to a component of maximum rank of what is left (lowest bitmask
/// on ties). Each placement costs the value at most one unit of rank, so it
/// stays nonempty for every word of at most `cr(g)` letters.
pub fn build_haven(g: &Digraph) -> LifoHaven {
    let ranks = RankSolver::new(g);
    let best = |set: VertexSet| {
        g.view()
            .within(set)
            .scc_decompose()
            .components()
            .iter()
            .map(|&c| (ranks.strong_rank(c).0, c))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.bits().cmp(&a.1.bits())))
            .map(|(_, c)| c)
            .expect("haven values stay nonempty")
    };
    let order = ranks.rank_of(g.vertices()) + 1;
    let mut table = Vec::new();
    let mut todo = vec![(SearcherStack::empty(), best(g.vertices()))];
    while let Some((word, space)) = todo.pop() {
        if word.len() + 1 < order {
            for v in g.vertices() - word.letters() {
                let next = if space.contains(v) { best(space.without(v)) } else { space };
                todo.push((word.pushed(v), next));
            }
        }
        table.push(HavenEntry { word, space });
    }
    table.sort_by(|a, b| a.word.word().cmp(b.word.word()));
    LifoHaven { order, table }
}

/// Fugitive strategy for the vsc game that answers every searcher stack `X′`
/// with the haven's value at `X′`.
#[derive(Clone, Debug)]
pub struct HavenFugitive {
    order: usize,
    map: HashMap<SearcherStack, VertexSet>,
}

impl HavenFugitive {
    pub fn order(&self) -> usize {
        self.order
    }

    /// The space chosen when the searchers move to `next`, if `next` is short
    /// enough for the haven.
    pub fn space_for(&self, next: &[Vertex]) -> Option<VertexSet> {
        self.map.get(&SearcherStack::canonical(next)).copied()
    }
}

impl FugitiveStrategy for HavenFugitive {
    fn respond(&self, pos: &Position, next: &SearcherStack, _: &[VertexSet]) -> Result<VertexSet, PlayError> {
        self.space_for(next.word()).ok_or_else(|| PlayError::StrategyIncomplete {
            position: Position::new(next.clone(), pos.space),
        })
    }
}

/// Verifies `h` and wraps it as a fugitive strategy that escapes any searcher
/// using fewer than `order` searchers.
pub fn haven_to_fugitive_strategy(g: &Digraph, h: &LifoHaven) -> Result<HavenFugitive, HavenError> {
    let order = verify_haven(g, h)?;
    Ok(HavenFugitive { order, map: h.to_map() })
}
