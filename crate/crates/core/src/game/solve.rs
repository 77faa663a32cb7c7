//! Exact solving by backward induction over the explicit game graph.
//!
//! For a fixed number of searchers `k` the reachable positions are expanded
//! breadth-first from `(ε, V)`. Each searcher choice becomes an intermediate
//! move node whose successors are the fugitive responses. The searcher's
//! attractor to the captured positions is then computed with per-move pending
//! counters; everything outside it is a fugitive win.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{fugitive_responses, is_special_start, searcher_moves, GameVariant, Position, SearcherStack};
use crate::digraph::Digraph;
use crate::par::Execution;
use crate::vertex_set::{Vertex, VertexSet};

/// Optional restrictions on the searcher.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Restrictions {
    /// Only moves after which every fugitive response lies inside the current space.
    pub monotone: bool,
    /// No removals before capture.
    pub stationary: bool,
}

impl Restrictions {
    pub const PLAIN: Restrictions = Restrictions { monotone: false, stationary: false };
    pub const MONOTONE: Restrictions = Restrictions { monotone: true, stationary: false };
    pub const STATIONARY: Restrictions = Restrictions { monotone: false, stationary: true };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScriptMove {
    Place(Vertex),
    Remove,
}

/// A fixed sequence of searcher actions, enough for the invisible variants where
/// the fugitive space evolves deterministically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearcherScript {
    pub moves: Vec<ScriptMove>,
}

impl SearcherScript {
    /// Largest stack size reached, or `None` if the script removes from an
    /// empty stack or places on an occupied vertex.
    pub fn max_depth(&self) -> Option<usize> {
        let stacks = self.stacks()?;
        Some(stacks.iter().map(SearcherStack::len).max().unwrap_or(0))
    }

    /// Stacks after each move, or `None` if some move is illegal.
    pub fn stacks(&self) -> Option<Vec<SearcherStack>> {
        let mut cur = SearcherStack::empty();
        let mut out = Vec::with_capacity(self.moves.len());
        for m in &self.moves {
            cur = apply_script_move(&cur, *m)?;
            out.push(cur.clone());
        }
        Some(out)
    }
}

pub(crate) fn apply_script_move(stack: &SearcherStack, m: ScriptMove) -> Option<SearcherStack> {
    match m {
        ScriptMove::Place(v) if v < crate::vertex_set::MAX_VERTICES && !stack.letters().contains(v) => {
            Some(stack.pushed(v))
        }
        ScriptMove::Remove if !stack.is_empty() => Some(stack.popped()),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyEntry {
    pub stack: SearcherStack,
    pub space: VertexSet,
    pub next: SearcherStack,
}

/// Positional searcher strategy, listed in discovery order from the start.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyTable {
    pub entries: Vec<StrategyEntry>,
}

impl StrategyTable {
    pub fn to_map(&self) -> HashMap<Position, SearcherStack> {
        self.entries
            .iter()
            .map(|e| (Position::new(e.stack.clone(), e.space), e.next.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SearcherStrategy {
    Script(SearcherScript),
    Table(StrategyTable),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub variant: GameVariant,
    pub monotone: bool,
    pub stationary: bool,
    pub search_number: usize,
    pub strategy: SearcherStrategy,
}

/// Result of solving the game for one fixed number of searchers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSolution {
    pub k: usize,
    pub searcher_wins: bool,
    /// Rounds the searcher needs against best fugitive play, if winning.
    pub rounds: Option<usize>,
    pub positions: usize,
    /// Searcher strategy over every position it can reach: optimal moves where
    /// the searcher wins, the first admissible move elsewhere.
    pub table: StrategyTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("searcher-stationary search is only defined for the vsc variant (got {0})")]
    StationaryUndefined(GameVariant),
}

struct MoveNode {
    from: u32,
    next: SearcherStack,
    responses: Vec<u32>,
}

struct Arena {
    positions: Vec<Position>,
    index: HashMap<Position, u32>,
    moves: Vec<MoveNode>,
    // moves of position p are moves[first_move[p]..first_move[p + 1]]
    first_move: Vec<usize>,
}

impl Arena {
    fn build(g: &Digraph, variant: GameVariant, restrictions: Restrictions, k: usize) -> Self {
        let mut arena = Arena { positions: Vec::new(), index: HashMap::new(), moves: Vec::new(), first_move: Vec::new() };
        arena.intern(Position::start(g));
        let mut p = 0;
        while p < arena.positions.len() {
            arena.first_move.push(arena.moves.len());
            let pos = arena.positions[p].clone();
            if !pos.is_captured() {
                for next in candidate_moves(g, variant, restrictions, &pos, k) {
                    let responses = fugitive_responses(g, variant, &pos, &next);
                    if restrictions.monotone && !responses.iter().all(|r| r.is_subset(pos.space)) {
                        continue;
                    }
                    let mut ids: Vec<u32> = responses
                        .into_iter()
                        .map(|space| arena.intern(Position::new(next.clone(), space)))
                        .collect();
                    ids.sort_unstable();
                    ids.dedup();
                    arena.moves.push(MoveNode { from: p as u32, next, responses: ids });
                }
            }
            p += 1;
        }
        arena.first_move.push(arena.moves.len());
        arena
    }

    fn intern(&mut self, pos: Position) -> u32 {
        if let Some(&id) = self.index.get(&pos) {
            return id;
        }
        let id = self.positions.len() as u32;
        self.index.insert(pos.clone(), id);
        self.positions.push(pos);
        id
    }

    fn moves_of(&self, p: usize) -> std::ops::Range<usize> {
        self.first_move[p]..self.first_move[p + 1]
    }

    /// Rounds-to-capture for positions and move nodes in the searcher's attractor.
    fn attractor(&self) -> (Vec<Option<u32>>, Vec<Option<u32>>) {
        let np = self.positions.len();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); np];
        let mut pending: Vec<usize> = Vec::with_capacity(self.moves.len());
        for (m, node) in self.moves.iter().enumerate() {
            for &r in &node.responses {
                preds[r as usize].push(m as u32);
            }
            pending.push(node.responses.len());
        }
        let mut rank = vec![None; np];
        let mut move_rank = vec![None; self.moves.len()];
        let mut queue = VecDeque::new();
        for (p, pos) in self.positions.iter().enumerate() {
            if pos.is_captured() {
                rank[p] = Some(0);
                queue.push_back(p);
            }
        }
        // FIFO order visits positions by nondecreasing rank, so the last response
        // to resolve gives a move's max and the first resolved move gives a
        // position's min.
        while let Some(p) = queue.pop_front() {
            let r = rank[p].unwrap();
            for &m in &preds[p] {
                let m = m as usize;
                pending[m] -= 1;
                if pending[m] == 0 {
                    move_rank[m] = Some(r);
                    let q = self.moves[m].from as usize;
                    if rank[q].is_none() {
                        rank[q] = Some(r + 1);
                        queue.push_back(q);
                    }
                }
            }
        }
        (rank, move_rank)
    }

    fn choose(&self, p: usize, rank: &[Option<u32>], move_rank: &[Option<u32>]) -> Option<usize> {
        let mut range = self.moves_of(p);
        match rank[p] {
            Some(r) if r > 0 => range.find(|&m| move_rank[m] == Some(r - 1)),
            Some(_) => None,
            None => range.next(),
        }
    }
}

fn candidate_moves(
    g: &Digraph,
    variant: GameVariant,
    restrictions: Restrictions,
    pos: &Position,
    k: usize,
) -> Vec<SearcherStack> {
    if is_special_start(g, variant, pos) {
        return vec![SearcherStack::empty()];
    }
    let mut moves = searcher_moves(g, pos, k);
    if restrictions.stationary {
        moves.retain(|m| m.len() > pos.stack.len());
    }
    moves
}

/// Solves the game for exactly `k` searchers.
pub fn solve_at(g: &Digraph, variant: GameVariant, restrictions: Restrictions, k: usize) -> GameSolution {
    let arena = Arena::build(g, variant, restrictions, k);
    let (rank, move_rank) = arena.attractor();
    let mut entries = Vec::new();
    let mut seen = vec![false; arena.positions.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(p) = stack.pop() {
        let Some(m) = arena.choose(p, &rank, &move_rank) else { continue };
        let pos = &arena.positions[p];
        let node = &arena.moves[m];
        entries.push(StrategyEntry { stack: pos.stack.clone(), space: pos.space, next: node.next.clone() });
        for &r in node.responses.iter().rev() {
            if !seen[r as usize] {
                seen[r as usize] = true;
                stack.push(r as usize);
            }
        }
    }
    GameSolution {
        k,
        searcher_wins: rank[0].is_some(),
        rounds: rank[0].map(|r| r as usize),
        positions: arena.positions.len(),
        table: StrategyTable { entries },
    }
}

fn script_from_table(g: &Digraph, variant: GameVariant, table: &StrategyTable) -> SearcherScript {
    let map = table.to_map();
    let mut pos = Position::start(g);
    let mut moves = Vec::new();
    while !pos.is_captured() {
        let next = map[&pos].clone();
        moves.push(if next.len() > pos.stack.len() {
            ScriptMove::Place(next.top().unwrap())
        } else {
            ScriptMove::Remove
        });
        let space = fugitive_responses(g, variant, &pos, &next)[0];
        pos = Position::new(next, space);
    }
    SearcherScript { moves }
}

/// Least number of searchers that wins from `(ε, V)` under the given
/// restrictions, with a winning strategy. Searcher-stationary search is only
/// accepted for vsc; see [`solve_experimental`].
pub fn solve(g: &Digraph, variant: GameVariant, restrictions: Restrictions) -> Result<SolveReport, SolveError> {
    if restrictions.stationary && variant != GameVariant::Vsc {
        return Err(SolveError::StationaryUndefined(variant));
    }
    Ok(solve_experimental(g, variant, restrictions))
}

/// [`solve`] without the variant check on the stationary restriction.
pub fn solve_experimental(g: &Digraph, variant: GameVariant, restrictions: Restrictions) -> SolveReport {
    let n = g.vertex_count();
    for k in 1..=n {
        let sol = solve_at(g, variant, restrictions, k);
        if !sol.searcher_wins {
            continue;
        }
        let strategy = if variant.is_visible() {
            SearcherStrategy::Table(sol.table)
        } else {
            SearcherStrategy::Script(script_from_table(g, variant, &sol.table))
        };
        return SolveReport {
            variant,
            monotone: restrictions.monotone,
            stationary: restrictions.stationary,
            search_number: k,
            strategy,
        };
    }
    unreachable!("placing a searcher on every vertex always captures the fugitive")
}

/// The eight LIFO search numbers and the searcher-stationary vsc number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchNumbers {
    pub i: usize,
    pub isc: usize,
    pub v: usize,
    pub vsc: usize,
    pub mi: usize,
    pub misc: usize,
    pub mv: usize,
    pub mvsc: usize,
    pub sstat_vsc: usize,
}

impl SearchNumbers {
    pub const NAMES: [&'static str; 9] = ["i", "isc", "v", "vsc", "mi", "misc", "mv", "mvsc", "sstat_vsc"];

    pub fn values(&self) -> [usize; 9] {
        [self.i, self.isc, self.v, self.vsc, self.mi, self.misc, self.mv, self.mvsc, self.sstat_vsc]
    }

    pub fn named(&self) -> impl Iterator<Item = (&'static str, usize)> {
        Self::NAMES.into_iter().zip(self.values())
    }

    pub fn all_equal(&self, value: usize) -> bool {
        self.values().iter().all(|&x| x == value)
    }

    fn from_values(v: &[usize]) -> Self {
        SearchNumbers { i: v[0], isc: v[1], v: v[2], vsc: v[3], mi: v[4], misc: v[5], mv: v[6], mvsc: v[7], sstat_vsc: v[8] }
    }
}

const NINE: [(GameVariant, Restrictions); 9] = [
    (GameVariant::I, Restrictions::PLAIN),
    (GameVariant::Isc, Restrictions::PLAIN),
    (GameVariant::V, Restrictions::PLAIN),
    (GameVariant::Vsc, Restrictions::PLAIN),
    (GameVariant::I, Restrictions::MONOTONE),
    (GameVariant::Isc, Restrictions::MONOTONE),
    (GameVariant::V, Restrictions::MONOTONE),
    (GameVariant::Vsc, Restrictions::MONOTONE),
    (GameVariant::Vsc, Restrictions::STATIONARY),
];

pub fn all_search_numbers(g: &Digraph) -> SearchNumbers {
    all_search_numbers_with(g, Execution::default())
}

/// Runs the nine independent solves, in parallel when `exec` allows it.
pub fn all_search_numbers_with(g: &Digraph, exec: Execution) -> SearchNumbers {
    let values = exec.map(&NINE, |&(variant, r)| solve_experimental(g, variant, r).search_number);
    SearchNumbers::from_values(&values)
}
