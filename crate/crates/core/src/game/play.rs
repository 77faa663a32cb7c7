//! Simulating a play between explicit searcher and fugitive strategies.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::solve::{apply_script_move, SearcherScript, SearcherStrategy, StrategyTable};
use super::{fugitive_responses, is_special_start, searcher_moves, GameVariant, Position, SearcherStack};
use crate::digraph::Digraph;
use crate::vertex_set::VertexSet;

/// A searcher strategy to play: a fixed script or a positional table.
#[derive(Clone, Copy, Debug)]
pub enum Searcher<'a> {
    Script(&'a SearcherScript),
    Table(&'a StrategyTable),
}

impl<'a> From<&'a SearcherStrategy> for Searcher<'a> {
    fn from(s: &'a SearcherStrategy) -> Self {
        match s {
            SearcherStrategy::Script(s) => Searcher::Script(s),
            SearcherStrategy::Table(t) => Searcher::Table(t),
        }
    }
}

/// Chooses the fugitive's next space in a visible variant. `options` are the
/// legal responses; the returned set must be one of them.
pub trait FugitiveStrategy {
    fn respond(&self, pos: &Position, next: &SearcherStack, options: &[VertexSet]) -> Result<VertexSet, PlayError>;
}

/// Always takes the first legal response.
#[derive(Clone, Copy, Debug, Default)]
pub struct FirstResponseFugitive;

impl FugitiveStrategy for FirstResponseFugitive {
    fn respond(&self, _: &Position, _: &SearcherStack, options: &[VertexSet]) -> Result<VertexSet, PlayError> {
        Ok(options[0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Escape {
    /// A table strategy revisited a position, so the play is infinite.
    Repetition,
    /// A script ran out of moves before capture.
    ScriptExhausted,
    /// The searcher has no legal move.
    NoSearcherMove,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "winner", rename_all = "snake_case")]
pub enum Outcome {
    Searcher { rounds: usize },
    Fugitive { reason: Escape },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayTrace {
    pub variant: GameVariant,
    pub k: usize,
    pub positions: Vec<Position>,
    pub outcome: Outcome,
}

impl PlayTrace {
    pub fn searcher_won(&self) -> bool {
        matches!(self.outcome, Outcome::Searcher { .. })
    }

    /// Every fugitive space is contained in the previous one.
    pub fn is_monotone(&self) -> bool {
        self.positions.windows(2).all(|w| w[1].space.is_subset(w[0].space))
    }

    pub fn max_stack_depth(&self) -> usize {
        self.positions.iter().map(|p| p.stack.len()).max().unwrap_or(0)
    }

    /// No searcher was removed before capture.
    pub fn is_searcher_stationary(&self) -> bool {
        self.positions
            .windows(2)
            .all(|w| w[0].is_captured() || w[1].stack.len() >= w[0].stack.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlayError {
    #[error("strategy undefined at position {position}")]
    StrategyIncomplete { position: Position },
    #[error("illegal searcher move from {position} to {next}")]
    IllegalSearcherMove { position: Position, next: String },
    #[error("illegal fugitive response {space} at {position}")]
    IllegalFugitiveMove { position: Position, space: VertexSet },
}

/// Plays `searcher` against `fugitive` from `(ε, V)` with at most `k`
/// searchers until capture or until the fugitive provably escapes. Invisible
/// variants never consult the fugitive since its space is determined.
pub fn play(
    g: &Digraph,
    variant: GameVariant,
    k: usize,
    searcher: Searcher<'_>,
    fugitive: &dyn FugitiveStrategy,
) -> Result<PlayTrace, PlayError> {
    let table: Option<HashMap<Position, SearcherStack>> = match searcher {
        Searcher::Table(t) => Some(t.to_map()),
        Searcher::Script(_) => None,
    };
    let mut script_pos = 0;
    let mut pos = Position::start(g);
    let mut seen = HashSet::from([pos.clone()]);
    let mut positions = vec![pos.clone()];
    let finish = |positions: Vec<Position>, outcome| Ok(PlayTrace { variant, k, positions, outcome });
    loop {
        if pos.is_captured() {
            let rounds = positions.len() - 1;
            return finish(positions, Outcome::Searcher { rounds });
        }
        let special = is_special_start(g, variant, &pos);
        let next = match (&table, searcher) {
            (Some(map), _) => match map.get(&pos) {
                Some(next) => next.clone(),
                None if !special && searcher_moves(g, &pos, k).is_empty() => {
                    return finish(positions, Outcome::Fugitive { reason: Escape::NoSearcherMove });
                }
                None => return Err(PlayError::StrategyIncomplete { position: pos }),
            },
            (None, Searcher::Script(script)) => {
                if special {
                    SearcherStack::empty()
                } else {
                    let Some(&m) = script.moves.get(script_pos) else {
                        return finish(positions, Outcome::Fugitive { reason: Escape::ScriptExhausted });
                    };
                    script_pos += 1;
                    apply_script_move(&pos.stack, m).ok_or_else(|| PlayError::IllegalSearcherMove {
                        position: pos.clone(),
                        next: format!("{m:?}"),
                    })?
                }
            }
            (None, Searcher::Table(_)) => unreachable!(),
        };
        let legal = if special {
            next.is_empty()
        } else {
            searcher_moves(g, &pos, k).contains(&next)
        };
        if !legal {
            return Err(PlayError::IllegalSearcherMove { position: pos, next: next.to_string() });
        }
        let options = fugitive_responses(g, variant, &pos, &next);
        let space = if variant.is_visible() && !options[0].is_empty() {
            let chosen = fugitive.respond(&pos, &next, &options)?;
            if !options.contains(&chosen) {
                return Err(PlayError::IllegalFugitiveMove { position: pos, space: chosen });
            }
            chosen
        } else {
            options[0]
        };
        pos = Position::new(next, space);
        positions.push(pos.clone());
        if table.is_some() && !seen.insert(pos.clone()) {
            return finish(positions, Outcome::Fugitive { reason: Escape::Repetition });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyFailure {
    #[error("the fugitive escapes at {position}: {reason:?}")]
    Escapes { position: Position, reason: Escape },
    #[error("the fugitive can force a cycle through {position}")]
    Cycle { position: Position },
    #[error("move from {position} to {next} breaks monotonicity")]
    NotMonotone { position: Position, next: SearcherStack },
    #[error("move from {position} to {next} removes a searcher before capture")]
    NotStationary { position: Position, next: SearcherStack },
    #[error(transparent)]
    Play(#[from] PlayError),
}

/// Checks that `searcher` captures every fugitive with at most `k` searchers
/// while respecting `restrictions`, exploring all fugitive choices. Returns the
/// length of the longest play.
pub fn check_strategy(
    g: &Digraph,
    variant: GameVariant,
    k: usize,
    searcher: Searcher<'_>,
    restrictions: super::Restrictions,
) -> Result<usize, StrategyFailure> {
    let table = match searcher {
        Searcher::Table(t) => Some(t.to_map()),
        Searcher::Script(_) => None,
    };
    let mut checker = Checker { g, variant, k, searcher, restrictions, table, done: HashMap::new() };
    checker.visit(Position::start(g), 0)
}

struct Checker<'a> {
    g: &'a Digraph,
    variant: GameVariant,
    k: usize,
    searcher: Searcher<'a>,
    restrictions: super::Restrictions,
    table: Option<HashMap<Position, SearcherStack>>,
    // None while on the current path, Some(rounds) once fully explored
    done: HashMap<(Position, usize), Option<usize>>,
}

impl Checker<'_> {
    fn visit(&mut self, pos: Position, step: usize) -> Result<usize, StrategyFailure> {
        if pos.is_captured() {
            return Ok(0);
        }
        let key = (pos.clone(), if self.table.is_some() { 0 } else { step });
        match self.done.get(&key) {
            Some(Some(r)) => return Ok(*r),
            Some(None) => return Err(StrategyFailure::Cycle { position: pos }),
            None => {}
        }
        self.done.insert(key.clone(), None);
        let special = is_special_start(self.g, self.variant, &pos);
        let (next, next_step) = match (&self.table, self.searcher) {
            (Some(map), _) => match map.get(&pos) {
                Some(n) => (n.clone(), step),
                None if !special && searcher_moves(self.g, &pos, self.k).is_empty() => {
                    return Err(StrategyFailure::Escapes { position: pos, reason: Escape::NoSearcherMove });
                }
                None => return Err(PlayError::StrategyIncomplete { position: pos }.into()),
            },
            (None, Searcher::Script(script)) if special => {
                let _ = script;
                (SearcherStack::empty(), step)
            }
            (None, Searcher::Script(script)) => {
                let Some(&m) = script.moves.get(step) else {
                    return Err(StrategyFailure::Escapes { position: pos, reason: Escape::ScriptExhausted });
                };
                let next = apply_script_move(&pos.stack, m).ok_or_else(|| PlayError::IllegalSearcherMove {
                    position: pos.clone(),
                    next: format!("{m:?}"),
                })?;
                (next, step + 1)
            }
            (None, Searcher::Table(_)) => unreachable!(),
        };
        let legal = if special { next.is_empty() } else { searcher_moves(self.g, &pos, self.k).contains(&next) };
        if !legal {
            return Err(PlayError::IllegalSearcherMove { position: pos, next: next.to_string() }.into());
        }
        if self.restrictions.stationary && !special && next.len() < pos.stack.len() {
            return Err(StrategyFailure::NotStationary { position: pos, next });
        }
        let options = fugitive_responses(self.g, self.variant, &pos, &next);
        if self.restrictions.monotone && !options.iter().all(|r| r.is_subset(pos.space)) {
            return Err(StrategyFailure::NotMonotone { position: pos, next });
        }
        let mut longest = 0;
        for space in options {
            let r = self.visit(Position::new(next.clone(), space), next_step)?;
            longest = longest.max(r + 1);
        }
        self.done.insert(key, Some(longest));
        Ok(longest)
    }
}
