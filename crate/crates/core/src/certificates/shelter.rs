//! Strong shelters: verification and construction.

use std::collections::{BTreeSet, HashSet};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use varisat::{ExtendFormula, Lit, Solver};

use crate::digraph::Digraph;
use crate::par::Execution;
use crate::rank::RankSolver;
use crate::vertex_set::VertexSet;

/// A collection of nonempty strongly connected vertex sets in which the
/// maximal proper members below any set have no common vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongShelter {
    pub sets: Vec<VertexSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShelterError {
    #[error("the shelter has no sets")]
    NoSets,
    #[error("the shelter contains the empty set")]
    EmptySet,
    #[error("set {0} is listed twice")]
    Duplicate(VertexSet),
    #[error("set {0} uses vertices outside the graph")]
    OutOfRange(VertexSet),
    #[error("set {0} is not strongly connected")]
    NotStronglyConnected(VertexSet),
    #[error("the maximal proper subsets {covers:?} of {set} share {common}")]
    CommonVertex { set: VertexSet, covers: Vec<VertexSet>, common: VertexSet },
}

/// Containment structure of a shelter: for each set the indices of its
/// maximal proper subsets within the collection.
pub(crate) struct Covers {
    pub sets: Vec<VertexSet>,
    pub below: Vec<Vec<usize>>,
    pub maximal: Vec<usize>,
}

impl Covers {
    pub fn new(sets: &[VertexSet]) -> Self {
        let below = sets
            .iter()
            .map(|&s| {
                let inside: Vec<usize> = (0..sets.len()).filter(|&j| sets[j].is_proper_subset(s)).collect();
                inside
                    .iter()
                    .copied()
                    .filter(|&j| !inside.iter().any(|&w| sets[j].is_proper_subset(sets[w])))
                    .collect()
            })
            .collect();
        let maximal = (0..sets.len())
            .filter(|&i| !sets.iter().any(|&w| sets[i].is_proper_subset(w)))
            .collect();
        Covers { sets: sets.to_vec(), below, maximal }
    }

    /// Number of sets on the shortest maximal chain descending from each set.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.sets.len()).collect();
        order.sort_by_key(|&i| self.sets[i].len());
        let mut h = vec![0; self.sets.len()];
        for i in order {
            h[i] = 1 + self.below[i].iter().map(|&j| h[j]).min().unwrap_or(0);
        }
        h
    }
}

/// Checks both shelter conditions and returns the thickness: the number of
/// sets on the shortest maximal containment chain.
pub fn verify_shelter(g: &Digraph, s: &StrongShelter) -> Result<usize, ShelterError> {
    if s.sets.is_empty() {
        return Err(ShelterError::NoSets);
    }
    let mut seen = BTreeSet::new();
    for &set in &s.sets {
        if set.is_empty() {
            return Err(ShelterError::EmptySet);
        }
        if !set.is_subset(g.vertices()) {
            return Err(ShelterError::OutOfRange(set));
        }
        if !seen.insert(set) {
            return Err(ShelterError::Duplicate(set));
        }
        if !g.view().within(set).is_strongly_connected() {
            return Err(ShelterError::NotStronglyConnected(set));
        }
    }
    let covers = Covers::new(&s.sets);
    for (i, below) in covers.below.iter().enumerate() {
        if below.is_empty() {
            continue;
        }
        let common = below.iter().fold(covers.sets[i], |acc, &j| acc & covers.sets[j]);
        if !common.is_empty() {
            return Err(ShelterError::CommonVertex {
                set: covers.sets[i],
                covers: below.iter().map(|&j| covers.sets[j]).collect(),
                common,
            });
        }
    }
    let heights = covers.heights();
    Ok(covers.maximal.iter().map(|&i| heights[i]).min().unwrap())
}

/// Components up to this size are searched exactly when the recursive
/// construction comes up short.
const EXACT_SEARCH_LIMIT: usize = 16;

/// Builds a strong shelter of thickness `cr(g) + 1` when one exists, and
/// otherwise the thickest one found. Some strongly connected graphs have no
/// shelter that thick: the smallest known has 6 vertices and cycle-rank 3 but
/// shelters of thickness at most 3.
pub fn build_shelter(g: &Digraph) -> StrongShelter {
    build_shelter_with(g, Execution::default())
}

/// [`build_shelter`] with the sub-constructions below the top set run under `exec`.
///
/// The top set is an inclusion-minimal strongly connected set of maximum
/// rank. Below a set `S` of rank `r` the collection recurses, for every
/// `v ∈ S`, into an inclusion-minimal strongly connected subset of `S ∖ v` of
/// rank `r - 1`, down to single vertices. In the rare case where cross-branch
/// containments shorten a chain, an exact search over the strongly connected
/// subsets of each maximum-rank component is used instead.
pub fn build_shelter_with(g: &Digraph, exec: Execution) -> StrongShelter {
    let ranks = RankSolver::with_execution(g, Execution::Sequential);
    let k = ranks.rank_of(g.vertices());
    let top = critical_within(g, &ranks, g.vertices(), k);
    let memo = DashMap::new();
    let branches = if k == 0 {
        Vec::new()
    } else {
        let vs = top.to_vec();
        exec.map(&vs, |&v| {
            let child = critical_within(g, &ranks, top.without(v), k - 1);
            collect(g, &ranks, &memo, child, k - 1)
        })
    };
    let mut all: BTreeSet<VertexSet> = BTreeSet::from([top]);
    for b in branches {
        all.extend(b);
    }
    let shelter = ordered(all);
    if verify_shelter(g, &shelter) == Ok(k + 1) {
        return shelter;
    }
    let built = verify_shelter(g, &shelter).unwrap_or(0);
    let universes: Vec<VertexSet> = g
        .view()
        .scc_decompose()
        .components()
        .iter()
        .copied()
        .filter(|&c| c.len() <= EXACT_SEARCH_LIMIT && ranks.strong_rank(c).0 == k)
        .collect();
    for t in (built + 1..=k + 1).rev() {
        for &u in &universes {
            if let Some(sets) = exact_shelter(g, u, t) {
                let found = ordered(sets.into_iter().collect());
                debug_assert_eq!(verify_shelter(g, &found), Ok(t));
                return found;
            }
        }
    }
    shelter
}

fn ordered(sets: BTreeSet<VertexSet>) -> StrongShelter {
    let mut sets: Vec<VertexSet> = sets.into_iter().collect();
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.lex_cmp(*b)));
    StrongShelter { sets }
}

fn collect(
    g: &Digraph,
    ranks: &RankSolver<'_>,
    memo: &DashMap<(VertexSet, usize), BTreeSet<VertexSet>>,
    scope: VertexSet,
    level: usize,
) -> BTreeSet<VertexSet> {
    if let Some(hit) = memo.get(&(scope, level)) {
        return hit.clone();
    }
    let mut out = BTreeSet::from([scope]);
    if level > 0 {
        for v in scope {
            let child = critical_within(g, ranks, scope.without(v), level - 1);
            out.extend(collect(g, ranks, memo, child, level - 1));
        }
    }
    memo.insert((scope, level), out.clone());
    out
}

/// Strongly connected component of `set` with the largest rank, lowest bitmask on ties.
fn max_component(g: &Digraph, ranks: &RankSolver<'_>, set: VertexSet) -> (VertexSet, usize) {
    g.view()
        .within(set)
        .scc_decompose()
        .components()
        .iter()
        .map(|&c| (c, ranks.strong_rank(c).0))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.bits().cmp(&a.0.bits())))
        .expect("set is nonempty")
}

/// Shrinks `set` greedily, lowest vertex first, to a strongly connected subset
/// of rank at least `r` none of whose vertex deletions keeps that rank.
fn critical_within(g: &Digraph, ranks: &RankSolver<'_>, set: VertexSet, r: usize) -> VertexSet {
    let (mut s, rank) = max_component(g, ranks, set);
    debug_assert!(rank >= r);
    'shrink: loop {
        for v in s {
            let rest = s.without(v);
            if rest.is_empty() {
                continue;
            }
            let (c, rc) = max_component(g, ranks, rest);
            if rc >= r {
                s = c;
                continue 'shrink;
            }
        }
        return s;
    }
}

/// Searches the strongly connected subsets of `universe` for a shelter of
/// thickness at least `t` with a SAT solver.
fn exact_shelter(g: &Digraph, universe: VertexSet, t: usize) -> Option<Vec<VertexSet>> {
    let u: Vec<VertexSet> = universe
        .subsets()
        .filter(|&s| !s.is_empty() && g.view().within(s).is_strongly_connected())
        .collect();
    let mut solver = Solver::new();
    let x: Vec<Lit> = u.iter().map(|_| solver.new_lit()).collect();
    let sub: Vec<Vec<usize>> =
        (0..u.len()).map(|s| (0..u.len()).filter(|&j| u[j].is_proper_subset(u[s])).collect()).collect();
    // cover[s] holds (j, lit) with lit <-> "u[j] is a maximal proper subset of u[s] in the family"
    let mut cover: Vec<Vec<(usize, Lit)>> = vec![Vec::new(); u.len()];
    for s in 0..u.len() {
        for &j in &sub[s] {
            let c = solver.new_lit();
            let mids: Vec<usize> = sub[s].iter().copied().filter(|&w| u[j].is_proper_subset(u[w])).collect();
            solver.add_clause(&[!c, x[j]]);
            solver.add_clause(&[!c, x[s]]);
            for &w in &mids {
                solver.add_clause(&[!c, !x[w]]);
            }
            let mut back = vec![c, !x[j], !x[s]];
            back.extend(mids.iter().map(|&w| x[w]));
            solver.add_clause(&back);
            cover[s].push((j, c));
        }
    }
    // height[s][j - 1] -> every maximal chain below u[s] has at least j sets
    let height: Vec<Vec<Lit>> = (0..u.len()).map(|_| (0..t).map(|_| solver.new_lit()).collect()).collect();
    for s in 0..u.len() {
        solver.add_clause(&[!height[s][0], x[s]]);
        solver.add_clause(&[height[s][0], !x[s]]);
        for j in 1..t {
            let h = height[s][j];
            solver.add_clause(&[!h, x[s]]);
            let mut some: Vec<Lit> = vec![!h];
            some.extend(cover[s].iter().map(|&(_, c)| c));
            solver.add_clause(&some);
            for &(jj, c) in &cover[s] {
                solver.add_clause(&[!h, !c, height[jj][j - 1]]);
            }
        }
        for v in u[s] {
            let avoid: Vec<Lit> = cover[s].iter().filter(|&&(j, _)| !u[j].contains(v)).map(|&(_, c)| c).collect();
            for &j in &sub[s] {
                let mut cl = vec![!x[s], !x[j]];
                cl.extend(&avoid);
                solver.add_clause(&cl);
            }
        }
        let mut top = vec![!x[s], height[s][t - 1]];
        top.extend((0..u.len()).filter(|&w| u[s].is_proper_subset(u[w])).map(|w| x[w]));
        solver.add_clause(&top);
    }
    solver.add_clause(&x);
    if !solver.solve().ok()? {
        return None;
    }
    let model: HashSet<Lit> = solver.model()?.into_iter().collect();
    Some((0..u.len()).filter(|&i| model.contains(&x[i])).map(|i| u[i]).collect())
}
