//! Slow reference implementations written straight from the definitions.
#![allow(dead_code)]

use std::collections::HashMap;

use cyclerank::game::GameVariant;
use cyclerank::Digraph;
use proptest::prelude::*;

pub type Set = u64;

pub fn bits(set: impl IntoIterator<Item = usize>) -> Set {
    set.into_iter().fold(0, |acc, v| acc | 1 << v)
}

pub fn members(s: Set) -> Vec<usize> {
    (0..64).filter(|&v| s >> v & 1 == 1).collect()
}

fn full(n: usize) -> Set {
    (1u64 << n) - 1
}

/// `reach[u]` is every vertex reachable from `u` inside `within`, `u` included.
pub fn closure(g: &Digraph, within: Set) -> Vec<Set> {
    let n = g.vertex_count();
    let mut reach = vec![0u64; n];
    for u in members(within) {
        reach[u] = 1 << u;
        for (a, b) in g.edges() {
            if a == u && within >> b & 1 == 1 {
                reach[u] |= 1 << b;
            }
        }
    }
    for k in members(within) {
        for i in members(within) {
            if reach[i] >> k & 1 == 1 {
                reach[i] |= reach[k];
            }
        }
    }
    reach
}

pub fn reach_from(g: &Digraph, within: Set, from: Set) -> Set {
    let reach = closure(g, within);
    members(from & within).into_iter().fold(0, |acc, v| acc | reach[v])
}

/// Strongly connected components of `g[within]`, as bitmasks sorted ascending.
pub fn brute_sccs(g: &Digraph, within: Set) -> Vec<Set> {
    let reach = closure(g, within);
    let mut comps: Vec<Set> = members(within)
        .into_iter()
        .map(|u| members(within).into_iter().filter(|&v| reach[u] >> v & 1 == 1 && reach[v] >> u & 1 == 1).fold(0, |a, v| a | 1 << v))
        .collect();
    comps.sort_unstable();
    comps.dedup();
    comps
}

pub fn is_strong(g: &Digraph, s: Set) -> bool {
    s != 0 && brute_sccs(g, s).len() == 1
}

/// Cycle-rank by the defining recursion, without memoization.
pub fn naive_cycle_rank(g: &Digraph, within: Set) -> usize {
    let comps = brute_sccs(g, within);
    if comps.len() == 1 {
        let c = comps[0];
        if c.count_ones() == 1 {
            return 0;
        }
        return 1 + members(c).into_iter().map(|v| naive_cycle_rank(g, c & !(1 << v))).min().unwrap();
    }
    comps.into_iter().map(|c| naive_cycle_rank(g, c)).max().unwrap_or(0)
}

fn is_successor_closed(g: &Digraph, within: Set, r: Set) -> bool {
    g.edges().all(|(u, v)| !(r >> u & 1 == 1 && within >> v & 1 == 1 && r >> v & 1 == 0))
}

fn is_game_position(g: &Digraph, variant: GameVariant, letters: Set, r: Set) -> bool {
    let within = full(g.vertex_count()) & !letters;
    if r & letters != 0 {
        return false;
    }
    if r == 0 {
        return true;
    }
    let comps = brute_sccs(g, within);
    match variant {
        GameVariant::I => is_successor_closed(g, within, r),
        GameVariant::Isc => comps.iter().all(|&c| c & r == 0 || c & r == c),
        GameVariant::V => {
            let inner = brute_sccs(g, r);
            let initial = inner
                .iter()
                .filter(|&&c| g.edges().all(|(u, v)| !(r >> u & 1 == 1 && c >> u & 1 == 0 && c >> v & 1 == 1)))
                .count();
            is_successor_closed(g, within, r) && initial == 1
        }
        GameVariant::Vsc => comps.contains(&r),
    }
}

/// Every position `(X', R')` the game allows after `(X, R)` when the
/// searchers move to `next`, with any valid `R'`, not only maximal ones.
fn successors(g: &Digraph, variant: GameVariant, x: &[usize], r: Set, next: &[usize], special: bool) -> Vec<Set> {
    let n = g.vertex_count();
    let lx = bits(x.iter().copied());
    let lnext = bits(next.iter().copied());
    let free = full(n) & !lnext;
    let during = full(n) & !(lx & lnext);
    let allowed = if special {
        full(n)
    } else if variant.is_strong() {
        brute_sccs(g, during).into_iter().filter(|&c| c & r != 0).fold(0, |a, c| a | c)
    } else {
        reach_from(g, during, r)
    };
    (0..=full(n))
        .filter(|&s| s & !free == 0 && s & !allowed == 0)
        .filter(|&s| is_game_position(g, variant, lnext, s))
        .collect()
}

#[derive(Clone, Copy)]
pub struct Rules {
    pub variant: GameVariant,
    pub monotone: bool,
    pub stationary: bool,
}

/// Whether `k` searchers win, by bounded AND-OR search: the searchers win
/// within `d` rounds if some move leaves every fugitive choice winnable within
/// `d - 1`. Plays longer than the number of positions must repeat one, so that
/// bound decides the game.
pub fn naive_searcher_wins(g: &Digraph, rules: Rules, k: usize) -> bool {
    let n = g.vertex_count();
    let mut words = 0usize;
    let mut len_count = 1usize;
    for len in 0..=k.min(n) {
        if len > 0 {
            len_count *= n + 1 - len;
        }
        words += len_count;
    }
    let bound = words << n;
    let mut memo = HashMap::new();
    let start = (Vec::new(), full(n));
    wins(g, rules, k, start, bound, &mut memo)
}

fn wins(
    g: &Digraph,
    rules: Rules,
    k: usize,
    (x, r): (Vec<usize>, Set),
    d: usize,
    memo: &mut HashMap<(Vec<usize>, Set, usize), bool>,
) -> bool {
    if r == 0 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let key = (x.clone(), r, d);
    if let Some(&w) = memo.get(&key) {
        return w;
    }
    let n = g.vertex_count();
    let special = rules.variant.is_visible()
        && x.is_empty()
        && r == full(n)
        && !is_game_position(g, rules.variant, 0, r);
    let mut moves: Vec<Vec<usize>> = Vec::new();
    if special {
        moves.push(Vec::new());
    } else {
        if !x.is_empty() && !rules.stationary {
            moves.push(x[..x.len() - 1].to_vec());
        }
        if x.len() < k {
            for v in 0..n {
                if !x.contains(&v) {
                    let mut y = x.clone();
                    y.push(v);
                    moves.push(y);
                }
            }
        }
    }
    let mut result = false;
    for next in moves {
        let options = successors(g, rules.variant, &x, r, &next, special);
        if rules.monotone && options.iter().any(|&s| s & !r != 0) {
            continue;
        }
        if options.iter().all(|&s| wins(g, rules, k, (next.clone(), s), d - 1, memo)) {
            result = true;
            break;
        }
    }
    memo.insert(key, result);
    result
}

pub fn naive_search_number(g: &Digraph, rules: Rules) -> usize {
    (1..=g.vertex_count()).find(|&k| naive_searcher_wins(g, rules, k)).expect("n searchers always win")
}

/// Random simple digraphs on `1..=max_n` vertices.
pub fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1))))
        .prop_map(|(n, mask)| {
            let pairs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            Digraph::new(n, edges).unwrap()
        })
}
