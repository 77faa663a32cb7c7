//! Checks that cycle-rank, the nine search numbers and the certificates agree
//! on a batch of graphs.

use std::fmt;

use crate::certificates::{
    build_haven, build_shelter, haven_to_fugitive_strategy, shelter_to_haven, synthesize_search_script, verify_shelter,
};
use crate::digraph::Digraph;
use crate::game::{
    all_search_numbers, play, solve_at, FirstResponseFugitive, GameVariant, Outcome, Restrictions, SearchNumbers,
    Searcher,
};
use crate::io::{derive_seeds, generate_random, GeneratorConfig};
use crate::par::Execution;
use crate::rank::cycle_rank;

/// Everything checked on one graph. Each `*_ok` flag covers one family of
/// claims; `failures` explains every flag that is false.
#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub graph: Digraph,
    pub cycle_rank: usize,
    pub numbers: SearchNumbers,
    /// All nine search numbers equal `cycle_rank + 1`.
    pub numbers_ok: bool,
    /// Shelter thickness and haven order are `cycle_rank + 1`, and the haven
    /// fugitive escapes the vsc solver strategy with `cycle_rank` searchers.
    pub lower_bound_ok: bool,
    /// The elimination script captures in i and isc, monotonically, with
    /// exactly `cycle_rank + 1` searchers.
    pub upper_bound_ok: bool,
    /// The haven built directly from cycle-rank has order `cycle_rank + 1`
    /// and its fugitive escapes `cycle_rank` searchers. Reported separately:
    /// it holds even where no shelter is thick enough.
    pub rank_haven_ok: bool,
    pub failures: Vec<String>,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.numbers_ok && self.lower_bound_ok && self.upper_bound_ok
    }
}

impl fmt::Display for InstanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cr={}", self.cycle_rank)?;
        for (name, v) in self.numbers.named() {
            write!(f, " {name}={v}")?;
        }
        for msg in &self.failures {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

pub fn check_instance(g: &Digraph) -> InstanceReport {
    let cr = cycle_rank(g);
    let target = cr.rank + 1;
    let numbers = all_search_numbers(g);
    let mut failures = Vec::new();

    let numbers_ok = numbers.all_equal(target);
    if !numbers_ok {
        failures.push(format!("search numbers differ from 1+cr={target}"));
    }

    // the solver's vsc strategy with one searcher too few
    let table = solve_at(g, GameVariant::Vsc, Restrictions::PLAIN, cr.rank).table;
    let mut lower = Vec::new();
    let shelter = build_shelter(g);
    match verify_shelter(g, &shelter) {
        Ok(t) if t == target => {}
        Ok(t) => lower.push(format!("shelter thickness {t}, expected {target}")),
        Err(e) => lower.push(format!("shelter invalid: {e}")),
    }
    match shelter_to_haven(g, &shelter).and_then(|h| haven_to_fugitive_strategy(g, &h)) {
        Ok(fugitive) if fugitive.order() != target => {
            lower.push(format!("haven order {}, expected {target}", fugitive.order()))
        }
        Ok(fugitive) => {
            match play(g, GameVariant::Vsc, cr.rank, Searcher::Table(&table), &fugitive) {
                Ok(t) if !t.searcher_won() => {}
                Ok(t) => lower.push(format!("haven fugitive caught by {} searchers: {:?}", cr.rank, t.outcome)),
                Err(e) => lower.push(format!("haven fugitive play failed: {e}")),
            }
        }
        Err(e) => lower.push(format!("haven invalid: {e}")),
    }

    let rank_haven = build_haven(g);
    let rank_haven_ok = haven_to_fugitive_strategy(g, &rank_haven).is_ok_and(|f| {
        f.order() == target
            && play(g, GameVariant::Vsc, cr.rank, Searcher::Table(&table), &f).is_ok_and(|t| !t.searcher_won())
    });
    if !rank_haven_ok {
        failures.push("haven built from cycle-rank does not escape".into());
    }

    let mut upper = Vec::new();
    match synthesize_search_script(g, &cr.witness) {
        Ok(script) => {
            for variant in [GameVariant::I, GameVariant::Isc] {
                match play(g, variant, target, Searcher::Script(&script), &FirstResponseFugitive) {
                    Ok(t) => {
                        if !matches!(t.outcome, Outcome::Searcher { .. }) {
                            upper.push(format!("script loses in {variant}: {:?}", t.outcome));
                        }
                        if !t.is_monotone() {
                            upper.push(format!("script trace in {variant} is not monotone"));
                        }
                        if t.max_stack_depth() != target {
                            upper.push(format!("script depth {} in {variant}, expected {target}", t.max_stack_depth()));
                        }
                    }
                    Err(e) => upper.push(format!("script play in {variant} failed: {e}")),
                }
            }
        }
        Err(e) => upper.push(format!("elimination forest invalid: {e}")),
    }

    let (lower_bound_ok, upper_bound_ok) = (lower.is_empty(), upper.is_empty());
    failures.extend(lower);
    failures.extend(upper);
    InstanceReport {
        graph: g.clone(),
        cycle_rank: cr.rank,
        numbers,
        numbers_ok,
        lower_bound_ok,
        upper_bound_ok,
        rank_haven_ok,
        failures,
    }
}

/// Every labelled simple digraph on `n` vertices, indexed by the bitmask of
/// its edges over the ordered pairs `(u, v)`, `u != v`, in row-major order.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 32, "exhaustive enumeration is limited to n <= 6");
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        Digraph::new(n, edges).expect("enumerated graphs are simple")
    })
}

/// `count` random digraphs with the given `n` and `p`, instance seeds drawn
/// from `master`.
pub fn random_configs(n: usize, p: f64, count: usize, master: u64) -> Vec<GeneratorConfig> {
    derive_seeds(master, count).into_iter().map(|seed| GeneratorConfig { n, p, seed }).collect()
}

pub fn random_digraphs(configs: &[GeneratorConfig]) -> Vec<Digraph> {
    configs.iter().map(|&c| generate_random(c).expect("n >= 1")).collect()
}

/// Checks every graph; reports come back in input order whatever the mode.
pub fn run_batch(graphs: &[Digraph], exec: Execution) -> Vec<InstanceReport> {
    exec.map(graphs, check_instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_digraphs(1).count(), 1);
        assert_eq!(all_digraphs(2).count(), 4);
        assert_eq!(all_digraphs(3).count(), 64);
        assert_eq!(all_digraphs(3).last().unwrap(), Digraph::bidirected_complete(3));
    }

    #[test]
    fn small_instances_pass() {
        for n in 1..=3 {
            for r in run_batch(&all_digraphs(n).collect::<Vec<_>>(), Execution::default()) {
                assert!(r.passed() && r.rank_haven_ok, "{:?}\n{r}", r.graph);
            }
        }
    }

    #[test]
    fn batch_order_is_stable() {
        let graphs = random_digraphs(&random_configs(4, 0.5, 12, 9));
        let seq: Vec<usize> = run_batch(&graphs, Execution::Sequential).iter().map(|r| r.cycle_rank).collect();
        let par: Vec<usize> = run_batch(&graphs, Execution::Parallel).iter().map(|r| r.cycle_rank).collect();
        assert_eq!(seq, par);
    }
}
