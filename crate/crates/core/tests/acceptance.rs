//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{naive_cycle_rank, naive_search_number, Rules};
use cyclerank::equiv::{all_digraphs, run_batch, InstanceReport};
use cyclerank::game::{all_search_numbers, solve, GameVariant, Restrictions};
use cyclerank::io::{derive_seeds, generate_random, to_edge_list, GeneratorConfig};
use cyclerank::{cycle_rank, Digraph, Execution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MASTER_SEED: u64 = 0x5eed_c7c1_e5a2_0001;
const PAIR_SEED: u64 = 0x5eed_c7c1_e5a2_0005;
const PROBABILITIES: [f64; 3] = [0.2, 0.5, 0.8];

struct Line {
    id: usize,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn first_failure(reports: &[InstanceReport], ok: impl Fn(&InstanceReport) -> bool) -> String {
    let bad: Vec<&InstanceReport> = reports.iter().filter(|r| !ok(r)).collect();
    match bad.first() {
        None => format!("{} instances", reports.len()),
        Some(r) => format!(
            "{} of {} instances fail; first:\n{}  {}",
            bad.len(),
            reports.len(),
            to_edge_list(&r.graph).lines().collect::<Vec<_>>().join(" | "),
            r
        ),
    }
}

fn sampled_configs() -> Vec<GeneratorConfig> {
    derive_seeds(MASTER_SEED, 200)
        .into_iter()
        .enumerate()
        .map(|(i, seed)| GeneratorConfig { n: 5 + i % 2, p: PROBABILITIES[(i / 2) % 3], seed })
        .collect()
}

fn subgraph_monotonicity() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SEED);
    let mut failures = Vec::new();
    for i in 0..100 {
        let cfg = GeneratorConfig { n: 2 + i % 4, p: PROBABILITIES[i % 3], seed: rng.random() };
        let g = generate_random(cfg).unwrap();
        let drop = rng.random_range(0..cfg.n);
        let sub = g.extract(g.vertices().without(drop)).unwrap();
        let (big, small) = (all_search_numbers(&g), all_search_numbers(&sub));
        let (cr_big, cr_small) = (cycle_rank(&g).rank, cycle_rank(&sub).rank);
        let numbers_ok = small.values().iter().zip(big.values()).all(|(s, b)| *s <= b);
        if !numbers_ok || cr_small > cr_big {
            failures.push(format!("pair {i} ({cfg:?}, drop {drop})"));
        }
    }
    (failures.is_empty(), if failures.is_empty() { "100 pairs".into() } else { failures.join("; ") })
}

fn oracle_agreement() -> (bool, String) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=3 {
        for g in all_digraphs(n) {
            let all = (1u64 << n) - 1;
            if naive_cycle_rank(&g, all) != cycle_rank(&g).rank {
                failures.push(format!("cycle-rank on {:?}", g));
            }
            let mut configs: Vec<(GameVariant, Restrictions)> = GameVariant::ALL
                .iter()
                .flat_map(|&v| [(v, Restrictions::PLAIN), (v, Restrictions::MONOTONE)])
                .collect();
            configs.push((GameVariant::Vsc, Restrictions::STATIONARY));
            for (variant, r) in configs {
                let rules = Rules { variant, monotone: r.monotone, stationary: r.stationary };
                let fast = solve(&g, variant, r).unwrap().search_number;
                let slow = naive_search_number(&g, rules);
                checked += 1;
                if fast != slow {
                    failures.push(format!("{variant} {r:?} on {g:?}: solver {fast}, naive {slow}"));
                }
            }
        }
    }
    let ok = failures.is_empty();
    (ok, if ok { format!("{checked} solves, 69 graphs") } else { failures.join("; ") })
}

fn spot_checks() -> (bool, String) {
    let mut failures = Vec::new();
    let mut check = |label: String, g: &Digraph, number: usize, rank: usize| {
        let numbers = all_search_numbers(g);
        let cr = cycle_rank(g).rank;
        if !numbers.all_equal(number) || cr != rank {
            failures.push(format!("{label}: numbers {:?}, cr {cr}", numbers.values()));
        }
    };
    for n in 1..=6 {
        check(format!("path {n}"), &Digraph::path(n), 1, 0);
    }
    for n in 2..=6 {
        check(format!("cycle {n}"), &Digraph::cycle(n), 2, 1);
    }
    for n in 1..=5 {
        check(format!("bidirected K{n}"), &Digraph::bidirected_complete(n), n, n - 1);
    }
    let ok = failures.is_empty();
    (ok, if ok { "paths, cycles, bidirected cliques".into() } else { failures.join("; ") })
}

fn main() -> ExitCode {
    let exec = Execution::default();
    let mut lines = Vec::new();
    let clock = Instant::now();

    let exhaustive: Vec<Digraph> = (1..=4).flat_map(all_digraphs).collect();
    let exhaustive = run_batch(&exhaustive, exec);
    let sampled: Vec<Digraph> = sampled_configs().into_iter().map(|c| generate_random(c).unwrap()).collect();
    let sampled = run_batch(&sampled, exec);
    let both: Vec<InstanceReport> = exhaustive.iter().chain(&sampled).cloned().collect();

    lines.push(Line {
        id: 1,
        name: "search numbers equal 1+cr on every digraph with n <= 4",
        passed: exhaustive.iter().all(|r| r.numbers_ok),
        detail: first_failure(&exhaustive, |r| r.numbers_ok),
    });
    lines.push(Line {
        id: 2,
        name: "search numbers equal 1+cr on 200 random digraphs with n in {5,6}",
        passed: sampled.iter().all(|r| r.numbers_ok),
        detail: first_failure(&sampled, |r| r.numbers_ok),
    });
    lines.push(Line {
        id: 3,
        name: "shelter thickness, haven order cr+1 and the haven fugitive escapes cr searchers",
        passed: both.iter().all(|r| r.lower_bound_ok),
        detail: format!(
            "{}; haven built from cycle-rank escapes on {} of {}",
            first_failure(&both, |r| r.lower_bound_ok),
            both.iter().filter(|r| r.rank_haven_ok).count(),
            both.len()
        ),
    });
    lines.push(Line {
        id: 4,
        name: "elimination script wins in i and isc, monotone, depth cr+1",
        passed: both.iter().all(|r| r.upper_bound_ok),
        detail: first_failure(&both, |r| r.upper_bound_ok),
    });
    let (passed, detail) = subgraph_monotonicity();
    lines.push(Line { id: 5, name: "numbers and cr never grow under vertex deletion", passed, detail });
    let (passed, detail) = oracle_agreement();
    lines.push(Line { id: 6, name: "solver and cycle-rank agree with naive search for n <= 3", passed, detail });
    let (passed, detail) = spot_checks();
    lines.push(Line { id: 7, name: "fixed values on paths, cycles and bidirected cliques", passed, detail });

    for l in &lines {
        println!("criterion {}: {} - {} ({})", l.id, if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail);
    }
    println!("elapsed {:.1?}", clock.elapsed());
    if lines.iter().all(|l| l.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
