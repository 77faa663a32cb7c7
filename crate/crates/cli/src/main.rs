use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use cyclerank::certificates::{
    build_shelter, haven_to_fugitive_strategy, shelter_to_haven, synthesize_search_script, verify_shelter,
};
use cyclerank::equiv::{all_digraphs, random_configs, random_digraphs, run_batch};
use cyclerank::game::{
    all_search_numbers, play, solve, solve_experimental, FirstResponseFugitive, FugitiveStrategy, GameVariant,
    Outcome, Restrictions, ScriptMove, Searcher, SearcherStrategy,
};
use cyclerank::io::{parse_graph, to_edge_list, verify_certificate, Certificate, CertificateDocument};
use cyclerank::{cycle_rank, Digraph, Execution};

#[derive(Parser)]
#[command(name = "cyclerank", version, about = "Cycle-rank, LIFO search games and their certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the cycle-rank of a graph.
    Rank {
        file: PathBuf,
        /// Write the elimination forest certificate here.
        #[arg(long, value_name = "OUT.json")]
        witness: Option<PathBuf>,
    },
    /// Print the search number of one game variant.
    Solve {
        file: PathBuf,
        #[arg(long)]
        variant: GameVariant,
        #[arg(long)]
        monotone: bool,
        /// Searchers are never removed before capture (vsc only unless --experimental).
        #[arg(long)]
        stationary: bool,
        /// Allow --stationary with the i, isc and v variants.
        #[arg(long)]
        experimental: bool,
        /// Write the solve report with its winning strategy here.
        #[arg(long, value_name = "OUT.json")]
        strategy: Option<PathBuf>,
    },
    /// Print all nine search numbers and 1+cr.
    Numbers { file: PathBuf },
    /// Build a strong shelter.
    Shelter(Emit),
    /// Build a LIFO-haven from a strong shelter.
    Haven(Emit),
    /// Build a searcher script from an optimal elimination forest.
    Script(Emit),
    /// Re-check a certificate against a graph.
    Verify { file: PathBuf, certificate: PathBuf },
    /// Play a searcher strategy against a haven fugitive and print the trace.
    Play {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Script or solve report certificate.
        #[arg(long, value_name = "S.json")]
        searcher: PathBuf,
        /// Haven certificate; the first legal response is used when omitted.
        #[arg(long, value_name = "H.json")]
        fugitive: Option<PathBuf>,
        /// Game variant; defaults to the solve report's, else vsc.
        #[arg(long)]
        variant: Option<GameVariant>,
        /// Write the trace certificate here.
        #[arg(long, value_name = "OUT.json")]
        trace: Option<PathBuf>,
    },
    /// Check that cycle-rank, the search numbers and the certificates agree.
    #[command(name = "equiv-check")]
    EquivCheck {
        /// Every digraph on 1..=N vertices.
        #[arg(long, value_name = "N", conflicts_with = "random", required_unless_present = "random")]
        exhaustive_n: Option<usize>,
        /// COUNT random digraphs on N vertices with edge probability P.
        #[arg(long, value_name = "N,P,COUNT")]
        random: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check instances one at a time.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct Emit {
    file: PathBuf,
    #[arg(short = 'o', long = "output", value_name = "OUT.json")]
    output: Option<PathBuf>,
}

/// Usage and input problems exit with 2, failed checks with 1.
enum Failure {
    Usage(anyhow::Error),
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type RunResult = Result<(), Failure>;

fn read_graph(path: &Path) -> anyhow::Result<Digraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("{}", path.display()))
}

fn read_certificate(path: &Path) -> anyhow::Result<CertificateDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    CertificateDocument::from_json(&text).with_context(|| format!("{} is not a certificate", path.display()))
}

fn write_certificate(path: &Path, g: &Digraph, c: Certificate) -> anyhow::Result<()> {
    let doc = CertificateDocument::new(g, c);
    fs::write(path, doc.to_json() + "\n").with_context(|| format!("cannot write {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> RunResult {
    match command {
        Command::Rank { file, witness } => {
            let g = read_graph(&file)?;
            let r = cycle_rank(&g);
            println!("{}", r.rank);
            if let Some(out) = witness {
                write_certificate(&out, &g, Certificate::EliminationForest(r.witness))?;
            }
        }
        Command::Solve { file, variant, monotone, stationary, experimental, strategy } => {
            let g = read_graph(&file)?;
            let restrictions = Restrictions { monotone, stationary };
            let report = if experimental {
                solve_experimental(&g, variant, restrictions)
            } else {
                solve(&g, variant, restrictions).map_err(|e| anyhow!("{e}; pass --experimental to allow it"))?
            };
            println!("{}", report.search_number);
            if let Some(out) = strategy {
                write_certificate(&out, &g, Certificate::SolveReport(report))?;
            }
        }
        Command::Numbers { file } => {
            let g = read_graph(&file)?;
            let numbers = all_search_numbers(&g);
            for (name, value) in numbers.named() {
                println!("{name}={value}");
            }
            println!("1+cr={}", cycle_rank(&g).rank + 1);
        }
        Command::Shelter(Emit { file, output }) => {
            let g = read_graph(&file)?;
            let s = build_shelter(&g);
            let thickness = verify_shelter(&g, &s).map_err(|e| Failure::Check(format!("built shelter is invalid: {e}")))?;
            println!("thickness {thickness}");
            for set in &s.sets {
                println!("{set}");
            }
            if let Some(out) = output {
                write_certificate(&out, &g, Certificate::Shelter(s))?;
            }
        }
        Command::Haven(Emit { file, output }) => {
            let g = read_graph(&file)?;
            let h = shelter_to_haven(&g, &build_shelter(&g)).map_err(|e| Failure::Check(e.to_string()))?;
            println!("order {}", h.order);
            for e in &h.table {
                println!("{} -> {}", e.word, e.space);
            }
            if let Some(out) = output {
                write_certificate(&out, &g, Certificate::Haven(h))?;
            }
        }
        Command::Script(Emit { file, output }) => {
            let g = read_graph(&file)?;
            let s = synthesize_search_script(&g, &cycle_rank(&g).witness).map_err(|e| Failure::Check(e.to_string()))?;
            println!("searchers {}", s.max_depth().unwrap_or(0));
            for m in &s.moves {
                match m {
                    ScriptMove::Place(v) => println!("place {}", g.label(*v)),
                    ScriptMove::Remove => println!("remove"),
                }
            }
            if let Some(out) = output {
                write_certificate(&out, &g, Certificate::Script(s))?;
            }
        }
        Command::Verify { file, certificate } => {
            let g = read_graph(&file)?;
            let doc = read_certificate(&certificate)?;
            match verify_certificate(&g, &doc) {
                Ok(verdict) => println!("ok: {} verifies as {verdict}", doc.certificate.kind()),
                Err(e) => return Err(Failure::Check(format!("invalid {}: {e}", doc.certificate.kind()))),
            }
        }
        Command::Play { file, k, searcher, fugitive, variant, trace } => {
            let g = read_graph(&file)?;
            let s_doc = read_certificate(&searcher)?;
            if s_doc.graph_hash != g.graph_hash() {
                return Err(Failure::Check(format!("{} belongs to a different graph", searcher.display())));
            }
            let (strategy, default_variant) = match s_doc.certificate {
                Certificate::Script(s) => (SearcherStrategy::Script(s), GameVariant::Vsc),
                Certificate::SolveReport(r) => (r.strategy, r.variant),
                other => bail_usage(format!("{} holds a {}, not a searcher strategy", searcher.display(), other.kind()))?,
            };
            let variant = variant.unwrap_or(default_variant);
            let haven;
            let fugitive: &dyn FugitiveStrategy = match fugitive {
                None => &FirstResponseFugitive,
                Some(path) => {
                    let doc = read_certificate(&path)?;
                    let Certificate::Haven(h) = &doc.certificate else {
                        return Err(Failure::Usage(anyhow!("{} is not a haven certificate", path.display())));
                    };
                    verify_certificate(&g, &doc).map_err(|e| Failure::Check(format!("invalid haven: {e}")))?;
                    haven = haven_to_fugitive_strategy(&g, h).map_err(|e| Failure::Check(e.to_string()))?;
                    &haven
                }
            };
            let t = play(&g, variant, k, Searcher::from(&strategy), fugitive)
                .map_err(|e| Failure::Check(format!("play aborted: {e}")))?;
            for (i, p) in t.positions.iter().enumerate() {
                println!("{i}: {p}");
            }
            match t.outcome {
                Outcome::Searcher { rounds } => println!("winner: searcher after {rounds} rounds"),
                Outcome::Fugitive { reason } => println!("winner: fugitive ({reason:?})"),
            }
            if let Some(out) = trace {
                write_certificate(&out, &g, Certificate::PlayTrace(t))?;
            }
        }
        Command::EquivCheck { exhaustive_n, random, seed, sequential } => {
            let graphs = match (exhaustive_n, random) {
                (Some(n), _) => {
                    if !(1..=5).contains(&n) {
                        bail_usage(format!("--exhaustive-n must be between 1 and 5, got {n}"))?;
                    }
                    (1..=n).flat_map(all_digraphs).collect()
                }
                (None, Some(random)) => {
                    let (n, p, count) = parse_random(&random)?;
                    random_digraphs(&random_configs(n, p, count, seed))
                }
                (None, None) => bail_usage("one of --exhaustive-n or --random is required".into())?,
            };
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let reports = run_batch(&graphs, exec);
            let mut failed = 0;
            for (i, r) in reports.iter().enumerate() {
                if !r.passed() {
                    failed += 1;
                    println!("instance {i}: FAIL {r}");
                    for line in to_edge_list(&r.graph).lines() {
                        println!("  {line}");
                    }
                }
            }
            println!("{} instances, {failed} failed", reports.len());
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} counterexamples")));
            }
        }
    }
    Ok(())
}

fn bail_usage<T>(msg: String) -> Result<T, Failure> {
    Err(Failure::Usage(anyhow!(msg)))
}

fn parse_random(text: &str) -> anyhow::Result<(usize, f64, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [n, p, count] = parts.as_slice() else {
        bail!("--random expects N,P,COUNT, got {text:?}");
    };
    let n: usize = n.parse().with_context(|| format!("bad vertex count {n:?}"))?;
    let p: f64 = p.parse().with_context(|| format!("bad probability {p:?}"))?;
    let count: usize = count.parse().with_context(|| format!("bad count {count:?}"))?;
    if !(1..=cyclerank::MAX_VERTICES).contains(&n) || !(0.0..=1.0).contains(&p) {
        bail!("--random needs 1 <= N <= {} and 0 <= P <= 1", cyclerank::MAX_VERTICES);
    }
    Ok((n, p, count))
}
