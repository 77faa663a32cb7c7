//! JSON certificate documents bound to a graph by its hash, and their
//! verification.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificates::{verify_haven, verify_shelter, HavenError, LifoHaven, ShelterError, StrongShelter};
use crate::digraph::Digraph;
use crate::game::{
    check_strategy, fugitive_responses, is_special_start, searcher_moves, solve_at, Escape, GameVariant, Outcome,
    PlayTrace, Position, Restrictions, Searcher, SearcherScript, SolveReport, StrategyFailure,
};
use crate::rank::{verify_elimination_forest, EliminationForest, ForestError};

/// Version tag written into every document.
pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Certificate {
    EliminationForest(EliminationForest),
    Shelter(StrongShelter),
    Haven(LifoHaven),
    Script(SearcherScript),
    SolveReport(SolveReport),
    PlayTrace(PlayTrace),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::EliminationForest(_) => "elimination_forest",
            Certificate::Shelter(_) => "shelter",
            Certificate::Haven(_) => "haven",
            Certificate::Script(_) => "script",
            Certificate::SolveReport(_) => "solve_report",
            Certificate::PlayTrace(_) => "play_trace",
        }
    }
}

/// `{"spec_version", "graph_hash", "kind", "payload"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub spec_version: String,
    pub graph_hash: String,
    #[serde(flatten)]
    pub certificate: Certificate,
}

impl CertificateDocument {
    pub fn new(g: &Digraph, certificate: Certificate) -> Self {
        CertificateDocument { spec_version: FORMAT_VERSION.to_owned(), graph_hash: g.graph_hash(), certificate }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// What a successfully verified certificate establishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// An elimination forest of this depth, so `cr <= depth`.
    ForestDepth(usize),
    ShelterThickness(usize),
    HavenOrder(usize),
    /// The script captures in both invisible variants using at most `depth` searchers.
    ScriptCaptures { depth: usize, rounds: usize },
    /// The strategy wins with `k` searchers and the game is lost with `k - 1`.
    SearchNumber { variant: GameVariant, k: usize },
    TraceConsistent { outcome: Outcome, rounds: usize },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ForestDepth(d) => write!(f, "elimination forest of depth {d}"),
            Verdict::ShelterThickness(t) => write!(f, "strong shelter of thickness {t}"),
            Verdict::HavenOrder(k) => write!(f, "haven of order {k}"),
            Verdict::ScriptCaptures { depth, rounds } => {
                write!(f, "script captures in i and isc with {depth} searchers in {rounds} rounds")
            }
            Verdict::SearchNumber { variant, k } => write!(f, "{variant} search number {k}"),
            Verdict::TraceConsistent { outcome, rounds } => write!(f, "legal trace of {rounds} rounds, {outcome:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("graph hash mismatch: certificate has {found}, input graph has {expected}")]
    HashMismatch { expected: String, found: String },
    #[error("unsupported certificate version {0:?}")]
    Version(String),
    #[error("invalid elimination forest: {0}")]
    Forest(#[from] ForestError),
    #[error("invalid shelter: {0}")]
    Shelter(#[from] ShelterError),
    #[error("invalid haven: {0}")]
    Haven(#[from] HavenError),
    #[error("script is not a legal stack sequence")]
    IllegalScript,
    #[error("strategy fails in {variant} with {k} searchers: {failure}")]
    Strategy { variant: GameVariant, k: usize, failure: StrategyFailure },
    #[error("claimed search number {k} is not minimal: {variant} is won with {} searchers", k - 1)]
    NotMinimal { variant: GameVariant, k: usize },
    #[error("search number must be at least 1")]
    ZeroSearchNumber,
    #[error("trace step {step}: {reason}")]
    Trace { step: usize, reason: String },
}

/// Checks the graph hash, then the version, then the certificate itself.
pub fn verify_certificate(g: &Digraph, doc: &CertificateDocument) -> Result<Verdict, CertificateError> {
    let expected = g.graph_hash();
    if doc.graph_hash != expected {
        return Err(CertificateError::HashMismatch { expected, found: doc.graph_hash.clone() });
    }
    if doc.spec_version != FORMAT_VERSION {
        return Err(CertificateError::Version(doc.spec_version.clone()));
    }
    match &doc.certificate {
        Certificate::EliminationForest(f) => Ok(Verdict::ForestDepth(verify_elimination_forest(g, f)?)),
        Certificate::Shelter(s) => Ok(Verdict::ShelterThickness(verify_shelter(g, s)?)),
        Certificate::Haven(h) => Ok(Verdict::HavenOrder(verify_haven(g, h)?)),
        Certificate::Script(s) => verify_script(g, s),
        Certificate::SolveReport(r) => verify_report(g, r),
        Certificate::PlayTrace(t) => verify_trace(g, t),
    }
}

fn verify_script(g: &Digraph, s: &SearcherScript) -> Result<Verdict, CertificateError> {
    let depth = s.max_depth().ok_or(CertificateError::IllegalScript)?;
    let mut rounds = 0;
    for variant in [GameVariant::I, GameVariant::Isc] {
        rounds = check_strategy(g, variant, depth, Searcher::Script(s), Restrictions::PLAIN)
            .map_err(|failure| CertificateError::Strategy { variant, k: depth, failure })?;
    }
    Ok(Verdict::ScriptCaptures { depth, rounds })
}

fn verify_report(g: &Digraph, r: &SolveReport) -> Result<Verdict, CertificateError> {
    let (variant, k) = (r.variant, r.search_number);
    if k == 0 {
        return Err(CertificateError::ZeroSearchNumber);
    }
    let restrictions = Restrictions { monotone: r.monotone, stationary: r.stationary };
    check_strategy(g, variant, k, (&r.strategy).into(), restrictions)
        .map_err(|failure| CertificateError::Strategy { variant, k, failure })?;
    if k > 1 && solve_at(g, variant, restrictions, k - 1).searcher_wins {
        return Err(CertificateError::NotMinimal { variant, k });
    }
    Ok(Verdict::SearchNumber { variant, k })
}

fn verify_trace(g: &Digraph, t: &PlayTrace) -> Result<Verdict, CertificateError> {
    let bad = |step: usize, reason: String| Err(CertificateError::Trace { step, reason });
    let Some(first) = t.positions.first() else {
        return bad(0, "empty trace".into());
    };
    if *first != Position::start(g) {
        return bad(0, format!("trace starts at {first} instead of the start position"));
    }
    for (i, w) in t.positions.windows(2).enumerate() {
        let (pos, next) = (&w[0], &w[1]);
        if pos.is_captured() {
            return bad(i + 1, "play continues after capture".into());
        }
        let legal = if is_special_start(g, t.variant, pos) {
            next.stack.is_empty()
        } else {
            searcher_moves(g, pos, t.k).contains(&next.stack)
        };
        if !legal {
            return bad(i + 1, format!("illegal searcher move from {} to {}", pos.stack, next.stack));
        }
        if !fugitive_responses(g, t.variant, pos, &next.stack).contains(&next.space) {
            return bad(i + 1, format!("illegal fugitive space {} after {}", next.space, next.stack));
        }
    }
    let rounds = t.positions.len() - 1;
    let last = t.positions.last().unwrap();
    let consistent = match t.outcome {
        Outcome::Searcher { rounds: r } => last.is_captured() && r == rounds,
        Outcome::Fugitive { reason } => {
            !last.is_captured()
                && match reason {
                    Escape::Repetition => t.positions[..rounds].contains(last),
                    Escape::NoSearcherMove => {
                        !is_special_start(g, t.variant, last) && searcher_moves(g, last, t.k).is_empty()
                    }
                    Escape::ScriptExhausted => true,
                }
        }
    };
    if !consistent {
        return bad(rounds, format!("outcome {:?} does not match the final position {last}", t.outcome));
    }
    Ok(Verdict::TraceConsistent { outcome: t.outcome, rounds })
}
