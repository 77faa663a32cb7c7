//! Seeded random digraphs.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, GraphError};

/// Parameters of a G(n, p) random digraph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

/// Samples a digraph on `n` vertices. A ChaCha8 stream seeded with
/// `seed_from_u64(seed)` draws one `f64` in `[0, 1)` per ordered pair `(u, v)`,
/// `u != v`, in row-major order; the edge is kept when the draw is below `p`.
pub fn generate_random(cfg: GeneratorConfig) -> Result<Digraph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut edges = Vec::new();
    for u in 0..cfg.n {
        for v in 0..cfg.n {
            if u != v && rng.random::<f64>() < cfg.p {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(cfg.n, edges)
}

/// `count` instance seeds drawn from a master stream, so a batch is fixed by
/// one seed and any single instance can be regenerated from its own.
pub fn derive_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..count).map(|_| rng.next_u64()).collect()
}
