//! Seeded random hypergraphs for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{from_mask, Hypergraph};

/// Shape of a random corpus: `n` uniform in `min_n..=max_n`, every nonempty
/// vertex subset an edge independently with probability `edge_prob`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub edge_prob: f64,
}

impl CorpusSpec {
    pub fn new(seed: u64, count: usize, max_n: usize, edge_prob: f64) -> Self {
        CorpusSpec {
            seed,
            count,
            min_n: 1,
            max_n,
            edge_prob,
        }
    }
}

pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize, edge_prob: f64) -> Result<Hypergraph> {
    if n > 16 {
        return Err(Error::cap("vertex count for random subset sampling", n as u128, 16));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::invalid(format!("edge probability {edge_prob} outside [0, 1]")));
    }
    let mut edges: Vec<Vec<usize>> = (1u64..1 << n)
        .filter(|_| rng.gen_bool(edge_prob))
        .map(from_mask)
        .collect();
    edges.sort();
    Hypergraph::new(n, edges)
}

/// One random hypergraph from its own seed.
pub fn seeded_hypergraph(seed: u64, n: usize, edge_prob: f64) -> Result<Hypergraph> {
    random_hypergraph(&mut ChaCha8Rng::seed_from_u64(seed), n, edge_prob)
}

pub fn corpus(spec: &CorpusSpec) -> Result<Vec<Hypergraph>> {
    if spec.min_n > spec.max_n {
        return Err(Error::invalid("min_n exceeds max_n"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.count)
        .map(|_| {
            let n = rng.gen_range(spec.min_n..=spec.max_n);
            random_hypergraph(&mut rng, n, spec.edge_prob)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        let spec = CorpusSpec::new(42, 50, 6, 0.3);
        let a = corpus(&spec).unwrap();
        assert_eq!(a.len(), 50);
        assert_eq!(a, corpus(&spec).unwrap());
        assert!(a.iter().all(|h| (1..=6).contains(&h.n()) && !h.has_empty_edge()));
        let other = corpus(&CorpusSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn probability_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(random_hypergraph(&mut rng, 4, 0.0).unwrap().num_edges(), 0);
        assert_eq!(random_hypergraph(&mut rng, 4, 1.0).unwrap().num_edges(), 15);
        assert!(random_hypergraph(&mut rng, 4, 1.5).is_err());
    }
}
