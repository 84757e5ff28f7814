//! Hypergraph families: complete k-subset hypergraphs, Kneser hypergraphs,
//! 2-stable k-subsets and matching hypergraphs.

use crate::error::{Error, Result};
use crate::hypergraph::{is_disjoint_sorted, Hypergraph};

/// `KG^r(H)`: vertex `i + 1` is the base edge `base_edges[i]`, i.e. the
/// Kneser vertex order is the stored edge order of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kneser {
    pub hypergraph: Hypergraph,
    pub base_edges: Vec<Vec<usize>>,
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn complete_ksubsets(n: usize, k: usize) -> Result<Hypergraph> {
    if k < 1 || k > n {
        return Err(Error::invalid(format!(
            "complete k-subsets need 1 <= k <= n, got n={n} k={k}"
        )));
    }
    Ok(Hypergraph::from_canonical(n, ksubsets(n, k)).with_full_symmetry())
}

pub(crate) fn ksubsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for v in start..=n + 1 - need {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(1, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// `r`-sets of pairwise disjoint edges of `h`, as increasing tuples of
/// 1-based edge indices in lexicographic order.
fn disjoint_families(h: &Hypergraph, r: usize) -> Vec<Vec<usize>> {
    fn go(
        edges: &[Vec<usize>],
        start: usize,
        r: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == r {
            out.push(cur.iter().map(|i| i + 1).collect());
            return;
        }
        for i in start..edges.len() {
            if cur.iter().all(|&j| is_disjoint_sorted(&edges[i], &edges[j])) {
                cur.push(i);
                go(edges, i + 1, r, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(h.edges(), 0, r, &mut Vec::with_capacity(r), &mut out);
    out
}

/// `KG^r(H)`: vertices are the edges of `H`, edges are the `r`-sets of
/// pairwise disjoint edges of `H`.
pub fn kneser(h: &Hypergraph, r: usize) -> Result<Kneser> {
    if r < 2 {
        return Err(Error::invalid(format!("Kneser rank must be >= 2, got {r}")));
    }
    let edges = disjoint_families(h, r);
    Ok(Kneser {
        hypergraph: Hypergraph::from_canonical(h.num_edges(), edges),
        base_edges: h.edges().to_vec(),
    })
}

/// `KG^r(n, k)`.
pub fn usual_kneser(n: usize, k: usize, r: usize) -> Result<Kneser> {
    kneser(&complete_ksubsets(n, k)?, r)
}

/// The `k`-subsets of `[n]` with no two cyclically adjacent elements. Empty
/// when `n < 2k`.
pub fn stable_ksubsets(n: usize, k: usize) -> Hypergraph {
    let edges = ksubsets(n, k)
        .into_iter()
        .filter(|a| {
            a.iter().enumerate().all(|(x, &i)| {
                a[x + 1..]
                    .iter()
                    .all(|&j| j - i >= 2 && j - i <= n.saturating_sub(2))
            })
        })
        .collect();
    Hypergraph::from_canonical(n, edges)
}

/// `KG^r(n, k)_{2-stab}`.
pub fn stable_kneser(n: usize, k: usize, r: usize) -> Result<Kneser> {
    kneser(&stable_ksubsets(n, k), r)
}

/// For a simple graph `g`: vertices are the edges of `g`, edges are the sets
/// of `r` pairwise vertex-disjoint edges (the `rK_2` subgraphs of `g`).
/// `kneser(&matchings_hypergraph(g, r)?, 2)` is `KG(g, rK_2)`.
pub fn matchings_hypergraph(g: &Hypergraph, r: usize) -> Result<Hypergraph> {
    if !g.is_uniform(2) {
        return Err(Error::invalid("matching hypergraphs need a 2-uniform input graph"));
    }
    if r < 1 {
        return Err(Error::invalid("matching size must be >= 1"));
    }
    Ok(Hypergraph::from_canonical(g.num_edges(), disjoint_families(g, r)))
}

pub fn complete_graph(n: usize) -> Hypergraph {
    Hypergraph::from_canonical(n, ksubsets(n, 2)).with_full_symmetry()
}

pub fn cycle_graph(n: usize) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::invalid("a cycle needs at least 3 vertices"));
    }
    Hypergraph::new(n, (1..=n).map(|i| vec![i, i % n + 1]))
}

pub fn path_graph(n: usize) -> Hypergraph {
    Hypergraph::from_canonical(n, (1..n).map(|i| vec![i, i + 1]).collect())
}
