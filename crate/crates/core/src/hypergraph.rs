//! Finite hypergraphs on the vertex set `1..=n`, colorings and induced
//! subhypergraphs.
//!
//! The induced subhypergraph `H[X]` keeps the edges of `H` that are contained
//! in `X`; it does not intersect edges with `X`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A hypergraph on `1..=n` with a duplicate-free, ordered edge list.
///
/// Every edge is stored sorted ascending. The empty edge is representable;
/// operations whose statement requires a nonempty edge set reject it
/// explicitly.
#[derive(Clone)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    full_symmetry: bool,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Hypergraph {
    /// Builds a hypergraph, canonicalizing the input: vertices inside an edge
    /// are sorted and deduplicated, and repeated edges keep their first
    /// occurrence.
    pub fn new<E, I>(n: usize, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for edge in edges {
            let mut e: Vec<usize> = edge.into_iter().collect();
            e.sort_unstable();
            e.dedup();
            if let Some(&v) = e.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if seen.insert(e.clone()) {
                out.push(e);
            }
        }
        Ok(Hypergraph {
            n,
            edges: out,
            full_symmetry: false,
        })
    }

    /// Strict constructor: rejects repeated vertices inside an edge and
    /// duplicate edges instead of canonicalizing them away.
    pub fn new_strict(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            if let Some(&v) = e.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            let original = e.clone();
            e.sort_unstable();
            if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex {
                    vertex: w[0],
                    edge: original,
                });
            }
            if !seen.insert(e.clone()) {
                return Err(Error::DuplicateEdge(e));
            }
            out.push(e);
        }
        Ok(Hypergraph {
            n,
            edges: out,
            full_symmetry: false,
        })
    }

    pub fn edgeless(n: usize) -> Self {
        Hypergraph {
            n,
            edges: Vec::new(),
            full_symmetry: false,
        }
    }

    pub(crate) fn from_canonical(n: usize, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(edges.iter().all(|e| e.windows(2).all(|w| w[0] < w[1])));
        Hypergraph {
            n,
            edges,
            full_symmetry: false,
        }
    }

    pub(crate) fn with_full_symmetry(mut self) -> Self {
        self.full_symmetry = true;
        self
    }

    /// Set by constructors whose output is invariant under every vertex
    /// permutation. Never inferred.
    pub fn has_full_symmetry(&self) -> bool {
        self.full_symmetry
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    pub fn has_empty_edge(&self) -> bool {
        self.edges.iter().any(|e| e.is_empty())
    }

    pub fn has_small_edge(&self) -> bool {
        self.edges.iter().any(|e| e.len() <= 1)
    }

    /// Rejects hypergraphs that have the empty set as an edge.
    pub fn require_no_empty_edge(&self) -> Result<()> {
        if self.has_empty_edge() {
            Err(Error::EmptyEdge)
        } else {
            Ok(())
        }
    }

    pub fn is_uniform(&self, k: usize) -> bool {
        self.edges.iter().all(|e| e.len() == k)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.binary_search(&v).is_ok())
            .count()
    }

    /// Edge bitmasks with bit `v - 1` standing for vertex `v`.
    pub fn edge_masks(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(Error::cap("vertex count for bitmask algorithms", self.n as u128, 64));
        }
        Ok(self.edges.iter().map(|e| to_mask(e)).collect())
    }

    /// `H[X]` together with the map from new vertex `i` (position `i - 1`) to
    /// the original vertex.
    pub fn induced(&self, x: &[usize]) -> Result<Induced> {
        let mut keep: Vec<usize> = x.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&v) = keep.iter().find(|&&v| v == 0 || v > self.n) {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        let mut new_index = vec![0usize; self.n + 1];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i + 1;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| new_index[v] != 0))
            .map(|e| e.iter().map(|&v| new_index[v]).collect())
            .collect();
        Ok(Induced {
            hypergraph: Hypergraph::from_canonical(keep.len(), edges),
            vertex_map: keep,
        })
    }

    /// `H[X]` for `X` given as a bitmask (bit `v - 1` for vertex `v`).
    pub(crate) fn induced_mask(&self, mask: u64) -> Hypergraph {
        let keep: Vec<usize> = (1..=self.n).filter(|&v| mask >> (v - 1) & 1 == 1).collect();
        self.induced(&keep).expect("mask within range").hypergraph
    }

    /// True iff no edge is monochromatic. Edges of size at most one are
    /// monochromatic under every coloring.
    pub fn is_proper(&self, c: &Coloring) -> bool {
        assert_eq!(c.len(), self.n, "coloring must cover every vertex");
        self.edges.iter().all(|e| match e.split_first() {
            None => false,
            Some((&first, rest)) => {
                let q = c.color(first);
                rest.iter().any(|&v| c.color(v) != q)
            }
        })
    }

    /// Keeps only the inclusion-minimal edges, preserving stored order.
    pub fn minimal_edges(&self) -> Hypergraph {
        Hypergraph::from_canonical(self.n, minimal_sets(&self.edges))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphFile::from(self)).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&HypergraphFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: HypergraphFile =
            serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        file.try_into()
    }
}

/// Result of [`Hypergraph::induced`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Induced {
    pub hypergraph: Hypergraph,
    /// `vertex_map[i]` is the original vertex of new vertex `i + 1`.
    pub vertex_map: Vec<usize>,
}

/// On-disk form: `{"n": 4, "edges": [[1, 2], [3, 4]]}` with 1-based
/// vertices. Edges are written in lexicographic order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HypergraphFile {
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
}

impl From<&Hypergraph> for HypergraphFile {
    fn from(h: &Hypergraph) -> Self {
        let mut edges = h.edges.clone();
        edges.sort();
        HypergraphFile { n: h.n, edges }
    }
}

impl TryFrom<HypergraphFile> for Hypergraph {
    type Error = Error;

    fn try_from(file: HypergraphFile) -> Result<Self> {
        Hypergraph::new_strict(file.n, file.edges)
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = HypergraphFile::deserialize(d)?;
        Hypergraph::try_from(file).map_err(serde::de::Error::custom)
    }
}

/// A total coloring with colors in `1..=num_colors`; position `i` holds the
/// color of vertex `i + 1` (or of the product vertex with flat index `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<usize>,
    num_colors: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, num_colors: usize) -> Result<Self> {
        if let Some((index, &color)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > num_colors)
        {
            return Err(Error::ColorOutOfRange {
                index,
                color,
                num_colors,
            });
        }
        Ok(Coloring { colors, num_colors })
    }

    /// Uses the largest color present as the palette size.
    pub fn from_colors(colors: Vec<usize>) -> Result<Self> {
        let c = colors.iter().copied().max().unwrap_or(0);
        Coloring::new(colors, c)
    }

    pub fn constant(len: usize, color: usize) -> Self {
        Coloring {
            colors: vec![color; len],
            num_colors: color,
        }
    }

    /// Color of the 1-based vertex `v`.
    pub fn color(&self, v: usize) -> usize {
        self.colors[v - 1]
    }

    /// Color at the 0-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.colors[i]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors_used(&self) -> usize {
        let mut used: Vec<usize> = self.colors.clone();
        used.sort_unstable();
        used.dedup();
        used.len()
    }
}

pub(crate) fn to_mask(edge: &[usize]) -> u64 {
    edge.iter().fold(0u64, |m, &v| m | 1 << (v - 1))
}

pub(crate) fn from_mask(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub(crate) fn is_subset_sorted(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

pub(crate) fn is_disjoint_sorted(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Inclusion-minimal members of a duplicate-free family of sorted sets,
/// in their original order.
pub(crate) fn minimal_sets(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut by_size: Vec<usize> = (0..sets.len()).collect();
    by_size.sort_by_key(|&i| sets[i].len());
    let mut keep = vec![false; sets.len()];
    let mut kept: Vec<usize> = Vec::new();
    for i in by_size {
        let s = &sets[i];
        if !kept
            .iter()
            .any(|&j| sets[j].len() < s.len() && is_subset_sorted(&sets[j], s))
        {
            keep[i] = true;
            kept.push(i);
        }
    }
    sets.iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(s, _)| s.clone())
        .collect()
}
