//! Categorical product of hypergraphs.
//!
//! A set `S` of product vertices is an edge iff, for every factor, the
//! projection of `S` onto that factor is an edge of the factor. Product
//! vertices are tuples of 1-based factor vertices, flattened row-major in
//! factor order.

use crate::error::{Error, Result};
use crate::hypergraph::{minimal_sets, Coloring, Hypergraph};

/// Limits for materializing the minimal edges of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaterializeCaps {
    pub max_vertices: usize,
    /// Candidate subsets examined per factor-edge tuple.
    pub max_candidates: u128,
}

impl Default for MaterializeCaps {
    fn default() -> Self {
        MaterializeCaps {
            max_vertices: 10_000,
            max_candidates: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpace {
    factors: Vec<Hypergraph>,
    strides: Vec<usize>,
    num_vertices: usize,
}

impl ProductSpace {
    pub fn new(factors: Vec<Hypergraph>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::invalid("a product needs at least one factor"));
        }
        if factors.iter().any(|f| f.edges().iter().any(|e| e.len() > 64)) {
            return Err(Error::invalid("product factors support edges of at most 64 vertices"));
        }
        let mut strides = vec![1usize; factors.len()];
        let mut total: usize = 1;
        for (i, f) in factors.iter().enumerate().rev() {
            strides[i] = total;
            total = total
                .checked_mul(f.n())
                .ok_or_else(|| Error::invalid("product vertex count overflows"))?;
        }
        Ok(ProductSpace {
            factors,
            strides,
            num_vertices: total,
        })
    }

    pub fn factors(&self) -> &[Hypergraph] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edge_tuples(&self) -> usize {
        self.factors.iter().map(|f| f.num_edges()).product()
    }

    /// Row-major flat index (0-based) of a tuple of 1-based factor vertices.
    pub fn flat_index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.factors.len());
        tuple
            .iter()
            .zip(&self.strides)
            .map(|(&v, &s)| (v - 1) * s)
            .sum()
    }

    pub fn tuple_of(&self, mut flat: usize) -> Vec<usize> {
        let mut t = Vec::with_capacity(self.factors.len());
        for &s in &self.strides {
            t.push(flat / s + 1);
            flat %= s;
        }
        t
    }

    /// Every tuple of factor edge indices (0-based), row-major.
    pub fn edge_tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let dims: Vec<usize> = self.factors.iter().map(|f| f.num_edges()).collect();
        MixedRadix::new(dims)
    }

    /// The product vertices of `e_1 x ... x e_t` together with, for each of
    /// them, its position inside every factor edge.
    pub(crate) fn edge_box(&self, tuple: &[usize]) -> EdgeBox {
        let edges: Vec<&Vec<usize>> = tuple
            .iter()
            .zip(&self.factors)
            .map(|(&i, f)| &f.edges()[i])
            .collect();
        let dims: Vec<usize> = edges.iter().map(|e| e.len()).collect();
        let mut members = Vec::new();
        let mut coords = Vec::new();
        if dims.iter().all(|&d| d > 0) {
            for pos in MixedRadix::new(dims.clone()) {
                let flat: usize = pos
                    .iter()
                    .zip(&edges)
                    .zip(&self.strides)
                    .map(|((&p, e), &s)| (e[p] - 1) * s)
                    .sum();
                members.push(flat);
                coords.push(pos);
            }
        }
        EdgeBox {
            dims,
            members,
            coords,
        }
    }

    /// `S` is an edge iff each projection of `S` is an edge of its factor.
    pub fn product_is_edge(&self, s: &[Vec<usize>]) -> bool {
        self.factors.iter().enumerate().all(|(l, f)| {
            let mut proj: Vec<usize> = s.iter().map(|t| t[l]).collect();
            proj.sort_unstable();
            proj.dedup();
            f.edges().contains(&proj)
        })
    }

    /// Materializes the inclusion-minimal product edges on the flat vertex
    /// set (vertex `i + 1` is the product vertex with flat index `i`).
    pub fn product_minimal_edges(&self, caps: &MaterializeCaps) -> Result<Hypergraph> {
        if self.num_vertices > caps.max_vertices {
            return Err(Error::cap(
                "product vertex count",
                self.num_vertices as u128,
                caps.max_vertices as u128,
            ));
        }
        let mut found: Vec<Vec<usize>> = Vec::new();
        for tuple in self.edge_tuples() {
            let bx = self.edge_box(&tuple);
            if bx.dims.iter().all(|&d| d == 0) {
                found.push(Vec::new());
                continue;
            }
            let size = bx.members.len();
            let candidates = 1u128.checked_shl(size as u32).unwrap_or(u128::MAX);
            if size >= 64 || candidates > caps.max_candidates {
                return Err(Error::cap(
                    format!("candidate subsets for edge tuple {tuple:?}"),
                    candidates,
                    caps.max_candidates,
                ));
            }
            let mut local: Vec<u64> = Vec::new();
            for k in 1..=size {
                for mask in SubsetsOfSize::new(size, k) {
                    if local.iter().any(|&m| m & mask == m) {
                        continue;
                    }
                    if bx.covers(mask) {
                        local.push(mask);
                    }
                }
            }
            for mask in local {
                let mut e: Vec<usize> = (0..size)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| bx.members[i] + 1)
                    .collect();
                e.sort_unstable();
                found.push(e);
            }
        }
        found.sort();
        found.dedup();
        Ok(Hypergraph::from_canonical(self.num_vertices, minimal_sets(&found)))
    }

    /// Properness without materialization: for every edge tuple and every
    /// color `q`, the `q`-colored vertices of `e_1 x ... x e_t` must fail to
    /// project onto some `e_l`.
    pub fn product_is_proper(&self, c: &Coloring) -> bool {
        assert_eq!(c.len(), self.num_vertices, "coloring must cover the product");
        self.edge_tuples().all(|tuple| {
            let bx = self.edge_box(&tuple);
            !bx.has_covering_color(|flat| c.at(flat))
        })
    }

    /// Colors `(v_1, ..., v_t)` by the color of `v_factor` under `c`.
    pub fn pullback(&self, factor: usize, c: &Coloring) -> Result<Coloring> {
        let f = self
            .factors
            .get(factor)
            .ok_or_else(|| Error::invalid(format!("no factor {factor}")))?;
        if c.len() != f.n() {
            return Err(Error::ColoringLength {
                got: c.len(),
                expected: f.n(),
            });
        }
        let colors = (0..self.num_vertices)
            .map(|flat| c.color(self.tuple_of(flat)[factor]))
            .collect();
        Coloring::new(colors, c.num_colors())
    }
}

/// The box `e_1 x ... x e_t` of one factor-edge tuple.
#[derive(Clone, Debug)]
pub(crate) struct EdgeBox {
    pub dims: Vec<usize>,
    /// Flat indices of the product vertices in the box.
    pub members: Vec<usize>,
    /// Position of each member inside each factor edge.
    pub coords: Vec<Vec<usize>>,
}

impl EdgeBox {
    /// Whether the members selected by `mask` project onto every factor edge.
    fn covers(&self, mask: u64) -> bool {
        let mut cov = vec![0u64; self.dims.len()];
        for (i, pos) in self.coords.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (l, &p) in pos.iter().enumerate() {
                    cov[l] |= 1 << p;
                }
            }
        }
        cov.iter()
            .zip(&self.dims)
            .all(|(&m, &d)| m == full_mask(d))
    }

    fn has_covering_color(&self, color_of: impl Fn(usize) -> usize) -> bool {
        if self.members.is_empty() {
            return self.dims.iter().all(|&d| d == 0);
        }
        let by_member: Vec<usize> = self.members.iter().map(|&m| color_of(m)).collect();
        let mut colors = by_member.clone();
        colors.sort_unstable();
        colors.dedup();
        colors.into_iter().any(|q| {
            let mut cov = vec![0u64; self.dims.len()];
            for (pos, _) in self.coords.iter().zip(&by_member).filter(|(_, &c)| c == q) {
                for (l, &p) in pos.iter().enumerate() {
                    cov[l] |= 1 << p;
                }
            }
            cov.iter().zip(&self.dims).all(|(&m, &d)| m == full_mask(d))
        })
    }
}

pub(crate) fn full_mask(d: usize) -> u64 {
    if d >= 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

/// Row-major enumeration of `0..d_1 x ... x 0..d_t`.
pub(crate) struct MixedRadix {
    dims: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MixedRadix {
    pub(crate) fn new(dims: Vec<usize>) -> Self {
        let next = if dims.iter().any(|&d| d == 0) {
            None
        } else {
            Some(vec![0; dims.len()])
        };
        MixedRadix { dims, next }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.dims[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// `k`-subsets of `0..n` as bitmasks in increasing numeric order.
pub(crate) struct SubsetsOfSize {
    next: Option<u64>,
    limit: u64,
}

impl SubsetsOfSize {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        assert!(n < 64);
        let next = if k > n {
            None
        } else {
            Some(full_mask(k))
        };
        SubsetsOfSize {
            next,
            limit: 1u64 << n,
        }
    }
}

impl Iterator for SubsetsOfSize {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt)
        };
        Some(cur)
    }
}
