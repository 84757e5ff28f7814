//! Reduction hypergraphs on the vertex set of `H` whose edges are the vertex
//! sets carrying too much defect (or too little alternation).

use serde::{Deserialize, Serialize};

use crate::alternation::{alternation_number_with, AltCaps};
use crate::defect::defect_table;
use crate::error::{Error, Result};
use crate::hypergraph::{from_mask, Hypergraph};

pub const TRANSFORM_MAX_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionVariant {
    /// edges `A` with `cd_s(H[A]) > (s-1)C`
    Defect,
    /// edges `A` with `|A| - alt_s(H[A]) > (s-1)C`
    Alternation,
}

pub fn transform_t(h: &Hypergraph, c: usize, s: usize, variant: ReductionVariant) -> Result<Hypergraph> {
    transform_t_with(h, c, s, variant, &AltCaps::default())
}

pub fn transform_t_with(
    h: &Hypergraph,
    c: usize,
    s: usize,
    variant: ReductionVariant,
    caps: &AltCaps,
) -> Result<Hypergraph> {
    if c < 1 || s < 2 {
        return Err(Error::invalid(format!("need C >= 1 and s >= 2, got C={c} s={s}")));
    }
    if h.n() > TRANSFORM_MAX_N {
        return Err(Error::cap(
            "vertex count for the reduction hypergraph",
            h.n() as u128,
            TRANSFORM_MAX_N as u128,
        ));
    }
    let threshold = (s - 1) * c;
    let size = 1u64 << h.n();
    let mut edges: Vec<Vec<usize>> = match variant {
        ReductionVariant::Defect => {
            let table = defect_table(h, s)?;
            (0..size)
                .filter(|&mask| table[mask as usize] > threshold)
                .map(from_mask)
                .collect()
        }
        ReductionVariant::Alternation => {
            h.require_no_empty_edge()?;
            let mut edges = Vec::new();
            for mask in 0..size {
                let sub = h.induced_mask(mask);
                let alt = alternation_number_with(&sub, s, caps)?.value;
                if sub.n() - alt > threshold {
                    edges.push(from_mask(mask));
                }
            }
            edges
        }
    };
    edges.sort();
    Hypergraph::new(h.n(), edges)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub variant: ReductionVariant,
    pub r: usize,
    pub s: usize,
    pub c: usize,
    /// `cd_{rs}(H)` or `alt_r(T̃)`
    pub lhs: usize,
    /// `r(s-1)C + cd_r(T)` or `r(s-1)C + alt_{rs}(H)`
    pub rhs: usize,
    /// `cd_r(T)` or `alt_{rs}(H)`
    pub measured: usize,
    pub reduction_edges: usize,
    pub holds: bool,
}

pub fn verify_reduction(
    h: &Hypergraph,
    r: usize,
    s: usize,
    c: usize,
    variant: ReductionVariant,
) -> Result<ReductionCheck> {
    verify_reduction_with(h, r, s, c, variant, &AltCaps::default())
}

pub fn verify_reduction_with(
    h: &Hypergraph,
    r: usize,
    s: usize,
    c: usize,
    variant: ReductionVariant,
    caps: &AltCaps,
) -> Result<ReductionCheck> {
    if r < 2 {
        return Err(Error::invalid(format!("need r >= 2, got {r}")));
    }
    let t = transform_t_with(h, c, s, variant, caps)?;
    let full = (1usize << h.n()) - 1;
    let offset = r * (s - 1) * c;
    let (lhs, measured) = match variant {
        ReductionVariant::Defect => (
            defect_table(h, r * s)?[full],
            defect_table(&t, r)?[full],
        ),
        ReductionVariant::Alternation => (
            alternation_number_with(&t, r, caps)?.value,
            alternation_number_with(h, r * s, caps)?.value,
        ),
    };
    let rhs = offset + measured;
    Ok(ReductionCheck {
        variant,
        r,
        s,
        c,
        lhs,
        rhs,
        measured,
        reduction_edges: t.num_edges(),
        holds: lhs <= rhs,
    })
}
