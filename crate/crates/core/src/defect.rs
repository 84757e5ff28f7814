//! r-colorability defect: the least number of vertices whose removal leaves
//! an r-colorable induced subhypergraph.

use crate::error::{Error, Result};
use crate::generators::ksubsets;
use crate::hypergraph::Hypergraph;
use crate::solver::is_k_colorable;

/// Largest vertex count for the all-subsets tables.
pub const TABLE_MAX_N: usize = 20;

/// `cd_r(H)`, searching removal sets by ascending size and, within a size,
/// in lexicographic order.
pub fn colorability_defect(h: &Hypergraph, r: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::invalid(format!("defect rank must be >= 2, got {r}")));
    }
    h.require_no_empty_edge()?;
    let n = h.n();
    for size in 0..=n {
        for removed in ksubsets(n, size) {
            let keep: Vec<usize> = h.vertices().filter(|v| !removed.contains(v)).collect();
            let sub = h.induced(&keep)?.hypergraph;
            if is_k_colorable(&sub, r)?.is_colorable() {
                return Ok(size);
            }
        }
    }
    unreachable!("the empty induced subhypergraph is colorable")
}

/// `cd_r([n], C([n], k)) = max(0, n - r(k - 1))`.
pub fn usual_defect_formula(n: usize, k: usize, r: usize) -> Result<usize> {
    if r < 2 || k < 1 || k > n {
        return Err(Error::invalid(format!(
            "need r >= 2 and 1 <= k <= n, got n={n} k={k} r={r}"
        )));
    }
    Ok(n.saturating_sub(r * (k - 1)))
}

/// `indep[mask]`: the vertex set `mask` contains no edge.
pub(crate) fn independence_table(h: &Hypergraph) -> Result<Vec<bool>> {
    if h.n() > TABLE_MAX_N {
        return Err(Error::cap(
            "vertex count for subset tables",
            h.n() as u128,
            TABLE_MAX_N as u128,
        ));
    }
    let masks = h.minimal_edges().edge_masks()?;
    let size = 1usize << h.n();
    let mut indep = vec![true; size];
    for &e in &masks {
        if e == 0 {
            indep.fill(false);
            break;
        }
    }
    for mask in 1..size {
        if !indep[mask] {
            continue;
        }
        let high = 63 - (mask as u64).leading_zeros() as usize;
        let rest = mask & !(1 << high);
        if !indep[rest] {
            indep[mask] = false;
            continue;
        }
        let m = mask as u64;
        if masks.iter().any(|&e| e >> high & 1 == 1 && e & m == e) {
            indep[mask] = false;
        }
    }
    Ok(indep)
}

/// `colorable[mask]`: `H[mask]` is `r`-colorable.
pub(crate) fn colorable_table(indep: &[bool], r: usize) -> Vec<bool> {
    let mut col = indep.to_vec();
    for _ in 1..r {
        let prev = col.clone();
        for mask in 1..col.len() {
            if col[mask] {
                continue;
            }
            // the class holding the lowest vertex
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let mut sub = rest;
            loop {
                let class = sub | low;
                if indep[class] && prev[mask ^ class] {
                    col[mask] = true;
                    break;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
    }
    col
}

/// `cd_r(H[A])` for every vertex set `A`, indexed by bitmask.
pub fn defect_table(h: &Hypergraph, r: usize) -> Result<Vec<usize>> {
    if r < 2 {
        return Err(Error::invalid(format!("defect rank must be >= 2, got {r}")));
    }
    h.require_no_empty_edge()?;
    let indep = independence_table(h)?;
    let col = colorable_table(&indep, r);
    // largest colorable subset of each mask
    let mut best = vec![0usize; col.len()];
    for mask in 0..col.len() {
        best[mask] = if col[mask] {
            mask.count_ones() as usize
        } else {
            (0..h.n())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| best[mask & !(1 << i)])
                .max()
                .unwrap_or(0)
        };
    }
    Ok(best
        .iter()
        .enumerate()
        .map(|(mask, &b)| mask.count_ones() as usize - b)
        .collect())
}
