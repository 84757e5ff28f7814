//! The equivariant sign of a tuple of subsets of `Z_p`, and the total order
//! on edge tuples used to pick second-case labels.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::hypergraph::Coloring;

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub(crate) fn require_prime(p: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > 31 {
        return Err(Error::invalid(format!("prime {p} is above the supported 31")));
    }
    Ok(())
}

/// `ω · B` for `B ⊆ Z_p` given as a bitmask (bit `j` is `ω^j`).
pub fn rotate_set(p: usize, b: u32) -> u32 {
    let full = (1u32 << p) - 1;
    ((b << 1) | (b >> (p - 1))) & full
}

fn encode(b: &[u32]) -> Vec<Vec<u32>> {
    b.iter()
        .map(|&m| (0..32).filter(|j| m >> j & 1 == 1).collect())
        .collect()
}

/// `ε(B_1, ..., B_t)`: the exponent `i` such that `B = ω^i · B*`, where `B*`
/// is the lexicographically least member of the orbit of `B` (each `B_l`
/// encoded as its ascending exponent list, tuples compared componentwise).
pub fn sign_eps(p: usize, b: &[u32]) -> Result<u8> {
    require_prime(p)?;
    let full = (1u32 << p) - 1;
    if b.iter().any(|&m| m & !full != 0) {
        return Err(Error::invalid(format!("subset mask outside Z_{p}")));
    }
    if b.iter().all(|&m| m == 0 || m == full) {
        return Err(Error::invalid(
            "the sign needs some B_l outside {empty set, Z_p}",
        ));
    }
    Ok(sign_eps_unchecked(p, b))
}

pub(crate) fn sign_eps_unchecked(p: usize, b: &[u32]) -> u8 {
    let mut cur = b.to_vec();
    let mut best = (encode(&cur), 0usize);
    for i in 1..p {
        for m in cur.iter_mut() {
            *m = rotate_set(p, *m);
        }
        let enc = encode(&cur);
        if enc < best.0 {
            best = (enc, i);
        }
    }
    // ω^i · B = B*, so B = ω^(p - i) · B*
    ((p - best.1) % p) as u8
}

/// `⪯` on `E_1 x ... x E_t`: color ascending, then lexicographic on the
/// edge-index tuples. `dims[l]` is `|E_l|` and `c` colors the row-major
/// flattening of the tuples.
pub fn tuple_order_cmp(c: &Coloring, dims: &[usize], s: &[usize], t: &[usize]) -> Ordering {
    let flat = |tuple: &[usize]| tuple.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i);
    c.at(flat(s))
        .cmp(&c.at(flat(t)))
        .then_with(|| s.cmp(t))
}
