//! Alternation numbers.
//!
//! `alt_π(x)` is the length of a longest subsequence of `x_{π(1)}, ...,
//! x_{π(n)}` that uses only nonzero entries and has no two equal consecutive
//! terms. `alt_r(H)` minimizes, over all permutations `π`, the largest
//! `alt_π(x)` among vectors `x` whose class supports `supp_j(x)` are all
//! edge-free.

use serde::{Deserialize, Serialize};

use crate::defect::independence_table;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::signed::SignedVector;

/// A permutation of `[n]`, stored as the sequence `π(1), ..., π(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut seen = vec![false; n + 1];
        for &v in &sequence {
            if v == 0 || v > n || seen[v] {
                return Err(Error::invalid(format!("{sequence:?} is not a permutation of [{n}]")));
            }
            seen[v] = true;
        }
        Ok(Permutation(sequence))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.0
    }

    /// Advances to the lexicographically next permutation.
    fn advance(&mut self) -> bool {
        let a = &mut self.0;
        if a.len() < 2 {
            return false;
        }
        let mut i = a.len() - 1;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = a.len() - 1;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        true
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// Size limits for the exhaustive alternation searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AltCaps {
    /// Largest `n` for the minimum over all `n!` permutations.
    pub exact_max_n: usize,
    /// Largest `n` for the maximum at one permutation.
    pub per_perm_max_n: usize,
}

impl Default for AltCaps {
    fn default() -> Self {
        AltCaps {
            exact_max_n: 8,
            per_perm_max_n: 10,
        }
    }
}

/// Greedy scan: count a term whenever it differs from the last counted one.
pub fn alt_under_perm(x: &SignedVector, pi: &Permutation) -> usize {
    assert_eq!(x.len(), pi.len(), "vector and permutation lengths differ");
    let mut last = None;
    let mut count = 0;
    for &i in pi.sequence() {
        if let Some(v) = x.entries()[i - 1] {
            if last != Some(v) {
                count += 1;
                last = Some(v);
            }
        }
    }
    count
}

/// `max alt_π(x)` over the vectors whose class supports are all edge-free.
pub fn max_alt_for_perm(h: &Hypergraph, r: usize, pi: &Permutation) -> Result<usize> {
    max_alt_for_perm_with(h, r, pi, &AltCaps::default())
}

pub fn max_alt_for_perm_with(
    h: &Hypergraph,
    r: usize,
    pi: &Permutation,
    caps: &AltCaps,
) -> Result<usize> {
    check_rank(r)?;
    check_perm(h, pi)?;
    if h.n() > caps.per_perm_max_n {
        return Err(Error::cap(
            "vertex count for a per-permutation alternation search",
            h.n() as u128,
            caps.per_perm_max_n as u128,
        ));
    }
    let indep = independence_table(h)?;
    Ok(AltSearch::new(&indep, pi, r, Admissible::AllClasses).run(usize::MAX))
}

/// The minimizing value together with the lexicographically first
/// permutation that attains it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltNumber {
    pub value: usize,
    pub permutation: Permutation,
}

pub fn alternation_number(h: &Hypergraph, r: usize) -> Result<AltNumber> {
    alternation_number_with(h, r, &AltCaps::default())
}

/// `alt_r(H)`: minimum over permutations of [`max_alt_for_perm`]. A
/// permutation's inner search is abandoned once it reaches the best minimum
/// found so far.
pub fn alternation_number_with(h: &Hypergraph, r: usize, caps: &AltCaps) -> Result<AltNumber> {
    check_rank(r)?;
    minimize_over_perms(h, caps, |indep, pi, stop_at| {
        AltSearch::new(indep, pi, r, Admissible::AllClasses).run(stop_at)
    })
}

/// Which permutations [`strong_alt2`] ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermMode {
    Exact,
    Fixed(Permutation),
}

/// `salt_2(H)`: like `alt_2` but only one of `x^+`, `x^-` needs to be
/// edge-free.
pub fn strong_alt2(h: &Hypergraph, mode: &PermMode) -> Result<usize> {
    strong_alt2_with(h, mode, &AltCaps::default())
}

pub fn strong_alt2_with(h: &Hypergraph, mode: &PermMode, caps: &AltCaps) -> Result<usize> {
    match mode {
        PermMode::Fixed(pi) => {
            check_perm(h, pi)?;
            if h.n() > caps.per_perm_max_n {
                return Err(Error::cap(
                    "vertex count for a per-permutation alternation search",
                    h.n() as u128,
                    caps.per_perm_max_n as u128,
                ));
            }
            let indep = independence_table(h)?;
            Ok(AltSearch::new(&indep, pi, 2, Admissible::SomeClass).run(usize::MAX))
        }
        PermMode::Exact => Ok(minimize_over_perms(h, caps, |indep, pi, stop_at| {
            AltSearch::new(indep, pi, 2, Admissible::SomeClass).run(stop_at)
        })?
        .value),
    }
}

fn check_rank(r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::invalid(format!("alternation rank must be >= 2, got {r}")));
    }
    Ok(())
}

fn check_perm(h: &Hypergraph, pi: &Permutation) -> Result<()> {
    h.require_no_empty_edge()?;
    if pi.len() != h.n() {
        return Err(Error::invalid(format!(
            "permutation of length {} for a hypergraph on {} vertices",
            pi.len(),
            h.n()
        )));
    }
    Ok(())
}

/// Lexicographic sweep over permutations. A permutation and its reversal
/// give the same value, so only those with `π(1) < π(n)` are searched; that
/// member of each pair is also the lexicographically smaller one.
fn minimize_over_perms(
    h: &Hypergraph,
    caps: &AltCaps,
    inner: impl Fn(&[bool], &Permutation, usize) -> usize,
) -> Result<AltNumber> {
    let n = h.n();
    if n > caps.exact_max_n {
        return Err(Error::CapExceeded {
            what: "vertex count for the exact alternation number".into(),
            size: n as u128,
            cap: caps.exact_max_n as u128,
            hint: "; max_alt_for_perm at a fixed permutation gives an upper bound on the \
                   alternation number, hence a valid (possibly weaker) chromatic lower bound"
                .into(),
        });
    }
    h.require_no_empty_edge()?;
    let indep = independence_table(h)?;
    let mut pi = Permutation::identity(n);
    if h.has_full_symmetry() {
        let value = inner(&indep, &pi, usize::MAX);
        return Ok(AltNumber {
            value,
            permutation: pi,
        });
    }
    let mut best: Option<(usize, Permutation)> = None;
    loop {
        let s = pi.sequence();
        if n < 2 || s[0] < s[n - 1] {
            let stop_at = best.as_ref().map_or(usize::MAX, |b| b.0);
            let value = inner(&indep, &pi, stop_at);
            if value < stop_at {
                best = Some((value, pi.clone()));
                if value == 0 {
                    break;
                }
            }
        }
        if !pi.advance() {
            break;
        }
    }
    let (value, permutation) = best.expect("at least one permutation");
    Ok(AltNumber { value, permutation })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Admissible {
    /// Every class support is edge-free.
    AllClasses,
    /// At least one of the two class supports is edge-free (`r = 2`).
    SomeClass,
}

/// Depth-first search over positions in `π` order.
///
/// A position is either left zero or given a class different from the last
/// counted one; repeating the last class never lengthens the alternation and
/// only shrinks the admissible region. Classes are interchangeable, so a
/// new class is always the lowest unused one.
struct AltSearch<'a> {
    indep: &'a [bool],
    order: Vec<usize>,
    r: usize,
    rule: Admissible,
    masks: Vec<usize>,
    best: usize,
    stop_at: usize,
}

impl<'a> AltSearch<'a> {
    fn new(indep: &'a [bool], pi: &Permutation, r: usize, rule: Admissible) -> Self {
        AltSearch {
            indep,
            order: pi.sequence().iter().map(|v| v - 1).collect(),
            r,
            rule,
            masks: vec![0; r],
            best: 0,
            stop_at: usize::MAX,
        }
    }

    /// The maximum, or any value `>= stop_at` once one is reached.
    fn run(mut self, stop_at: usize) -> usize {
        self.stop_at = stop_at;
        if self.admissible() {
            self.dfs(0, None, 0, 0);
        }
        self.best
    }

    fn admissible(&self) -> bool {
        match self.rule {
            Admissible::AllClasses => self.masks.iter().all(|&m| self.indep[m]),
            Admissible::SomeClass => self.masks.iter().any(|&m| self.indep[m]),
        }
    }

    fn dfs(&mut self, pos: usize, last: Option<usize>, used: usize, cur: usize) {
        if cur > self.best {
            self.best = cur;
        }
        if self.best >= self.stop_at || pos == self.order.len() {
            return;
        }
        if cur + (self.order.len() - pos) <= self.best {
            return;
        }
        let bit = 1 << self.order[pos];
        for j in 0..(used + 1).min(self.r) {
            if Some(j) == last {
                continue;
            }
            self.masks[j] |= bit;
            if self.admissible() {
                self.dfs(pos + 1, Some(j), used.max(j + 1), cur + 1);
            }
            self.masks[j] &= !bit;
            if self.best >= self.stop_at {
                return;
            }
        }
        self.dfs(pos + 1, last, used, cur);
    }
}
