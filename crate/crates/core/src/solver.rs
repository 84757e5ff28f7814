//! Exact k-colorability and chromatic numbers by backtracking.
//!
//! Hypergraphs and product spaces share one engine. Every constraint is a
//! box `e_1 x ... x e_t` of product vertices, violated by color `q` when the
//! `q`-colored members of the box project onto every `e_l`. A plain
//! hypergraph edge is the `t = 1` case, where that means monochromatic.
//!
//! The search assigns vertices one at a time, keeps color symmetry broken
//! (a vertex may open at most one new color), detects violations as soon as
//! they appear and forward-checks: a color that would complete a violation
//! for an unassigned vertex is removed from its domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Coloring, Hypergraph};
use crate::product::{full_mask, ProductSpace};

/// Something the solver can color: a hypergraph or a product space.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Hypergraph(&'a Hypergraph),
    Product(&'a ProductSpace),
}

impl<'a> From<&'a Hypergraph> for Target<'a> {
    fn from(h: &'a Hypergraph) -> Self {
        Target::Hypergraph(h)
    }
}

impl<'a> From<&'a ProductSpace> for Target<'a> {
    fn from(p: &'a ProductSpace) -> Self {
        Target::Product(p)
    }
}

impl Target<'_> {
    pub fn num_vertices(&self) -> usize {
        match self {
            Target::Hypergraph(h) => h.n(),
            Target::Product(p) => p.num_vertices(),
        }
    }

    pub fn is_proper(&self, c: &Coloring) -> bool {
        match self {
            Target::Hypergraph(h) => h.is_proper(c),
            Target::Product(p) => p.product_is_proper(c),
        }
    }
}

/// Vertex selection rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexOrder {
    /// Fixed order: degree descending, ties by index.
    Static,
    /// Most-constrained vertex first (fewest remaining colors), ties by the
    /// static order.
    #[default]
    Saturation,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub order: VertexOrder,
    /// Abort after this many search nodes (`None` = unlimited).
    pub node_limit: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    /// False when the search stopped at the node limit.
    pub completed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Colorable(Coloring, SearchStats),
    NotColorable(SearchStats),
    /// Node limit reached before an answer.
    Unknown(SearchStats),
}

impl Decision {
    pub fn coloring(&self) -> Option<&Coloring> {
        match self {
            Decision::Colorable(c, _) => Some(c),
            _ => None,
        }
    }

    pub fn is_colorable(&self) -> bool {
        matches!(self, Decision::Colorable(..))
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            Decision::Colorable(_, s) | Decision::NotColorable(s) | Decision::Unknown(s) => *s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chi {
    Value(usize),
    /// Some edge of size at most one makes every coloring improper.
    Uncolorable,
}

impl Chi {
    pub fn value(self) -> Option<usize> {
        match self {
            Chi::Value(v) => Some(v),
            Chi::Uncolorable => None,
        }
    }
}

/// Exhaustive refutation of `colors` colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub colors: usize,
    pub nodes: u64,
    pub completed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticResult {
    pub chi: Chi,
    pub witness: Option<Coloring>,
    /// Present when `chi >= 2`: the search that ruled out `chi - 1` colors.
    pub refutation: Option<Refutation>,
    pub total_nodes: u64,
}

pub fn is_k_colorable<'a>(target: impl Into<Target<'a>>, k: usize) -> Result<Decision> {
    is_k_colorable_with(target, k, &SolverConfig::default())
}

pub fn is_k_colorable_with<'a>(
    target: impl Into<Target<'a>>,
    k: usize,
    config: &SolverConfig,
) -> Result<Decision> {
    if k < 1 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let problem = Problem::build(target.into())?;
    Ok(problem.decide(k, config))
}

pub fn chromatic_number<'a>(target: impl Into<Target<'a>>) -> Result<ChromaticResult> {
    chromatic_number_with(target, &SolverConfig::default())
}

/// Ascends `k = 1, 2, ...` until the target is `k`-colorable.
pub fn chromatic_number_with<'a>(
    target: impl Into<Target<'a>>,
    config: &SolverConfig,
) -> Result<ChromaticResult> {
    let target = target.into();
    let problem = Problem::build(target)?;
    if problem.uncolorable {
        return Ok(ChromaticResult {
            chi: Chi::Uncolorable,
            witness: None,
            refutation: None,
            total_nodes: 0,
        });
    }
    if problem.n == 0 {
        return Ok(ChromaticResult {
            chi: Chi::Value(0),
            witness: Some(Coloring::new(Vec::new(), 0)?),
            refutation: None,
            total_nodes: 0,
        });
    }
    let mut total = 0;
    let mut refutation = None;
    for k in 1..=problem.n {
        match problem.decide(k, config) {
            Decision::Colorable(c, s) => {
                total += s.nodes;
                debug_assert!(target.is_proper(&c));
                return Ok(ChromaticResult {
                    chi: Chi::Value(k),
                    witness: Some(c),
                    refutation,
                    total_nodes: total,
                });
            }
            Decision::NotColorable(s) => {
                total += s.nodes;
                refutation = Some(Refutation {
                    colors: k,
                    nodes: s.nodes,
                    completed: s.completed,
                });
            }
            Decision::Unknown(s) => {
                return Err(Error::CapExceeded {
                    what: format!("search nodes while testing {k} colors"),
                    size: s.nodes as u128,
                    cap: config.node_limit.unwrap_or(u64::MAX) as u128,
                    hint: String::new(),
                })
            }
        }
    }
    unreachable!("n colors always suffice when no edge has size <= 1")
}

/// One constraint box.
struct Constraint {
    /// Full coverage mask per factor.
    full: Vec<u64>,
    members: Vec<u32>,
    /// `coords[i * t + l]` is member `i`'s position inside factor edge `l`.
    coords: Vec<u8>,
}

struct Problem {
    n: usize,
    uncolorable: bool,
    constraints: Vec<Constraint>,
    /// `(constraint, member position)` pairs per vertex.
    incidence: Vec<Vec<(u32, u32)>>,
    static_order: Vec<usize>,
    /// Position of each vertex in `static_order`.
    rank: Vec<usize>,
}

impl Problem {
    fn build(target: Target<'_>) -> Result<Self> {
        let mut constraints = Vec::new();
        let n;
        let mut uncolorable = false;
        match target {
            Target::Hypergraph(h) => {
                n = h.n();
                for e in h.minimal_edges().edges() {
                    if e.len() <= 1 {
                        uncolorable = true;
                        continue;
                    }
                    if e.len() > 64 {
                        return Err(Error::invalid("edges of more than 64 vertices"));
                    }
                    constraints.push(Constraint {
                        full: vec![full_mask(e.len())],
                        members: e.iter().map(|&v| (v - 1) as u32).collect(),
                        coords: (0..e.len()).map(|i| i as u8).collect(),
                    });
                }
            }
            Target::Product(p) => {
                n = p.num_vertices();
                for tuple in p.edge_tuples() {
                    let bx = p.edge_box(&tuple);
                    if bx.members.is_empty() {
                        if bx.dims.iter().all(|&d| d == 0) {
                            uncolorable = true;
                        }
                        continue;
                    }
                    // a single covering vertex means every color covers
                    if bx.dims.iter().all(|&d| d == 1) {
                        uncolorable = true;
                        continue;
                    }
                    constraints.push(Constraint {
                        full: bx.dims.iter().map(|&d| full_mask(d)).collect(),
                        members: bx.members.iter().map(|&m| m as u32).collect(),
                        coords: bx.coords.iter().flatten().map(|&c| c as u8).collect(),
                    });
                }
            }
        }
        let mut incidence = vec![Vec::new(); n];
        for (ci, c) in constraints.iter().enumerate() {
            for (pos, &m) in c.members.iter().enumerate() {
                incidence[m as usize].push((ci as u32, pos as u32));
            }
        }
        let mut static_order: Vec<usize> = (0..n).collect();
        static_order.sort_by_key(|&v| (std::cmp::Reverse(incidence[v].len()), v));
        let mut rank = vec![0; n];
        for (i, &v) in static_order.iter().enumerate() {
            rank[v] = i;
        }
        Ok(Problem {
            n,
            uncolorable,
            constraints,
            incidence,
            static_order,
            rank,
        })
    }

    fn decide(&self, k: usize, config: &SolverConfig) -> Decision {
        if self.uncolorable {
            return Decision::NotColorable(SearchStats {
                nodes: 0,
                completed: true,
            });
        }
        let mut search = Search::new(self, k, config);
        let found = search.run();
        let stats = SearchStats {
            nodes: search.nodes,
            completed: !search.aborted,
        };
        if found {
            let colors = search.color.iter().map(|&q| q as usize + 1).collect();
            Decision::Colorable(Coloring::new(colors, k).expect("colors in range"), stats)
        } else if search.aborted {
            Decision::Unknown(stats)
        } else {
            Decision::NotColorable(stats)
        }
    }
}

const UNASSIGNED: u16 = u16::MAX;

struct Search<'p> {
    p: &'p Problem,
    k: usize,
    order: VertexOrder,
    node_limit: u64,
    color: Vec<u16>,
    /// `forbid[v * k + q]` counts reasons why `q` is unavailable for `v`.
    forbid: Vec<u32>,
    /// Number of distinct forbidden colors per vertex.
    blocked: Vec<u32>,
    trail: Vec<u32>,
    assigned: usize,
    nodes: u64,
    aborted: bool,
    cov: Vec<u64>,
}

impl<'p> Search<'p> {
    fn new(p: &'p Problem, k: usize, config: &SolverConfig) -> Self {
        let t_max = p.constraints.iter().map(|c| c.full.len()).max().unwrap_or(1);
        Search {
            p,
            k,
            order: config.order,
            node_limit: config.node_limit.unwrap_or(u64::MAX),
            color: vec![UNASSIGNED; p.n],
            forbid: vec![0; p.n * k],
            blocked: vec![0; p.n],
            trail: Vec::new(),
            assigned: 0,
            nodes: 0,
            aborted: false,
            cov: vec![0; t_max],
        }
    }

    fn run(&mut self) -> bool {
        self.dfs(0)
    }

    fn pick(&self) -> usize {
        match self.order {
            VertexOrder::Static => self.p.static_order[self.assigned],
            VertexOrder::Saturation => {
                let mut best = usize::MAX;
                let mut best_key = (0u32, usize::MAX);
                for v in 0..self.p.n {
                    if self.color[v] != UNASSIGNED {
                        continue;
                    }
                    let key = (self.blocked[v], usize::MAX - self.p.rank[v]);
                    if best == usize::MAX || key > best_key {
                        best = v;
                        best_key = key;
                    }
                }
                best
            }
        }
    }

    fn dfs(&mut self, max_used: usize) -> bool {
        if self.assigned == self.p.n {
            return true;
        }
        let v = self.pick();
        let limit = (max_used + 1).min(self.k);
        for q in 0..limit {
            if self.forbid[v * self.k + q] > 0 {
                continue;
            }
            if self.nodes >= self.node_limit {
                self.aborted = true;
                return false;
            }
            self.nodes += 1;
            let mark = self.trail.len();
            self.color[v] = q as u16;
            self.assigned += 1;
            if self.propagate(v, q) && self.dfs(max_used.max(q + 1)) {
                return true;
            }
            self.undo(mark);
            self.color[v] = UNASSIGNED;
            self.assigned -= 1;
            if self.aborted {
                return false;
            }
        }
        false
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let idx = self.trail.pop().unwrap() as usize;
            self.forbid[idx] -= 1;
            if self.forbid[idx] == 0 {
                self.blocked[idx / self.k] -= 1;
            }
        }
    }

    /// Applies `v := q`; false on a violation or a domain wipeout.
    fn propagate(&mut self, v: usize, q: usize) -> bool {
        let p = self.p;
        let qq = q as u16;
        for &(ci, _) in &p.incidence[v] {
            let c = &p.constraints[ci as usize];
            let t = c.full.len();
            let cov = &mut self.cov[..t];
            cov.fill(0);
            for (i, &m) in c.members.iter().enumerate() {
                if self.color[m as usize] == qq {
                    for l in 0..t {
                        cov[l] |= 1 << c.coords[i * t + l];
                    }
                }
            }
            if cov.iter().zip(&c.full).all(|(a, b)| a == b) {
                return false;
            }
            for (i, &m) in c.members.iter().enumerate() {
                let u = m as usize;
                if self.color[u] != UNASSIGNED {
                    continue;
                }
                let completes = (0..t).all(|l| cov[l] | 1 << c.coords[i * t + l] == c.full[l]);
                if completes {
                    let idx = u * self.k + q;
                    self.forbid[idx] += 1;
                    self.trail.push(idx as u32);
                    if self.forbid[idx] == 1 {
                        self.blocked[u] += 1;
                        if self.blocked[u] as usize == self.k {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// `⌈(n - r(k-1)) / (r-1)⌉`, the chromatic number of `KG^r(n,k)` for
/// `n >= rk`.
pub fn afl_formula(n: usize, k: usize, r: usize) -> Result<usize> {
    if r < 2 || k < 1 || n < r * k {
        return Err(Error::invalid(format!(
            "need r >= 2, k >= 1 and n >= rk, got n={n} k={k} r={r}"
        )));
    }
    Ok((n - r * (k - 1)).div_ceil(r - 1))
}

/// The standard optimal coloring of `KG^r(n,k)` (vertices in the order of
/// `usual_kneser`): a set whose minimum lies in the `i`-th block of `r - 1`
/// consecutive elements gets color `i`, and everything past the last full
/// block gets the top color.
pub fn afl_coloring(n: usize, k: usize, r: usize) -> Result<Coloring> {
    let chi = afl_formula(n, k, r)?;
    let colors = crate::generators::ksubsets(n, k)
        .iter()
        .map(|s| s[0].div_ceil(r - 1).min(chi))
        .collect();
    Coloring::new(colors, chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_ksubsets, kneser, usual_kneser};

    /// Breadth-first bipartiteness test for 2-uniform graphs.
    fn is_bipartite(g: &Hypergraph) -> bool {
        let n = g.n();
        let mut adj = vec![Vec::new(); n + 1];
        for e in g.edges() {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        let mut side = vec![None; n + 1];
        for s in 1..=n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!side[u].unwrap());
                            queue.push_back(w);
                        }
                        Some(x) if x == side[u].unwrap() => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    #[test]
    fn matching_graph_is_two_colorable() {
        let g = usual_kneser(4, 2, 2).unwrap().hypergraph;
        let d = is_k_colorable(&g, 2).unwrap();
        assert!(g.is_proper(d.coloring().unwrap()));
    }

    #[test]
    fn petersen_decisions() {
        let g = usual_kneser(5, 2, 2).unwrap().hypergraph;
        assert!(!is_bipartite(&g));
        for order in [VertexOrder::Static, VertexOrder::Saturation] {
            let cfg = SolverConfig {
                order,
                node_limit: None,
            };
            let no = is_k_colorable_with(&g, 2, &cfg).unwrap();
            assert!(matches!(no, Decision::NotColorable(s) if s.completed));
            let yes = is_k_colorable_with(&g, 3, &cfg).unwrap();
            assert!(g.is_proper(yes.coloring().unwrap()));
        }
    }

    #[test]
    fn rejects_zero_colors() {
        let g = Hypergraph::edgeless(3);
        assert!(is_k_colorable(&g, 0).is_err());
    }

    #[test]
    fn chromatic_number_examples() {
        let r = chromatic_number(&usual_kneser(5, 2, 2).unwrap().hypergraph).unwrap();
        assert_eq!(r.chi, Chi::Value(3));
        assert_eq!(r.refutation.unwrap().colors, 2);
        assert!(r.refutation.unwrap().completed);
        let r = chromatic_number(&usual_kneser(9, 2, 3).unwrap().hypergraph).unwrap();
        assert_eq!(r.chi, Chi::Value(3));
        assert_eq!(chromatic_number(&Hypergraph::edgeless(4)).unwrap().chi, Chi::Value(1));
        assert_eq!(chromatic_number(&Hypergraph::edgeless(0)).unwrap().chi, Chi::Value(0));
    }

    #[test]
    fn singleton_edges_are_uncolorable() {
        let g = Hypergraph::new(3, vec![vec![1, 2], vec![3]]).unwrap();
        let r = chromatic_number(&g).unwrap();
        assert_eq!(r.chi, Chi::Uncolorable);
        assert!(r.witness.is_none());
        assert!(!is_k_colorable(&g, 3).unwrap().is_colorable());
        let e = Hypergraph::new(2, vec![Vec::<usize>::new()]).unwrap();
        assert_eq!(chromatic_number(&e).unwrap().chi, Chi::Uncolorable);
    }

    #[test]
    fn three_uniform_hyperedges() {
        // Fano plane: not 2-colorable, 3-colorable
        let fano = Hypergraph::new(
            7,
            vec![
                vec![1, 2, 3],
                vec![1, 4, 5],
                vec![1, 6, 7],
                vec![2, 4, 6],
                vec![2, 5, 7],
                vec![3, 4, 7],
                vec![3, 5, 6],
            ],
        )
        .unwrap();
        assert_eq!(chromatic_number(&fano).unwrap().chi, Chi::Value(3));
    }

    #[test]
    fn product_of_edges() {
        let k2 = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        let p = ProductSpace::new(vec![k2.clone(), k2]).unwrap();
        let r = chromatic_number(&p).unwrap();
        assert_eq!(r.chi, Chi::Value(2));
        assert!(p.product_is_proper(r.witness.as_ref().unwrap()));
    }

    #[test]
    fn product_with_singleton_edges_is_uncolorable() {
        let one = Hypergraph::new(1, vec![vec![1]]).unwrap();
        let p = ProductSpace::new(vec![one.clone(), one]).unwrap();
        assert_eq!(chromatic_number(&p).unwrap().chi, Chi::Uncolorable);
    }

    #[test]
    fn node_limit_reports_unknown() {
        let g = kneser(&complete_ksubsets(7, 2).unwrap(), 2).unwrap().hypergraph;
        let cfg = SolverConfig {
            order: VertexOrder::Static,
            node_limit: Some(10),
        };
        assert!(matches!(
            is_k_colorable_with(&g, 4, &cfg).unwrap(),
            Decision::Unknown(s) if !s.completed
        ));
        assert!(chromatic_number_with(&g, &cfg).is_err());
    }

    #[test]
    fn afl_examples() {
        assert_eq!(afl_formula(5, 2, 2).unwrap(), 3);
        assert_eq!(afl_formula(9, 2, 3).unwrap(), 3);
        for r in 2..6 {
            for k in 1..4 {
                assert_eq!(afl_formula(r * k, k, r).unwrap(), 2);
            }
        }
        assert!(afl_formula(5, 3, 2).is_err());
        assert!(afl_formula(5, 2, 1).is_err());
        assert!(afl_formula(5, 0, 2).is_err());
    }

    #[test]
    fn afl_coloring_is_proper_and_tight() {
        for (n, k, r) in [(4, 2, 2), (5, 2, 2), (7, 3, 2), (6, 2, 3), (9, 2, 3), (8, 2, 4)] {
            let kg = crate::generators::usual_kneser(n, k, r).unwrap().hypergraph;
            let c = afl_coloring(n, k, r).unwrap();
            assert!(kg.is_proper(&c), "({n},{k},{r})");
            assert_eq!(c.colors_used(), afl_formula(n, k, r).unwrap());
        }
    }
}
