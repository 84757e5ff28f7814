//! The labeling `λ(x) = (s(x), v(x))` built from a proper coloring of a
//! product of Kneser hypergraphs, evaluated on demand.

use dashmap::DashMap;

use super::sign::{require_prime, sign_eps_unchecked};
use super::{Label, TuckerInstance};
use crate::alternation::{alt_under_perm, max_alt_for_perm, Permutation};
use crate::defect::{defect_table, independence_table, TABLE_MAX_N};
use crate::error::{Error, Result};
use crate::generators::kneser;
use crate::hypergraph::{to_mask, Coloring, Hypergraph};
use crate::product::ProductSpace;
use crate::signed::SignedVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaVariant {
    Defect,
    /// One permutation per factor; any choice gives a valid (possibly
    /// weaker) instance.
    Alternation { permutations: Vec<Permutation> },
}

#[derive(Debug)]
pub struct LambdaContext {
    factors: Vec<Hypergraph>,
    p: usize,
    coloring: Coloring,
    variant: LambdaVariant,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    edge_masks: Vec<Vec<u64>>,
    indep: Vec<Vec<bool>>,
    // defect variant: largest edge-free subset of each mask
    max_indep: Vec<Vec<u8>>,
    factor_values: Vec<usize>,
    alpha: usize,
    m: usize,
}

impl LambdaContext {
    /// `coloring` colors the row-major flattening of the product of
    /// `KG^p(H_l)`, i.e. tuples of edge indices.
    pub fn new(
        factors: Vec<Hypergraph>,
        p: usize,
        coloring: Coloring,
        variant: LambdaVariant,
    ) -> Result<Self> {
        require_prime(p)?;
        if factors.is_empty() {
            return Err(Error::invalid("at least one factor is required"));
        }
        for h in &factors {
            h.require_no_empty_edge()?;
            if h.n() > TABLE_MAX_N {
                return Err(Error::cap(
                    "factor vertex count",
                    h.n() as u128,
                    TABLE_MAX_N as u128,
                ));
            }
        }
        let n: usize = factors.iter().map(Hypergraph::n).sum();
        if n > 64 {
            return Err(Error::cap("total vertex count", n as u128, 64));
        }
        if let LambdaVariant::Alternation { permutations } = &variant {
            if permutations.len() != factors.len() {
                return Err(Error::invalid(format!(
                    "{} permutations for {} factors",
                    permutations.len(),
                    factors.len()
                )));
            }
        }

        let kgs = factors
            .iter()
            .map(|h| kneser(h, p).map(|k| k.hypergraph))
            .collect::<Result<Vec<_>>>()?;
        let space = ProductSpace::new(kgs)?;
        if coloring.len() != space.num_vertices() {
            return Err(Error::ColoringLength {
                got: coloring.len(),
                expected: space.num_vertices(),
            });
        }
        if coloring.num_colors() == 0 {
            return Err(Error::invalid("the coloring needs at least one color"));
        }
        if !space.product_is_proper(&coloring) {
            return Err(Error::ImproperColoring);
        }

        let factor_values = match &variant {
            LambdaVariant::Defect => factors
                .iter()
                .map(|h| defect_table(h, p).map(|t| t[(1usize << h.n()) - 1]))
                .collect::<Result<Vec<_>>>()?,
            LambdaVariant::Alternation { permutations } => factors
                .iter()
                .zip(permutations)
                .map(|(h, pi)| max_alt_for_perm(h, p, pi).map(|a| h.n() - a))
                .collect::<Result<Vec<_>>>()?,
        };
        let first = factor_values[0];
        if let Some((i, &value)) = factor_values.iter().enumerate().find(|(_, &v)| v < first) {
            return Err(Error::FactorNotMinimal {
                factor: i + 1,
                value,
                first,
            });
        }

        let mut offsets = vec![0];
        for h in &factors {
            offsets.push(offsets.last().unwrap() + h.n());
        }
        let dims = factors.iter().map(Hypergraph::num_edges).collect();
        let edge_masks = factors.iter().map(|h| h.edges().iter().map(|e| to_mask(e)).collect()).collect();
        let indep = factors
            .iter()
            .map(independence_table)
            .collect::<Result<Vec<_>>>()?;
        let max_indep = match variant {
            LambdaVariant::Defect => indep
                .iter()
                .zip(&factors)
                .map(|(t, h)| largest_edge_free(t, h.n()))
                .collect(),
            LambdaVariant::Alternation { .. } => Vec::new(),
        };
        let alpha = n - first + p - 1;
        let m = alpha + coloring.num_colors() - 1;
        Ok(LambdaContext {
            factors,
            p,
            coloring,
            variant,
            offsets,
            dims,
            edge_masks,
            indep,
            max_indep,
            factor_values,
            alpha,
            m,
        })
    }

    pub fn factors(&self) -> &[Hypergraph] {
        &self.factors
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_colors(&self) -> usize {
        self.coloring.num_colors()
    }

    pub fn variant(&self) -> &LambdaVariant {
        &self.variant
    }

    /// `cd_p(H_l)` or `n_l - alt_{π_l}(H_l)` per factor.
    pub fn factor_values(&self) -> &[usize] {
        &self.factor_values
    }

    fn flat(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

fn largest_edge_free(indep: &[bool], n: usize) -> Vec<u8> {
    let mut best = vec![0u8; indep.len()];
    for mask in 1..indep.len() {
        best[mask] = if indep[mask] {
            mask.count_ones() as u8
        } else {
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| best[mask & !(1 << i)])
                .max()
                .unwrap_or(0)
        };
    }
    best
}

/// Which branch of the construction produced a label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case {
    First,
    Second { tuple: Vec<usize>, color: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub label: Label,
    pub case: Case,
    /// `A_l` as bitmasks over `Z_p`.
    pub a_sets: Vec<u32>,
}

pub struct Lambda {
    ctx: LambdaContext,
    memo: DashMap<(usize, Vec<Option<u8>>), usize>,
}

pub fn build_lambda(ctx: LambdaContext) -> TuckerInstance<Lambda> {
    TuckerInstance {
        p: ctx.p,
        n: ctx.n(),
        m: ctx.m,
        alpha: ctx.alpha,
        lambda: Lambda {
            ctx,
            memo: DashMap::new(),
        },
    }
}

impl Lambda {
    pub fn context(&self) -> &LambdaContext {
        &self.ctx
    }

    pub fn evaluate(&self, x: &SignedVector) -> Evaluation {
        let ctx = &self.ctx;
        let p = ctx.p;
        assert_eq!(x.len(), ctx.n(), "vector length");
        assert_eq!(x.modulus(), p, "vector modulus");
        let full = (1u32 << p) - 1;
        let t = ctx.factors.len();

        let slices: Vec<SignedVector> = (0..t)
            .map(|l| x.slice(ctx.offsets[l]..ctx.offsets[l + 1]))
            .collect();
        let supports: Vec<Vec<u64>> = slices
            .iter()
            .map(|y| (0..p as u8).map(|j| y.support_mask(j)).collect())
            .collect();
        let a_sets: Vec<u32> = (0..t)
            .map(|l| {
                (0..p)
                    .filter(|&j| !ctx.indep[l][supports[l][j] as usize])
                    .fold(0, |a, j| a | 1 << j)
            })
            .collect();

        if a_sets.iter().all(|&a| a == full) {
            let (tuple, j, color) = self.second_case(&supports);
            return Evaluation {
                label: Label {
                    s: j as u8,
                    v: ctx.alpha + color,
                },
                case: Case::Second { tuple, color },
                a_sets,
            };
        }

        let mut v = 0;
        for l in 0..t {
            let a = a_sets[l];
            v += match (&ctx.variant, a) {
                (_, a) if a == full => slices[l].norm(),
                (LambdaVariant::Defect, 0) => slices[l].norm(),
                (LambdaVariant::Alternation { permutations }, 0) => {
                    alt_under_perm(&slices[l], &permutations[l])
                }
                (LambdaVariant::Defect, a) => {
                    let inner: usize = supports[l]
                        .iter()
                        .map(|&s| ctx.max_indep[l][s as usize] as usize)
                        .sum();
                    a.count_ones() as usize + inner
                }
                (LambdaVariant::Alternation { permutations }, a) => {
                    a.count_ones() as usize + self.inner_alt(l, &slices[l], &permutations[l])
                }
            };
        }
        let s = if a_sets.iter().all(|&a| a == 0 || a == full) {
            x.first_nonzero().expect("λ is defined on nonzero vectors")
        } else {
            sign_eps_unchecked(p, &a_sets)
        };
        Evaluation {
            label: Label { s, v },
            case: Case::First,
            a_sets,
        }
    }

    /// The `⪯`-minimal edge tuple fitting inside one class support.
    fn second_case(&self, supports: &[Vec<u64>]) -> (Vec<usize>, usize, usize) {
        let ctx = &self.ctx;
        let mut best: Option<(usize, Vec<usize>, usize)> = None;
        for j in 0..ctx.p {
            let lists: Vec<Vec<usize>> = ctx
                .edge_masks
                .iter()
                .zip(supports)
                .map(|(masks, supp)| {
                    (0..masks.len())
                        .filter(|&e| masks[e] & supp[j] == masks[e])
                        .collect()
                })
                .collect();
            let mut digits = vec![0usize; lists.len()];
            'tuples: loop {
                let tuple: Vec<usize> = digits.iter().zip(&lists).map(|(&d, l)| l[d]).collect();
                let color = ctx.coloring.at(ctx.flat(&tuple));
                let key = (color, tuple, j);
                if best.as_ref().map_or(true, |b| (key.0, &key.1) < (b.0, &b.1)) {
                    best = Some(key);
                }
                for i in (0..digits.len()).rev() {
                    digits[i] += 1;
                    if digits[i] < lists[i].len() {
                        continue 'tuples;
                    }
                    digits[i] = 0;
                }
                break;
            }
        }
        let (color, tuple, j) = best.expect("every class support holds an edge");
        let first = ctx.edge_masks[0][tuple[0]];
        let fits = (0..ctx.p).filter(|&i| first & supports[0][i] == first).count();
        assert_eq!(fits, 1, "an edge fits inside two class supports");
        (tuple, j, color)
    }

    /// `max alt_π(ỹ)` over `ỹ ⊆ y` whose class supports are all edge-free.
    fn inner_alt(&self, l: usize, y: &SignedVector, pi: &Permutation) -> usize {
        let key = (l, y.entries().to_vec());
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let order: Vec<(usize, u8)> = pi
            .sequence()
            .iter()
            .filter_map(|&i| y.entries()[i - 1].map(|e| (i - 1, e)))
            .collect();
        let mut classes = vec![0u64; self.ctx.p];
        let value = alt_dfs(&self.ctx.indep[l], &order, 0, None, &mut classes);
        self.memo.insert(key, value);
        value
    }
}

fn alt_dfs(
    indep: &[bool],
    order: &[(usize, u8)],
    pos: usize,
    last: Option<u8>,
    classes: &mut [u64],
) -> usize {
    if pos == order.len() {
        return 0;
    }
    // keeping a term equal to the last counted one never helps
    let mut best = alt_dfs(indep, order, pos + 1, last, classes);
    if best >= order.len() - pos {
        return best;
    }
    let (i, e) = order[pos];
    if last != Some(e) {
        let cls = &mut classes[e as usize];
        let grown = *cls | 1 << i;
        if indep[grown as usize] {
            let prev = *cls;
            *cls = grown;
            best = best.max(1 + alt_dfs(indep, order, pos + 1, Some(e), classes));
            classes[e as usize] = prev;
        }
    }
    best
}

impl super::Labeling for Lambda {
    fn label(&self, x: &SignedVector) -> Label {
        self.evaluate(x).label
    }
}
