//! Streams every coordinate pattern (or a seeded sample of them) through a
//! labeling and records violations of the Tucker hypotheses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Label, Labeling, TuckerInstance};
use crate::error::{Error, Result};
use crate::signed::SignedVector;

/// Exhaustive pattern limit per property.
pub const DEFAULT_PATTERN_BUDGET: u128 = 10_000_000;
/// Witnesses kept per violation kind.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

type Entries = Vec<Option<u8>>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `s ≥ p` or `v ∉ [1, m]`.
    Range { x: Entries, label: Label },
    Equivariance {
        x: Entries,
        label: Label,
        rotated_label: Label,
    },
    Property1 {
        smaller: Entries,
        larger: Entries,
        labels: [Label; 2],
    },
    Property2 { chain: Vec<Entries>, labels: Vec<Label> },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCounts {
    pub range: u64,
    pub equivariance: u64,
    pub property1: u64,
    pub property2: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCounts {
    pub equivariance: u64,
    pub property1: u64,
    pub property2: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    /// `α + (m - α)(p - 1)`
    pub lhs: usize,
    /// `n`
    pub rhs: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuckerReport {
    pub p: usize,
    pub n: usize,
    pub m: usize,
    pub alpha: usize,
    pub mode: CheckMode,
    pub range_ok: bool,
    pub equivariance_ok: bool,
    pub property1_ok: bool,
    pub property2_ok: bool,
    pub violation_counts: ViolationCounts,
    pub patterns: PatternCounts,
    pub violations: Vec<Violation>,
    pub conclusion: Conclusion,
}

impl TuckerReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.range_ok && self.equivariance_ok && self.property1_ok && self.property2_ok
    }

    pub fn passed(&self) -> bool {
        self.hypotheses_hold() && self.conclusion.holds
    }

    /// Every hypothesis holds yet the conclusion fails: impossible for a
    /// correct checker.
    pub fn is_critical(&self) -> bool {
        self.hypotheses_hold() && !self.conclusion.holds
    }
}

pub fn check_tucker<L: Labeling>(inst: &TuckerInstance<L>, mode: CheckMode) -> Result<TuckerReport> {
    check_tucker_with(inst, mode, DEFAULT_PATTERN_BUDGET)
}

pub fn check_tucker_with<L: Labeling>(
    inst: &TuckerInstance<L>,
    mode: CheckMode,
    budget: u128,
) -> Result<TuckerReport> {
    let p = inst.p;
    let n = inst.n;
    if p > u8::MAX as usize {
        return Err(Error::invalid(format!("modulus {p} too large")));
    }
    let checks = [
        Check::Equivariance,
        Check::Property1,
        Check::Property2,
    ];
    if mode == CheckMode::Exhaustive {
        for c in checks {
            let size = (c.base(p) as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            if size > budget {
                return Err(Error::CapExceeded {
                    what: format!("{} patterns", c.name()),
                    size,
                    cap: budget,
                    hint: "; use sampled mode with a seed".into(),
                });
            }
        }
    }

    let mut counts = ViolationCounts::default();
    let mut patterns = PatternCounts::default();
    let mut violations = Vec::new();
    for c in checks {
        let found = match mode {
            CheckMode::Exhaustive => exhaustive(inst, c),
            CheckMode::Sampled { seed, count } => sampled(inst, c, seed, count),
        };
        match c {
            Check::Equivariance => {
                patterns.equivariance = found.patterns;
                counts.range = found.range;
                counts.equivariance = found.main;
            }
            Check::Property1 => {
                patterns.property1 = found.patterns;
                counts.property1 = found.main;
            }
            Check::Property2 => {
                patterns.property2 = found.patterns;
                counts.property2 = found.main;
            }
        }
        violations.extend(found.range_witnesses.into_iter().map(|(_, v)| v));
        violations.extend(found.witnesses.into_iter().map(|(_, v)| v));
    }
    violations.sort();

    let lhs = inst.conclusion_lhs();
    Ok(TuckerReport {
        p,
        n,
        m: inst.m,
        alpha: inst.alpha,
        mode,
        range_ok: counts.range == 0,
        equivariance_ok: counts.equivariance == 0,
        property1_ok: counts.property1 == 0,
        property2_ok: counts.property2 == 0,
        violation_counts: counts,
        patterns,
        violations,
        conclusion: Conclusion {
            lhs,
            rhs: n,
            holds: lhs >= n,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Check {
    Equivariance,
    Property1,
    Property2,
}

impl Check {
    /// Per-coordinate alphabet size of the pattern space.
    fn base(self, p: usize) -> usize {
        match self {
            Check::Equivariance => p + 1,
            Check::Property1 => 1 + 2 * p,
            Check::Property2 => 1 + p * p,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Check::Equivariance => "equivariance",
            Check::Property1 => "property-1 pair",
            Check::Property2 => "property-2 chain",
        }
    }
}

/// Violations found over a set of patterns, witnesses keyed by pattern index.
#[derive(Default)]
struct Found {
    patterns: u64,
    main: u64,
    range: u64,
    witnesses: Vec<(u64, Violation)>,
    range_witnesses: Vec<(u64, Violation)>,
}

impl Found {
    fn merge(mut self, other: Found) -> Found {
        self.patterns += other.patterns;
        self.main += other.main;
        self.range += other.range;
        self.witnesses = keep_smallest(self.witnesses, other.witnesses);
        self.range_witnesses = keep_smallest(self.range_witnesses, other.range_witnesses);
        self
    }
}

fn keep_smallest(mut a: Vec<(u64, Violation)>, b: Vec<(u64, Violation)>) -> Vec<(u64, Violation)> {
    a.extend(b);
    a.sort_by_key(|(i, _)| *i);
    a.truncate(MAX_WITNESSES);
    a
}

fn push_capped(list: &mut Vec<(u64, Violation)>, index: u64, v: Violation) {
    if list.len() < MAX_WITNESSES {
        list.push((index, v));
    }
}

fn exhaustive<L: Labeling>(inst: &TuckerInstance<L>, check: Check) -> Found {
    let base = check.base(inst.p) as u64;
    let total = base.pow(inst.n as u32);
    let mut found = (0..total)
        .into_par_iter()
        .fold(Found::default, |mut acc, index| {
            let digits = decode(index, base, inst.n);
            visit(inst, check, index, &digits, &mut acc);
            acc
        })
        .reduce(Found::default, Found::merge);
    found.patterns = total;
    found
}

fn sampled<L: Labeling>(inst: &TuckerInstance<L>, check: Check, seed: u64, count: u64) -> Found {
    let base = check.base(inst.p) as u64;
    let salt = match check {
        Check::Equivariance => 0,
        Check::Property1 => 1,
        Check::Property2 => 2,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
    let mut found = Found::default();
    for index in 0..count {
        let digits: Vec<u64> = (0..inst.n).map(|_| rng.gen_range(0..base)).collect();
        visit(inst, check, index, &digits, &mut found);
    }
    found.patterns = count;
    found
}

fn decode(mut index: u64, base: u64, n: usize) -> Vec<u64> {
    let mut digits = vec![0; n];
    for d in digits.iter_mut().rev() {
        *d = index % base;
        index /= base;
    }
    digits
}

fn vector(p: usize, entries: Vec<Option<u8>>) -> SignedVector {
    SignedVector::from_raw(p as u8, entries)
}

fn visit<L: Labeling>(inst: &TuckerInstance<L>, check: Check, index: u64, digits: &[u64], acc: &mut Found) {
    let p = inst.p as u64;
    let lam = &inst.lambda;
    match check {
        Check::Equivariance => {
            let entries: Entries = digits
                .iter()
                .map(|&d| (d > 0).then(|| (d - 1) as u8))
                .collect();
            if entries.iter().all(Option::is_none) {
                return;
            }
            let x = vector(inst.p, entries);
            let label = lam.label(&x);
            if label.s as usize >= inst.p || label.v < 1 || label.v > inst.m {
                acc.range += 1;
                push_capped(
                    &mut acc.range_witnesses,
                    index,
                    Violation::Range {
                        x: x.entries().to_vec(),
                        label,
                    },
                );
            }
            let rotated_label = lam.label(&x.rotate());
            let expected = Label {
                s: ((label.s as u64 + 1) % p) as u8,
                v: label.v,
            };
            if rotated_label != expected {
                acc.main += 1;
                push_capped(
                    &mut acc.witnesses,
                    index,
                    Violation::Equivariance {
                        x: x.entries().to_vec(),
                        label,
                        rotated_label,
                    },
                );
            }
        }
        Check::Property1 => {
            let (small, large): (Entries, Entries) = digits
                .iter()
                .map(|&d| match d {
                    0 => (None, None),
                    d if d <= p => (None, Some((d - 1) as u8)),
                    d => (Some((d - p - 1) as u8), Some((d - p - 1) as u8)),
                })
                .unzip();
            if small.iter().all(Option::is_none) {
                return;
            }
            let small = vector(inst.p, small);
            let a = lam.label(&small);
            if a.v > inst.alpha {
                return;
            }
            let large = vector(inst.p, large);
            let b = lam.label(&large);
            if a.v == b.v && a.s != b.s {
                acc.main += 1;
                push_capped(
                    &mut acc.witnesses,
                    index,
                    Violation::Property1 {
                        smaller: small.entries().to_vec(),
                        larger: large.entries().to_vec(),
                        labels: [a, b],
                    },
                );
            }
        }
        Check::Property2 => {
            // digit 1 + step·p + value: the coordinate joins the chain at `step`
            let chain: Vec<SignedVector> = (0..p)
                .map(|i| {
                    let entries = digits
                        .iter()
                        .map(|&d| {
                            if d == 0 {
                                return None;
                            }
                            let (step, value) = ((d - 1) / p, (d - 1) % p);
                            (i >= step).then_some(value as u8)
                        })
                        .collect();
                    vector(inst.p, entries)
                })
                .collect();
            if chain[0].is_zero() {
                return;
            }
            let mut labels = Vec::with_capacity(chain.len());
            for x in &chain {
                let l = lam.label(x);
                if l.v <= inst.alpha || labels.first().is_some_and(|f: &Label| f.v != l.v) {
                    return;
                }
                labels.push(l);
            }
            let mut seen = 0u64;
            for l in &labels {
                seen |= 1 << l.s.min(63);
            }
            if seen.count_ones() as usize == labels.len() {
                acc.main += 1;
                push_capped(
                    &mut acc.witnesses,
                    index,
                    Violation::Property2 {
                        chain: chain.iter().map(|x| x.entries().to_vec()).collect(),
                        labels,
                    },
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sign_breaks_equivariance() {
        let inst = TuckerInstance::new(2, 3, 3, 1, |x: &SignedVector| Label { s: 0, v: x.norm() }).unwrap();
        let report = check_tucker(&inst, CheckMode::Exhaustive).unwrap();
        assert!(!report.equivariance_ok);
        assert!(report.range_ok);
        assert_eq!(report.violation_counts.equivariance, 26);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Equivariance { .. })));
    }

    #[test]
    fn constant_value_breaks_property1() {
        let lam = |x: &SignedVector| Label {
            s: x.first_nonzero().unwrap(),
            v: 1,
        };
        let inst = TuckerInstance::new(2, 2, 1, 1, lam).unwrap();
        let report = check_tucker(&inst, CheckMode::Exhaustive).unwrap();
        assert!(report.equivariance_ok);
        assert!(!report.property1_ok);
        let witness = Violation::Property1 {
            smaller: vec![None, Some(1)],
            larger: vec![Some(0), Some(1)],
            labels: [Label { s: 1, v: 1 }, Label { s: 0, v: 1 }],
        };
        assert!(report.violations.contains(&witness));
    }

    #[test]
    fn property2_catches_distinct_signs_on_a_chain() {
        // v above alpha everywhere and s from the first entry: the chain
        // (w0,0) ⊆ (w0,w1) has signs 0, 0, so look for a distinct pair
        let lam = |x: &SignedVector| {
            let s = x.entries().iter().rev().flatten().next().copied().unwrap();
            Label { s, v: 2 }
        };
        let inst = TuckerInstance::new(2, 2, 2, 1, lam).unwrap();
        let report = check_tucker(&inst, CheckMode::Exhaustive).unwrap();
        assert!(!report.property2_ok);
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::Property2 { chain, .. } if chain[0] == vec![Some(0), None] && chain[1] == vec![Some(0), Some(1)]
        )));
    }

    #[test]
    fn range_violations_are_reported() {
        let lam = |x: &SignedVector| Label {
            s: x.first_nonzero().unwrap(),
            v: 5,
        };
        let inst = TuckerInstance::new(2, 2, 3, 1, lam).unwrap();
        let report = check_tucker(&inst, CheckMode::Exhaustive).unwrap();
        assert!(!report.range_ok);
        assert_eq!(report.violation_counts.range, 8);
        assert!(!report.hypotheses_hold());
    }

    #[test]
    fn budget_is_enforced() {
        let lam = |x: &SignedVector| Label {
            s: x.first_nonzero().unwrap(),
            v: 1,
        };
        let inst = TuckerInstance::new(3, 12, 1, 1, lam).unwrap();
        assert!(matches!(
            check_tucker(&inst, CheckMode::Exhaustive),
            Err(Error::CapExceeded { .. })
        ));
        let report = check_tucker(&inst, CheckMode::Sampled { seed: 7, count: 500 }).unwrap();
        assert_eq!(report.patterns.property2, 500);
        let again = check_tucker(&inst, CheckMode::Sampled { seed: 7, count: 500 }).unwrap();
        assert_eq!(report, again);
    }

    #[test]
    fn conclusion_arithmetic() {
        let lam = |x: &SignedVector| Label {
            s: x.first_nonzero().unwrap(),
            v: 1,
        };
        let inst = TuckerInstance::new(3, 6, 6, 5, lam).unwrap();
        assert_eq!(inst.conclusion_lhs(), 7);
        assert!(TuckerInstance::new(4, 6, 6, 5, lam).is_err());
        assert!(TuckerInstance::new(3, 6, 4, 5, lam).is_err());
    }
}
