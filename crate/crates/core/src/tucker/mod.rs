//! Z_p-Tucker machinery: the sign map, the `λ` labelings built from proper
//! colorings, a hypothesis checker, and the reduction hypergraphs.

mod check;
mod lambda;
mod reduction;
mod sign;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signed::SignedVector;

pub use check::{
    check_tucker, check_tucker_with, CheckMode, Conclusion, PatternCounts, TuckerReport,
    Violation, ViolationCounts, DEFAULT_PATTERN_BUDGET, MAX_WITNESSES,
};
pub use lambda::{build_lambda, Case, Evaluation, Lambda, LambdaContext, LambdaVariant};
pub use reduction::{
    transform_t, transform_t_with, verify_reduction, verify_reduction_with, ReductionCheck,
    ReductionVariant, TRANSFORM_MAX_N,
};
pub use sign::{is_prime, rotate_set, sign_eps, tuple_order_cmp};

/// `(ω^s, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub s: u8,
    pub v: usize,
}

/// A map from nonzero vectors of `(Z_p ∪ {0})^n` to labels.
pub trait Labeling: Sync {
    fn label(&self, x: &SignedVector) -> Label;
}

impl<F> Labeling for F
where
    F: Fn(&SignedVector) -> Label + Sync,
{
    fn label(&self, x: &SignedVector) -> Label {
        self(x)
    }
}

pub struct TuckerInstance<L> {
    pub p: usize,
    pub n: usize,
    pub m: usize,
    pub alpha: usize,
    pub lambda: L,
}

impl<L: Labeling> TuckerInstance<L> {
    pub fn new(p: usize, n: usize, m: usize, alpha: usize, lambda: L) -> Result<Self> {
        sign::require_prime(p)?;
        if n == 0 || m == 0 || alpha == 0 {
            return Err(Error::invalid("n, m and alpha must be positive"));
        }
        if alpha > m {
            return Err(Error::invalid(format!("alpha {alpha} exceeds m {m}")));
        }
        Ok(TuckerInstance {
            p,
            n,
            m,
            alpha,
            lambda,
        })
    }

    /// `α + (m - α)(p - 1)`, the left side of the conclusion.
    pub fn conclusion_lhs(&self) -> usize {
        self.alpha + (self.m - self.alpha) * (self.p - 1)
    }
}
