//! Multi-indices, operator variables `d^theta x_j`, transforms and rankings.

use crate::dalgebra::{AlgebraError, DAlgebra};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("AlgebraMismatch: {0}")]
    AlgebraMismatch(String),
    #[error("InvalidRanking: {0}")]
    InvalidRanking(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Exponents of the operator slots, laid out block by block with the
/// endomorphism slot first in each block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    pub fn unit(len: usize, slot: usize) -> Self {
        let mut v = vec![0; len];
        v[slot] = 1;
        MultiIndex(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Sum of all entries.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn add_slot(&self, slot: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[slot] += 1;
        MultiIndex(v)
    }

    /// `self - other` when componentwise nonnegative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise `<=`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// Sum of the derivation-slot entries of `block` (1-based).
pub fn ord_block(algebra: &DAlgebra, theta: &MultiIndex, block: usize) -> u32 {
    let m = algebra.nilpotent_count(block);
    let start = algebra.slot(block, 0).expect("block in range");
    theta.entries()[start + 1..=start + m].iter().sum()
}

/// Sum of all derivation-slot entries; endomorphism slots do not count.
pub fn ord_delta(algebra: &DAlgebra, theta: &MultiIndex) -> u32 {
    theta
        .entries()
        .iter()
        .enumerate()
        .filter(|(s, _)| !algebra.is_sigma_slot(*s))
        .map(|(_, e)| e)
        .sum()
}

/// The variable `d^theta x_var`; indeterminates are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DVariable {
    pub var: u32,
    pub theta: MultiIndex,
}

impl DVariable {
    pub fn new(var: u32, theta: MultiIndex) -> Self {
        DVariable { var, theta }
    }

    /// `x_var` itself, identified with `d^0 x_var`.
    pub fn base(var: u32, slots: usize) -> Self {
        DVariable {
            var,
            theta: MultiIndex::zero(slots),
        }
    }

    pub fn shifted(&self, slot: usize) -> DVariable {
        DVariable {
            var: self.var,
            theta: self.theta.add_slot(slot),
        }
    }

    pub fn shifted_by(&self, theta: &MultiIndex) -> DVariable {
        DVariable {
            var: self.var,
            theta: self.theta.add(theta),
        }
    }
}

impl fmt::Display for DVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}{}", self.var, self.theta)
    }
}

/// Applies the operator in slot `(block, p)` to a variable.
pub fn apply_slot(
    algebra: &DAlgebra,
    v: &DVariable,
    block: usize,
    p: usize,
) -> Result<DVariable, OrderingError> {
    let slot = algebra.slot(block, p)?;
    if v.theta.len() != algebra.slot_count() {
        return Err(OrderingError::AlgebraMismatch(format!(
            "variable {v} has {} slots, algebra has {}",
            v.theta.len(),
            algebra.slot_count()
        )));
    }
    Ok(v.shifted(slot))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Sigma,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    pub theta: MultiIndex,
    pub kind: TransformKind,
}

/// If `v = theta(u)` for some composition `theta`, returns it with its
/// classification. The identity counts as a sigma-transform.
pub fn transform_of(algebra: &DAlgebra, v: &DVariable, u: &DVariable) -> Option<Transform> {
    if v.var != u.var {
        return None;
    }
    let theta = v.theta.checked_sub(&u.theta)?;
    let kind = if ord_delta(algebra, &theta) > 0 {
        TransformKind::Delta
    } else {
        TransformKind::Sigma
    };
    Some(Transform { theta, kind })
}

/// A total order on variables compatible with operator application.
///
/// Both kinds compare the total order `T = sum(theta)` first, then the
/// indeterminate index, then the slot entries in a fixed priority order.
/// The sequential ranking uses the priority `M-1, ..., 0`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Ranking {
    #[default]
    Sequential,
    /// Slots from most to least significant. Build with [`Ranking::with_slot_priority`].
    SlotPriority(Vec<usize>),
}

impl Ranking {
    /// A custom slot priority, checked against the depth condition: within
    /// each block, a slot of strictly greater depth must be more significant.
    pub fn with_slot_priority(
        algebra: &DAlgebra,
        priority: Vec<usize>,
    ) -> Result<Ranking, OrderingError> {
        let m = algebra.slot_count();
        let mut seen = vec![false; m];
        for &s in &priority {
            if s >= m || std::mem::replace(&mut seen[s], true) {
                return Err(OrderingError::InvalidRanking(format!(
                    "{priority:?} is not a permutation of the {m} slots"
                )));
            }
        }
        if priority.len() != m {
            return Err(OrderingError::InvalidRanking(format!(
                "{priority:?} is not a permutation of the {m} slots"
            )));
        }
        let ranking = Ranking::SlotPriority(priority);
        ranking.check_depth_axiom(algebra)?;
        Ok(ranking)
    }

    /// Verifies that `nu(j) < nu(k)` implies `d_j(u) < d_k(u)` within each block.
    pub fn check_depth_axiom(&self, algebra: &DAlgebra) -> Result<(), OrderingError> {
        let m = algebra.slot_count();
        let base = DVariable::base(1, m);
        for a in 0..m {
            for b in 0..m {
                let (ba, pa) = algebra.slot_position(a);
                let (bb, pb) = algebra.slot_position(b);
                if ba == bb
                    && algebra.slot_nu(a) < algebra.slot_nu(b)
                    && self.cmp_vars(&base.shifted(a), &base.shifted(b)) != Ordering::Less
                {
                    return Err(OrderingError::InvalidRanking(format!(
                        "slot ({ba},{pa}) must rank below slot ({bb},{pb})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn compare(&self, v: &DVariable, w: &DVariable) -> Result<Ordering, OrderingError> {
        if v.theta.len() != w.theta.len() {
            return Err(OrderingError::AlgebraMismatch(format!(
                "{v} and {w} have different slot counts"
            )));
        }
        Ok(self.cmp_vars(v, w))
    }

    /// [`Ranking::compare`] for variables known to share a slot count.
    pub fn cmp_vars(&self, v: &DVariable, w: &DVariable) -> Ordering {
        v.theta
            .total()
            .cmp(&w.theta.total())
            .then(v.var.cmp(&w.var))
            .then_with(|| match self {
                Ranking::Sequential => {
                    let (a, b) = (v.theta.entries(), w.theta.entries());
                    a.iter().rev().cmp(b.iter().rev())
                }
                Ranking::SlotPriority(order) => {
                    let (a, b) = (v.theta.entries(), w.theta.entries());
                    order.iter().map(|&s| a[s]).cmp(order.iter().map(|&s| b[s]))
                }
            })
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of `theta` in `N^slots` with entry sum `total`.
fn compositions(total: u64, slots: u64) -> u128 {
    if slots == 0 {
        return u128::from(total == 0);
    }
    binomial(total + slots - 1, slots - 1)
}

/// Counts the variables ranked strictly below `v` under the sequential
/// ranking, for `n` indeterminates.
pub fn sequential_predecessor_count(v: &DVariable, n: u32) -> u128 {
    let slots = v.theta.len() as u64;
    let t = u64::from(v.theta.total());
    let mut count: u128 = (0..t).map(|s| compositions(s, slots)).sum::<u128>() * u128::from(n);
    count += u128::from(v.var - 1) * compositions(t, slots);
    let mut remaining = t;
    for s in (0..v.theta.len()).rev() {
        let e = u64::from(v.theta.entries()[s]);
        for a in 0..e {
            count += compositions(remaining - a, s as u64);
        }
        remaining -= e;
    }
    count
}

/// The componentwise-minimal elements of `set`, deduplicated and sorted.
pub fn dickson_minimal(set: &[MultiIndex]) -> Vec<MultiIndex> {
    let mut sorted: Vec<&MultiIndex> = set.iter().collect();
    sorted.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    sorted.dedup();
    let mut minimal: Vec<MultiIndex> = Vec::new();
    for t in sorted {
        // anything dividing `t` has a smaller total, so it is already recorded
        if !minimal.iter().any(|m| m.divides(t)) {
            minimal.push(t.clone());
        }
    }
    minimal.sort();
    minimal
}
