//! Autoreduced sets, characteristic sets of finite families, generator
//! enumeration and witness-checked closure steps.

use crate::expr::scan_max_indeterminate;
use crate::operators::apply_composition;
use crate::ordering::{ord_delta, MultiIndex};
use crate::par::{self, Execution};
use crate::poly::{same_ring, DPolynomial, PolyRing};
use crate::reduction::{
    is_reduced, read_cofactors, read_poly, read_theta, reduce, verify_certificate, Cofactor,
    CofactorJson, FormatError, ReductionCertificate, ReductionError,
};
use serde::Deserialize;
use std::cmp::Ordering;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharsetError {
    #[error("NotAutoreduced: {reduced} is not reduced with respect to {by}")]
    NotAutoreduced {
        first: usize,
        second: usize,
        reduced: String,
        by: String,
    },
    #[error("InconsistentSystem: derived the nonzero constant {0}")]
    InconsistentSystem(String),
    #[error("SeparantDegenerate: the separant of {0} reduces to 0")]
    SeparantDegenerate(String),
    #[error("NonMonotoneRound: round {0} did not lower the selected set")]
    NonMonotoneRound(usize),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Pairwise reduced polynomials sorted by ascending rank.
#[derive(Clone, Debug, PartialEq)]
pub struct AutoreducedSet {
    members: Vec<DPolynomial>,
}

impl AutoreducedSet {
    pub fn members(&self) -> &[DPolynomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn rank_then_canonical(a: &DPolynomial, b: &DPolynomial) -> Ordering {
    a.rank()
        .compare(&b.rank(), a.ranking())
        .then_with(|| a.canonical_cmp(b))
}

/// Checks that every member is reduced with respect to every other one.
/// Constant members are rejected.
pub fn validate_autoreduced(members: Vec<DPolynomial>) -> Result<AutoreducedSet, CharsetError> {
    for (i, f) in members.iter().enumerate() {
        if f.is_constant() {
            return Err(ReductionError::ConstantDivisor(f.to_string()).into());
        }
        for (j, g) in members.iter().enumerate() {
            if i != j && !is_reduced(g, f)? {
                return Err(CharsetError::NotAutoreduced {
                    first: j,
                    second: i,
                    reduced: g.to_string(),
                    by: f.to_string(),
                });
            }
        }
    }
    let mut members = members;
    members.sort_by(rank_then_canonical);
    Ok(AutoreducedSet { members })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutoreducedOrder {
    ALessB,
    BLessA,
    Equivalent,
}

/// The pre-order on autoreduced sets: the first strict rank difference
/// decides; if one set is a rank-prefix of the other, the longer one is
/// smaller.
pub fn compare_autoreduced(a: &AutoreducedSet, b: &AutoreducedSet) -> AutoreducedOrder {
    for (x, y) in a.members.iter().zip(&b.members) {
        match x.rank().compare(&y.rank(), x.ranking()) {
            Ordering::Less => return AutoreducedOrder::ALessB,
            Ordering::Greater => return AutoreducedOrder::BLessA,
            Ordering::Equal => {}
        }
    }
    match a.len().cmp(&b.len()) {
        Ordering::Greater => AutoreducedOrder::ALessB,
        Ordering::Less => AutoreducedOrder::BLessA,
        Ordering::Equal => AutoreducedOrder::Equivalent,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRound {
    pub round: usize,
    pub selected: Vec<DPolynomial>,
    /// Monic nonzero remainders merged into the pool after this round.
    pub added: Vec<DPolynomial>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharSetResult {
    pub charset: AutoreducedSet,
    pub trace: Vec<TraceRound>,
    /// One certificate per input generator, against the final set.
    pub certificates: Vec<ReductionCertificate>,
}

fn inconsistent(r: &DPolynomial) -> CharsetError {
    CharsetError::InconsistentSystem(r.to_string())
}

/// Greedy selection in ascending rank: take each pool element that is
/// reduced with respect to everything taken so far.
fn select(pool: &[DPolynomial]) -> Result<Vec<DPolynomial>, CharsetError> {
    let mut chosen: Vec<DPolynomial> = Vec::new();
    for p in pool {
        let mut ok = true;
        for c in &chosen {
            if !is_reduced(p, c)? {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(p.clone());
        }
    }
    Ok(chosen)
}

fn check_separants(set: &[DPolynomial]) -> Result<(), CharsetError> {
    for f in set {
        let s = f.separant().map_err(ReductionError::from)?;
        if reduce(&s, set)?.remainder.is_zero() {
            return Err(CharsetError::SeparantDegenerate(f.to_string()));
        }
    }
    Ok(())
}

/// Completes the finite family `gens` to a characteristic set: select an
/// autoreduced subset, reduce the rest of the pool by it, merge nonzero
/// remainders and repeat until everything reduces to zero.
pub fn charset_complete(
    gens: &[DPolynomial],
    exec: Execution,
) -> Result<CharSetResult, CharsetError> {
    let mut pool: Vec<DPolynomial> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return Err(inconsistent(g));
        }
        let m = g.monic();
        if !pool.contains(&m) {
            pool.push(m);
        }
    }
    pool.sort_by(rank_then_canonical);

    let mut trace = Vec::new();
    let mut previous: Option<AutoreducedSet> = None;
    for round in 1.. {
        let selected = validate_autoreduced(select(&pool)?)?;
        if let Some(prev) = &previous {
            if compare_autoreduced(&selected, prev) != AutoreducedOrder::ALessB {
                return Err(CharsetError::NonMonotoneRound(round));
            }
        }
        check_separants(selected.members())?;
        let rest: Vec<DPolynomial> = pool
            .iter()
            .filter(|p| !selected.members.contains(p))
            .cloned()
            .collect();
        let remainders = par::map(exec, &rest, |p| reduce(p, selected.members()));
        let mut added = Vec::new();
        let mut nonzero = 0;
        for r in remainders {
            let r = r?.remainder;
            if r.is_zero() {
                continue;
            }
            nonzero += 1;
            if r.is_constant() {
                return Err(inconsistent(&r));
            }
            let m = r.monic();
            if !pool.contains(&m) && !added.contains(&m) {
                added.push(m);
            }
        }
        added.sort_by(rank_then_canonical);
        trace.push(TraceRound {
            round,
            selected: selected.members.clone(),
            added: added.clone(),
        });
        if added.is_empty() {
            if nonzero > 0 {
                return Err(CharsetError::NonMonotoneRound(round + 1));
            }
            let certificates = par::map(exec, gens, |g| reduce(g, selected.members()))
                .into_iter()
                .collect::<Result<Vec<_>, _>>()?;
            debug_assert!(certificates.iter().all(|c| c.remainder.is_zero()));
            return Ok(CharSetResult {
                charset: selected,
                trace,
                certificates,
            });
        }
        pool.extend(added);
        pool.sort_by(rank_then_canonical);
        previous = Some(selected);
    }
    unreachable!()
}

/// Checks a completion result against its inputs: every certificate
/// verifies with remainder zero and the set is autoreduced.
pub fn verify_charset(gens: &[DPolynomial], result: &CharSetResult) -> bool {
    let set = result.charset.members();
    result.certificates.len() == gens.len()
        && validate_autoreduced(set.to_vec()).is_ok()
        && gens
            .iter()
            .zip(&result.certificates)
            .all(|(g, c)| c.remainder.is_zero() && verify_certificate(g, set, c))
}

/// All multi-indices with `slots` entries and entry sum at most `bound`,
/// by ascending total and then lexicographically.
pub fn multi_indices_up_to(slots: usize, bound: u32) -> Vec<MultiIndex> {
    fn fill(slots: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == slots {
            prefix.push(total);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in (0..=total).rev() {
            prefix.push(k);
            fill(slots, total - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if slots == 0 {
        out.push(MultiIndex::new(Vec::new()));
        return out;
    }
    for total in 0..=bound {
        fill(slots, total, &mut Vec::new(), &mut out);
    }
    out
}

/// `theta(s)` for every `s` in `gens` and every `theta` of total order at
/// most `bound`, without repeats or zeros, in enumeration order.
pub fn d_ideal_generators(gens: &[DPolynomial], bound: u32, exec: Execution) -> Vec<DPolynomial> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let thetas = multi_indices_up_to(first.ring().slots(), bound);
    let jobs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| (0..thetas.len()).map(move |t| (i, t)))
        .collect();
    let images = par::map(exec, &jobs, |&(i, t)| {
        apply_composition(&thetas[t], &gens[i]).expect("slot count matches ring")
    });
    let mut out: Vec<DPolynomial> = Vec::new();
    for p in images {
        if !p.is_zero() && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// A claim that `prod_j tau_j(a)^{n_j}` lies in the ideal generated by
/// `gens`, with the combination that shows it.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureWitness {
    pub a: DPolynomial,
    pub taus: Vec<MultiIndex>,
    pub exponents: Vec<u32>,
    pub combination: Vec<Cofactor>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rejection {
    /// The product minus the combination; never zero.
    BadWitness {
        difference: DPolynomial,
    },
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClosureVerdict {
    Accept(DPolynomial),
    Reject(Rejection),
}

/// Checks `prod_j tau_j(a)^{n_j} = sum_k c_k * theta_k(gens_k)` exactly and
/// accepts `a` as a new generator when it holds.
pub fn closure_step_witness(gens: &[DPolynomial], w: &ClosureWitness) -> ClosureVerdict {
    let malformed = |m: String| ClosureVerdict::Reject(Rejection::Malformed(m));
    let ring = w.a.ring();
    let algebra = ring.algebra();
    if w.taus.is_empty() || w.taus.len() != w.exponents.len() {
        return malformed(format!(
            "{} taus and {} exponents",
            w.taus.len(),
            w.exponents.len()
        ));
    }
    if w.exponents.contains(&0) {
        return malformed("exponents must be positive".into());
    }
    for t in &w.taus {
        if t.len() != ring.slots() || ord_delta(algebra, t) != 0 {
            return malformed(format!("{t} is not an endomorphism composition"));
        }
    }
    let mut product = DPolynomial::one(ring);
    for (t, &n) in w.taus.iter().zip(&w.exponents) {
        let img = apply_composition(t, &w.a).expect("checked length");
        product = &product * &img.pow(n);
    }
    let mut sum = DPolynomial::zero(ring);
    for c in &w.combination {
        let Some(g) = gens.get(c.member) else {
            return malformed(format!("no generator {}", c.member));
        };
        if !same_ring(ring, g.ring())
            || !same_ring(ring, c.c.ring())
            || c.theta.len() != ring.slots()
        {
            return malformed(format!(
                "cofactor for generator {} does not fit the ring",
                c.member
            ));
        }
        let img = apply_composition(&c.theta, g).expect("checked length");
        sum = &sum + &(&c.c * &img);
    }
    let difference = &product - &sum;
    if difference.is_zero() {
        ClosureVerdict::Accept(w.a.clone())
    } else {
        ClosureVerdict::Reject(Rejection::BadWitness { difference })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessJson {
    a: String,
    taus: Vec<Vec<u32>>,
    exponents: Vec<u32>,
    #[serde(alias = "combination")]
    cofactors: Vec<CofactorJson>,
}

impl ClosureWitness {
    /// Largest indeterminate index mentioned by the expressions of a witness file.
    pub fn max_indeterminate(text: &str) -> Result<u32, FormatError> {
        let doc: WitnessJson = serde_json::from_str(text).map_err(|e| FormatError::json(&e))?;
        let mut n = 0;
        for (field, s) in std::iter::once(("a", &doc.a))
            .chain(doc.cofactors.iter().map(|c| ("cofactors.c", &c.c)))
        {
            let m = scan_max_indeterminate(s).map_err(|source| FormatError::Expr {
                field: field.to_string(),
                source,
            })?;
            n = n.max(m);
        }
        Ok(n)
    }

    /// Reads the certificate layout with `a`, `taus` and `exponents` added;
    /// the combination goes under `cofactors`.
    pub fn from_json(ring: &Arc<PolyRing>, text: &str) -> Result<Self, FormatError> {
        let doc: WitnessJson = serde_json::from_str(text).map_err(|e| FormatError::json(&e))?;
        Ok(ClosureWitness {
            a: read_poly(ring, "a", &doc.a)?,
            taus: doc
                .taus
                .into_iter()
                .map(|t| read_theta(ring, t))
                .collect::<Result<_, _>>()?,
            exponents: doc.exponents,
            combination: read_cofactors(ring, doc.cofactors)?,
        })
    }
}

/// A characteristic set with the multiplier `H = prod I_c * s_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimePresentation {
    pub charset: AutoreducedSet,
    pub base_gens: Vec<DPolynomial>,
    pub h: DPolynomial,
}

pub fn presentation(c: &AutoreducedSet) -> Result<PrimePresentation, CharsetError> {
    let ring = match c.members.first() {
        Some(f) => f.ring().clone(),
        None => {
            return Err(CharsetError::Reduction(ReductionError::AlgebraMismatch(
                "empty set has no ring".into(),
            )))
        }
    };
    let mut h = DPolynomial::one(&ring);
    for f in &c.members {
        let i = f.initial().map_err(ReductionError::from)?;
        let s = f.separant().map_err(ReductionError::from)?;
        h = &h * &(&i * &s);
    }
    Ok(PrimePresentation {
        charset: c.clone(),
        base_gens: Vec::new(),
        h,
    })
}
