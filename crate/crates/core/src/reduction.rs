//! Reduction of a polynomial by a finite set, with certificates.
//!
//! [`reduce`] rewrites `g` until it is reduced with respect to `A` and
//! records enough to re-check the result:
//!
//! ```text
//! H * g = g0 + sum_k c_k * theta_k(a_k)
//! ```
//!
//! where `H` is a product of sigma-transforms of initials and separants of
//! members of `A`.

use crate::expr::{parse_polynomial, ParseError};
use crate::operators::{apply_composition, rho, OperatorError};
use crate::ordering::{ord_delta, transform_of, DVariable, MultiIndex, TransformKind};
use crate::par::{self, Execution};
use crate::poly::{same_ring, DPolynomial, Monomial, PolyError, PolyRing};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("ConstantDivisor: cannot reduce by the constant {0}")]
    ConstantDivisor(String),
    #[error("DuplicateLeaders: members {first} and {second} share the leader {leader}")]
    DuplicateLeaders {
        first: usize,
        second: usize,
        leader: String,
    },
    #[error("AlgebraMismatch: {0}")]
    AlgebraMismatch(String),
    #[error("MeasureIncrease: step {step} did not lower (leader, degree)")]
    MeasureIncrease { step: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

impl From<PolyError> for ReductionError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ConstantPolynomial(s) => ReductionError::ConstantDivisor(s),
            other => ReductionError::AlgebraMismatch(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorSource {
    Initial,
    Separant,
}

/// One factor `theta(I)` or `theta(s)` of the multiplier, `theta` sigma-only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HFactor {
    pub theta: MultiIndex,
    pub source: FactorSource,
    pub member: usize,
}

/// One summand `c * theta(a_member)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cofactor {
    pub c: DPolynomial,
    pub theta: MultiIndex,
    pub member: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepCase {
    Delta,
    Sigma,
}

/// The offending variable chosen in one iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ALeader {
    pub var: DVariable,
    pub degree: u32,
    pub member: usize,
    pub theta: MultiIndex,
    pub case: StepCase,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionCertificate {
    pub h_factors: Vec<HFactor>,
    pub remainder: DPolynomial,
    pub cofactors: Vec<Cofactor>,
    pub steps: Vec<ALeader>,
}

fn nonconstant(f: &DPolynomial) -> Result<(DVariable, u32), ReductionError> {
    match f.leader() {
        Some(u) => {
            let d = f.degree_in(&u);
            Ok((u, d))
        }
        None => Err(ReductionError::ConstantDivisor(f.to_string())),
    }
}

fn check_ring(g: &DPolynomial, set: &[DPolynomial]) -> Result<(), ReductionError> {
    if set.iter().all(|a| same_ring(g.ring(), a.ring())) {
        Ok(())
    } else {
        Err(ReductionError::AlgebraMismatch(
            "polynomials belong to different rings".into(),
        ))
    }
}

/// Whether `g` is reduced with respect to the non-constant `f`.
pub fn is_reduced(g: &DPolynomial, f: &DPolynomial) -> Result<bool, ReductionError> {
    check_ring(g, std::slice::from_ref(f))?;
    let (u, d) = nonconstant(f)?;
    let algebra = g.algebra();
    for v in g.variables() {
        match transform_of(algebra, &v, &u) {
            Some(t) if t.kind == TransformKind::Delta => return Ok(false),
            Some(_) if g.degree_in(&v) >= d => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

pub fn is_reduced_wrt_set(g: &DPolynomial, set: &[DPolynomial]) -> Result<bool, ReductionError> {
    for f in set {
        if !is_reduced(g, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn leaders(set: &[DPolynomial]) -> Result<Vec<(DVariable, u32)>, ReductionError> {
    let ls = set.iter().map(nonconstant).collect::<Result<Vec<_>, _>>()?;
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            if ls[i].0 == ls[j].0 {
                return Err(ReductionError::DuplicateLeaders {
                    first: i,
                    second: j,
                    leader: ls[i].0.to_string(),
                });
            }
        }
    }
    Ok(ls)
}

fn select(g: &DPolynomial, ls: &[(DVariable, u32)]) -> Option<ALeader> {
    let algebra = g.algebra();
    let ranking = g.ranking();
    let mut best: Option<(ALeader, &DVariable)> = None;
    for v in g.variables() {
        let k = g.degree_in(&v);
        for (i, (u, d)) in ls.iter().enumerate() {
            let Some(t) = transform_of(algebra, &v, u) else {
                continue;
            };
            let case = match t.kind {
                TransformKind::Delta => StepCase::Delta,
                TransformKind::Sigma if k >= *d => StepCase::Sigma,
                TransformKind::Sigma => continue,
            };
            let better = match &best {
                None => true,
                Some((b, bu)) => {
                    ranking
                        .cmp_vars(&v, &b.var)
                        .then_with(|| ranking.cmp_vars(u, bu))
                        .then(b.member.cmp(&i))
                        == Ordering::Greater
                }
            };
            if better {
                let cand = ALeader {
                    var: v.clone(),
                    degree: k,
                    member: i,
                    theta: t.theta,
                    case,
                };
                best = Some((cand, u));
            }
        }
    }
    best.map(|(b, _)| b)
}

/// The highest-ranked variable of `g` that is not reduced with respect to
/// some member of `set`. Ties go to the member with the highest leader,
/// then to the lowest index.
pub fn a_leader(g: &DPolynomial, set: &[DPolynomial]) -> Result<Option<ALeader>, ReductionError> {
    check_ring(g, set)?;
    let ls = leaders(set)?;
    Ok(select(g, &ls))
}

pub fn reduce(
    g: &DPolynomial,
    set: &[DPolynomial],
) -> Result<ReductionCertificate, ReductionError> {
    check_ring(g, set)?;
    let ls = leaders(set)?;
    let ring = g.ring();
    let algebra = ring.algebra();
    let ranking = ring.ranking();
    let mut cur = g.clone();
    let mut cert = ReductionCertificate {
        h_factors: Vec::new(),
        remainder: DPolynomial::zero(ring),
        cofactors: Vec::new(),
        steps: Vec::new(),
    };
    while let Some(step) = select(&cur, &ls) {
        if let Some(prev) = cert.steps.last() {
            let drop = ranking
                .cmp_vars(&step.var, &prev.var)
                .then(step.degree.cmp(&prev.degree));
            if drop != Ordering::Less {
                return Err(ReductionError::MeasureIncrease {
                    step: cert.steps.len(),
                });
            }
        }
        let a = &set[step.member];
        let (_, d) = &ls[step.member];
        let g1 = cur.coefficient(&step.var, step.degree);
        let (factor, drop_by) = match step.case {
            StepCase::Delta => (
                HFactor {
                    theta: rho(algebra, &step.theta),
                    source: FactorSource::Separant,
                    member: step.member,
                },
                1,
            ),
            StepCase::Sigma => (
                HFactor {
                    theta: step.theta.clone(),
                    source: FactorSource::Initial,
                    member: step.member,
                },
                *d,
            ),
        };
        let m = factor_value(&factor, a)?;
        let q = g1.mul_monomial(&Monomial::var(step.var.clone(), step.degree - drop_by));
        let ta = apply_composition(&step.theta, a)?;
        cur = &(&m * &cur) - &(&q * &ta);
        for c in &mut cert.cofactors {
            c.c = &m * &c.c;
        }
        cert.cofactors.push(Cofactor {
            c: q,
            theta: step.theta.clone(),
            member: step.member,
        });
        cert.h_factors.push(factor);
        cert.steps.push(step);
    }
    cert.remainder = cur;
    Ok(cert)
}

fn factor_value(f: &HFactor, a: &DPolynomial) -> Result<DPolynomial, ReductionError> {
    let base = match f.source {
        FactorSource::Initial => a.initial()?,
        FactorSource::Separant => a.separant()?,
    };
    Ok(apply_composition(&f.theta, &base)?)
}

impl ReductionCertificate {
    /// The multiplier `H`, recomputed from its factors.
    pub fn multiplier(&self, set: &[DPolynomial]) -> Result<DPolynomial, ReductionError> {
        let mut h = DPolynomial::one(self.remainder.ring());
        for f in &self.h_factors {
            let a = set.get(f.member).ok_or_else(|| {
                ReductionError::AlgebraMismatch(format!("no member {}", f.member))
            })?;
            h = &h * &factor_value(f, a)?;
        }
        Ok(h)
    }

    /// `H * g - g0 - sum c_k theta_k(a_k)`; zero exactly when the identity holds.
    pub fn defect(
        &self,
        g: &DPolynomial,
        set: &[DPolynomial],
    ) -> Result<DPolynomial, ReductionError> {
        check_ring(g, set)?;
        check_ring(g, std::slice::from_ref(&self.remainder))?;
        let mut rhs = self.remainder.clone();
        for c in &self.cofactors {
            check_ring(g, std::slice::from_ref(&c.c))?;
            let a = set.get(c.member).ok_or_else(|| {
                ReductionError::AlgebraMismatch(format!("no member {}", c.member))
            })?;
            rhs = &rhs + &(&c.c * &apply_composition(&c.theta, a)?);
        }
        Ok(&(&self.multiplier(set)? * g) - &rhs)
    }
}

/// Rechecks a certificate from scratch: the identity, reducedness of the
/// remainder, its rank, and that every multiplier factor is a sigma-transform.
pub fn verify_certificate(
    g: &DPolynomial,
    set: &[DPolynomial],
    cert: &ReductionCertificate,
) -> bool {
    let algebra = g.algebra();
    let sigma_only = cert
        .h_factors
        .iter()
        .all(|f| f.theta.len() == algebra.slot_count() && ord_delta(algebra, &f.theta) == 0);
    sigma_only
        && cert.defect(g, set).is_ok_and(|d| d.is_zero())
        && is_reduced_wrt_set(&cert.remainder, set).unwrap_or(false)
        && cert.remainder.rank().compare(&g.rank(), g.ranking()) != Ordering::Greater
}

/// Reduces every element of `gs` by the same set.
pub fn reduce_batch(
    gs: &[DPolynomial],
    set: &[DPolynomial],
    exec: Execution,
) -> Vec<Result<ReductionCertificate, ReductionError>> {
    par::map(exec, gs, |g| reduce(g, set))
}

pub fn verify_batch(
    items: &[(DPolynomial, ReductionCertificate)],
    set: &[DPolynomial],
    exec: Execution,
) -> Vec<bool> {
    par::map(exec, items, |(g, c)| verify_certificate(g, set, c))
}

impl fmt::Display for StepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepCase::Delta => "delta",
            StepCase::Sigma => "sigma",
        })
    }
}

// Serialised form. Polynomials are stored as expressions, multi-indices as
// integer arrays and members as 0-based indices.

#[derive(Serialize, Deserialize)]
pub(crate) struct HFactorJson {
    pub theta: Vec<u32>,
    pub source: FactorSource,
    pub member: usize,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CofactorJson {
    pub c: String,
    #[serde(default)]
    pub theta: Option<Vec<u32>>,
    pub member: usize,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    leader: String,
    degree: u32,
    member: usize,
    theta: Vec<u32>,
    case: StepCase,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    h: Option<String>,
    #[serde(rename = "H_factors")]
    h_factors: Vec<HFactorJson>,
    remainder: String,
    cofactors: Vec<CofactorJson>,
    #[serde(default)]
    steps: Vec<StepJson>,
}

/// Errors reading certificate or witness files.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("ParseError at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {source}")]
    Expr {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("ParseError: {0}")]
    Shape(String),
}

impl FormatError {
    pub(crate) fn json(e: &serde_json::Error) -> Self {
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub(crate) fn read_poly(
    ring: &Arc<PolyRing>,
    field: &str,
    s: &str,
) -> Result<DPolynomial, FormatError> {
    parse_polynomial(ring, s).map_err(|source| FormatError::Expr {
        field: field.to_string(),
        source,
    })
}

pub(crate) fn read_theta(ring: &PolyRing, theta: Vec<u32>) -> Result<MultiIndex, FormatError> {
    if theta.len() != ring.slots() {
        return Err(FormatError::Shape(format!(
            "multi-index of length {} for {} slots",
            theta.len(),
            ring.slots()
        )));
    }
    Ok(MultiIndex::new(theta))
}

pub(crate) fn read_cofactors(
    ring: &Arc<PolyRing>,
    cs: Vec<CofactorJson>,
) -> Result<Vec<Cofactor>, FormatError> {
    cs.into_iter()
        .enumerate()
        .map(|(k, c)| {
            Ok(Cofactor {
                c: read_poly(ring, &format!("cofactors[{k}].c"), &c.c)?,
                theta: match c.theta {
                    Some(t) => read_theta(ring, t)?,
                    None => MultiIndex::zero(ring.slots()),
                },
                member: c.member,
            })
        })
        .collect()
}

pub(crate) fn write_cofactors(cs: &[Cofactor]) -> Vec<CofactorJson> {
    cs.iter()
        .map(|c| CofactorJson {
            c: c.c.to_string(),
            theta: Some(c.theta.entries().to_vec()),
            member: c.member,
        })
        .collect()
}

impl ReductionCertificate {
    /// JSON text; `h` is included under the key `H` when given.
    pub fn to_json(&self, h: Option<&DPolynomial>) -> String {
        let doc = CertificateJson {
            h: h.map(|p| p.to_string()),
            h_factors: self
                .h_factors
                .iter()
                .map(|f| HFactorJson {
                    theta: f.theta.entries().to_vec(),
                    source: f.source,
                    member: f.member,
                })
                .collect(),
            remainder: self.remainder.to_string(),
            cofactors: write_cofactors(&self.cofactors),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    leader: s.var.to_string(),
                    degree: s.degree,
                    member: s.member,
                    theta: s.theta.entries().to_vec(),
                    case: s.case,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
        s.push('\n');
        s
    }

    /// Reads a certificate; the `H` key, if present, is ignored.
    pub fn from_json(ring: &Arc<PolyRing>, text: &str) -> Result<Self, FormatError> {
        let doc: CertificateJson = serde_json::from_str(text).map_err(|e| FormatError::json(&e))?;
        let h_factors = doc
            .h_factors
            .into_iter()
            .map(|f| {
                Ok(HFactor {
                    theta: read_theta(ring, f.theta)?,
                    source: f.source,
                    member: f.member,
                })
            })
            .collect::<Result<_, FormatError>>()?;
        let steps = doc
            .steps
            .into_iter()
            .map(|s| {
                let var = crate::expr::parse_variable(ring, &s.leader).map_err(|source| {
                    FormatError::Expr {
                        field: "steps.leader".into(),
                        source,
                    }
                })?;
                Ok(ALeader {
                    var,
                    degree: s.degree,
                    member: s.member,
                    theta: read_theta(ring, s.theta)?,
                    case: s.case,
                })
            })
            .collect::<Result<_, FormatError>>()?;
        Ok(ReductionCertificate {
            h_factors,
            remainder: read_poly(ring, "remainder", &doc.remainder)?,
            cofactors: read_cofactors(ring, doc.cofactors)?,
            steps,
        })
    }
}
