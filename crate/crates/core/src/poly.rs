//! Sparse polynomials with exact rational coefficients in the variables `d^theta x_j`.

use crate::dalgebra::DAlgebra;
use crate::ordering::{DVariable, Ranking};
use crate::rational::{format_rational, is_negative, Rational};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("AlgebraMismatch: {0}")]
    AlgebraMismatch(String),
    #[error("ConstantPolynomial: {0} has no leader")]
    ConstantPolynomial(String),
    #[error("InvalidVariable: {0}")]
    InvalidVariable(String),
}

/// The polynomial ring over `Q` in `d^theta x_1, ..., d^theta x_n` with a fixed ranking.
#[derive(Debug, PartialEq)]
pub struct PolyRing {
    algebra: Arc<DAlgebra>,
    nvars: u32,
    ranking: Ranking,
}

impl PolyRing {
    pub fn new(algebra: Arc<DAlgebra>, nvars: u32, ranking: Ranking) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            algebra,
            nvars,
            ranking,
        })
    }

    pub fn algebra(&self) -> &DAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<DAlgebra> {
        &self.algebra
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn slots(&self) -> usize {
        self.algebra.slot_count()
    }

    pub fn check_variable(&self, v: &DVariable) -> Result<(), PolyError> {
        if v.var == 0 || v.var > self.nvars {
            return Err(PolyError::InvalidVariable(format!(
                "{v}: indeterminate index must be in 1..={}",
                self.nvars
            )));
        }
        if v.theta.len() != self.slots() {
            return Err(PolyError::InvalidVariable(format!(
                "{v}: expected {} slot entries",
                self.slots()
            )));
        }
        Ok(())
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A power product; variables sorted by their structural order, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(DVariable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: DVariable, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn from_factors(mut factors: Vec<(DVariable, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(DVariable, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn factors(&self) -> &[(DVariable, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, v: &DVariable) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes `v` entirely, returning the remaining monomial and the exponent of `v`.
    pub fn split_off(&self, v: &DVariable) -> (Monomial, u32) {
        match self.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(k) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(k);
                (Monomial(rest), e)
            }
            Err(_) => (self.clone(), 0),
        }
    }

    /// Applies `f` to every variable and renormalises.
    pub fn map_vars(&self, f: impl Fn(&DVariable) -> DVariable) -> Monomial {
        Monomial::from_factors(self.0.iter().map(|(v, e)| (f(v), *e)).collect())
    }

    /// Variables sorted descending by the ranking.
    fn ranked_desc<'a>(&'a self, ranking: &Ranking) -> Vec<&'a (DVariable, u32)> {
        let mut fs: Vec<&(DVariable, u32)> = self.0.iter().collect();
        fs.sort_by(|a, b| ranking.cmp_vars(&b.0, &a.0));
        fs
    }
}

/// Lexicographic comparison of monomials after sorting their variables
/// descending by rank; exponents break ties on equal variables.
pub fn monomial_cmp(ranking: &Ranking, a: &Monomial, b: &Monomial) -> Ordering {
    let (fa, fb) = (a.ranked_desc(ranking), b.ranked_desc(ranking));
    for (x, y) in fa.iter().zip(&fb) {
        let c = ranking.cmp_vars(&x.0, &y.0).then(x.1.cmp(&y.1));
        if c != Ordering::Equal {
            return c;
        }
    }
    fa.len().cmp(&fb.len())
}

/// Leader and degree of a polynomial; constants have no leader.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRank {
    pub leader: Option<DVariable>,
    pub degree: u32,
}

impl PolyRank {
    pub fn compare(&self, other: &PolyRank, ranking: &Ranking) -> Ordering {
        match (&self.leader, &other.leader) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(u), Some(v)) => ranking.cmp_vars(u, v).then(self.degree.cmp(&other.degree)),
        }
    }
}

#[derive(Clone)]
pub struct DPolynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Rational>,
}

impl DPolynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        DPolynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rational) -> Self {
        let mut p = DPolynomial::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        DPolynomial::constant(ring, Rational::one())
    }

    pub fn variable(ring: &Arc<PolyRing>, v: DVariable) -> Result<Self, PolyError> {
        ring.check_variable(&v)?;
        Ok(DPolynomial::monomial(
            ring,
            Monomial::var(v, 1),
            Rational::one(),
        ))
    }

    /// Builds `c * m` without validating the variables of `m`.
    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Rational) -> Self {
        let mut p = DPolynomial::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        ring: &Arc<PolyRing>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = DPolynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn algebra(&self) -> &DAlgebra {
        self.ring.algebra()
    }

    pub fn ranking(&self) -> &Ranking {
        self.ring.ranking()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .get(&Monomial::one())
                .cloned()
                .unwrap_or_else(Rational::zero),
        )
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &DPolynomial) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::AlgebraMismatch(
                "operands belong to different polynomial rings".to_string(),
            ))
        }
    }

    pub fn try_add(&self, other: &DPolynomial) -> Result<DPolynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &DPolynomial) -> Result<DPolynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &DPolynomial) -> Result<DPolynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = DPolynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &Rational) -> DPolynomial {
        if c.is_zero() {
            return DPolynomial::zero(&self.ring);
        }
        DPolynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> DPolynomial {
        let mut base = self.clone();
        let mut acc = DPolynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by a single monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> DPolynomial {
        DPolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// All variables that occur.
    pub fn variables(&self) -> BTreeSet<DVariable> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// Highest-ranked variable; `None` for constants.
    pub fn leader(&self) -> Option<DVariable> {
        let ranking = self.ranking();
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v))
            .max_by(|a, b| ranking.cmp_vars(a, b))
            .cloned()
    }

    pub fn degree_in(&self, v: &DVariable) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Degree in the leader; 0 for constants.
    pub fn degree(&self) -> u32 {
        self.leader().map_or(0, |u| self.degree_in(&u))
    }

    pub fn rank(&self) -> PolyRank {
        match self.leader() {
            Some(u) => PolyRank {
                degree: self.degree_in(&u),
                leader: Some(u),
            },
            None => PolyRank {
                leader: None,
                degree: 0,
            },
        }
    }

    pub fn rank_cmp(&self, other: &DPolynomial) -> Result<Ordering, PolyError> {
        self.check_ring(other)?;
        Ok(self.rank().compare(&other.rank(), self.ranking()))
    }

    /// The coefficient of `v^k`, free of `v`.
    pub fn coefficient(&self, v: &DVariable, k: u32) -> DPolynomial {
        let mut out = DPolynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            if e == k {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// `[g_0, g_1, ..., g_d]` with `self = sum g_n v^n` and each `g_n` free of `v`.
    pub fn coefficients_in(&self, v: &DVariable) -> Vec<DPolynomial> {
        let d = self.degree_in(v);
        let mut out = vec![DPolynomial::zero(&self.ring); d as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: &DVariable) -> DPolynomial {
        let mut out = DPolynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            if e > 0 {
                out.add_term(
                    rest.mul(&Monomial::var(v.clone(), e - 1)),
                    c * Rational::from_integer(e.into()),
                );
            }
        }
        out
    }

    pub fn initial(&self) -> Result<DPolynomial, PolyError> {
        let u = self
            .leader()
            .ok_or_else(|| PolyError::ConstantPolynomial(self.to_string()))?;
        Ok(self.coefficient(&u, self.degree_in(&u)))
    }

    pub fn separant(&self) -> Result<DPolynomial, PolyError> {
        let u = self
            .leader()
            .ok_or_else(|| PolyError::ConstantPolynomial(self.to_string()))?;
        Ok(self.partial(&u))
    }

    /// Applies a variable substitution `v -> f(v)` monomial by monomial.
    pub fn map_vars(&self, f: impl Fn(&DVariable) -> DVariable) -> DPolynomial {
        let mut out = DPolynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(&f), c.clone());
        }
        out
    }

    /// Terms in canonical (descending) order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let ranking = self.ranking();
        let mut ts: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        ts.sort_by(|a, b| monomial_cmp(ranking, b.0, a.0));
        ts
    }

    /// Coefficient of the greatest monomial in canonical order.
    pub fn leading_coefficient(&self) -> Option<Rational> {
        self.sorted_terms().first().map(|(_, c)| (*c).clone())
    }

    /// Scales so that the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> DPolynomial {
        match self.leading_coefficient() {
            Some(c) => self.scalar_mul(&c.recip()),
            None => self.clone(),
        }
    }

    /// Total order on polynomials following the printed form.
    pub fn canonical_cmp(&self, other: &DPolynomial) -> Ordering {
        let ranking = self.ranking();
        let (a, b) = (self.sorted_terms(), other.sorted_terms());
        for (x, y) in a.iter().zip(&b) {
            let c = monomial_cmp(ranking, x.0, y.0).then_with(|| x.1.cmp(y.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialEq for DPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_ring(&self.ring, &other.ring)
    }
}

impl Eq for DPolynomial {}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, ranking: &Ranking) -> fmt::Result {
    let mut fs = m.ranked_desc(ranking);
    fs.reverse();
    for (k, (v, e)) in fs.iter().enumerate() {
        if k > 0 {
            f.write_str(" * ")?;
        }
        write!(f, "{v}")?;
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    m: &Monomial,
    c: &Rational,
    ranking: &Ranking,
) -> fmt::Result {
    if m.is_one() {
        return f.write_str(&format_rational(c));
    }
    if (-c).is_one() {
        f.write_str("-")?;
    } else if !c.is_one() {
        write!(f, "{} * ", format_rational(c))?;
    }
    write_monomial(f, m, ranking)
}

impl fmt::Display for DPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let ranking = self.ranking();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            if k == 0 {
                write_term(f, m, c, ranking)?;
            } else if is_negative(c) {
                f.write_str(" - ")?;
                write_term(f, m, &c.abs(), ranking)?;
            } else {
                f.write_str(" + ")?;
                write_term(f, m, c, ranking)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DPolynomial({self})")
    }
}

// The operator impls panic on operands from different rings; use the
// `try_*` methods where that can happen.
impl Add for &DPolynomial {
    type Output = DPolynomial;
    fn add(self, rhs: &DPolynomial) -> DPolynomial {
        self.try_add(rhs).expect("operands from the same ring")
    }
}

impl Sub for &DPolynomial {
    type Output = DPolynomial;
    fn sub(self, rhs: &DPolynomial) -> DPolynomial {
        self.try_sub(rhs).expect("operands from the same ring")
    }
}

impl Mul for &DPolynomial {
    type Output = DPolynomial;
    fn mul(self, rhs: &DPolynomial) -> DPolynomial {
        self.try_mul(rhs).expect("operands from the same ring")
    }
}

impl Neg for &DPolynomial {
    type Output = DPolynomial;
    fn neg(self) -> DPolynomial {
        self.scalar_mul(&-Rational::one())
    }
}

impl Add for DPolynomial {
    type Output = DPolynomial;
    fn add(self, rhs: DPolynomial) -> DPolynomial {
        &self + &rhs
    }
}

impl Sub for DPolynomial {
    type Output = DPolynomial;
    fn sub(self, rhs: DPolynomial) -> DPolynomial {
        &self - &rhs
    }
}

impl Mul for DPolynomial {
    type Output = DPolynomial;
    fn mul(self, rhs: DPolynomial) -> DPolynomial {
        &self * &rhs
    }
}

impl Neg for DPolynomial {
    type Output = DPolynomial;
    fn neg(self) -> DPolynomial {
        -&self
    }
}
