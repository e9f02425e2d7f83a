//! Ordinary differential polynomials and Ritt reduction, written
//! independently of the operator machinery so they can serve as an oracle.
//!
//! Also holds the maps between the dual-number ring and the ordinary
//! differential ring, and the check that a product of fields gives a
//! purely difference setting.

use crate::dalgebra::DAlgebra;
use crate::ordering::{DVariable, MultiIndex};
use crate::poly::{DPolynomial, Monomial, PolyRing};
use crate::rational::{format_rational, Rational};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("WrongAlgebra: {0}")]
    WrongAlgebra(String),
    #[error("ConstantDivisor: cannot reduce by the constant {0}")]
    ConstantDivisor(String),
    #[error("DuplicateLeaders: members {0} and {1} share a leader")]
    DuplicateLeaders(usize, usize),
}

/// `D^order x_var`. Ordered by order first, then by indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiffVar {
    pub var: u32,
    pub order: u32,
}

impl Ord for DiffVar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order, self.var).cmp(&(other.order, other.var))
    }
}

impl PartialOrd for DiffVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DiffVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.var)?;
        for _ in 0..self.order {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// Exponent vector keyed by variable; no zero exponents.
type Mono = BTreeMap<DiffVar, u32>;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiffPolynomial {
    terms: BTreeMap<Vec<(DiffVar, u32)>, Rational>,
}

fn key(m: &Mono) -> Vec<(DiffVar, u32)> {
    m.iter().map(|(v, e)| (*v, *e)).collect()
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(&Mono::new(), c);
        p
    }

    pub fn var(var: u32, order: u32) -> Self {
        let mut m = Mono::new();
        m.insert(DiffVar { var, order }, 1);
        let mut p = Self::zero();
        p.add_term(&m, Rational::one());
        p
    }

    fn add_term(&mut self, m: &Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        let k = key(m);
        let entry = self.terms.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn monos(&self) -> impl Iterator<Item = (Mono, &Rational)> {
        self.terms
            .iter()
            .map(|(k, c)| (k.iter().copied().collect::<Mono>(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.is_empty())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, a) in self.monos() {
            out.add_term(&m, a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn leader(&self) -> Option<DiffVar> {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|(v, _)| *v))
            .max()
    }

    pub fn degree_in(&self, v: DiffVar) -> u32 {
        self.terms
            .keys()
            .map(|k| k.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `v^k`, free of `v`.
    pub fn coefficient(&self, v: DiffVar, k: u32) -> Self {
        let mut out = Self::zero();
        for (mut m, c) in self.monos() {
            if m.get(&v).copied().unwrap_or(0) == k {
                m.remove(&v);
                out.add_term(&m, c.clone());
            }
        }
        out
    }

    pub fn partial(&self, v: DiffVar) -> Self {
        let mut out = Self::zero();
        for (mut m, c) in self.monos() {
            let Some(e) = m.get(&v).copied() else {
                continue;
            };
            if e == 1 {
                m.remove(&v);
            } else {
                m.insert(v, e - 1);
            }
            out.add_term(&m, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// The derivation `D`, extended from `D(D^i x) = D^{i+1} x` by Leibniz.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.monos() {
            for (v, e) in &m {
                let mut n = m.clone();
                if *e == 1 {
                    n.remove(v);
                } else {
                    n.insert(*v, e - 1);
                }
                let w = DiffVar {
                    var: v.var,
                    order: v.order + 1,
                };
                *n.entry(w).or_insert(0) += 1;
                out.add_term(&n, c * Rational::from_integer((*e).into()));
            }
        }
        out
    }

    pub fn nth_derivative(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn initial(&self) -> Option<Self> {
        let u = self.leader()?;
        Some(self.coefficient(u, self.degree_in(u)))
    }

    pub fn separant(&self) -> Option<Self> {
        Some(self.partial(self.leader()?))
    }

    fn variables(&self) -> Vec<DiffVar> {
        let mut vs: Vec<DiffVar> = self
            .terms
            .keys()
            .flat_map(|k| k.iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Highest monomial first: compare variable lists from the top down.
        let mut ts: Vec<_> = self.terms.iter().collect();
        let desc = |k: &Vec<(DiffVar, u32)>| k.iter().rev().copied().collect::<Vec<_>>();
        ts.sort_by_key(|t| std::cmp::Reverse(desc(t.0)));
        for (n, (k, c)) in ts.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if k.is_empty() {
                f.write_str(&format_rational(&a))?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{} * ", format_rational(&a))?;
            }
            for (i, (v, e)) in k.iter().enumerate() {
                if i > 0 {
                    f.write_str(" * ")?;
                }
                write!(f, "{v}")?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn add(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        for (m, c) in rhs.monos() {
            out.add_term(&m, c.clone());
        }
        out
    }
}

impl Neg for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn neg(self) -> DiffPolynomial {
        self.scale(&-Rational::one())
    }
}

impl Sub for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn sub(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        self + &-rhs
    }
}

impl Mul for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn mul(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (m1, c1) in self.monos() {
            for (m2, c2) in rhs.monos() {
                let mut m = m1.clone();
                for (v, e) in m2 {
                    *m.entry(v).or_insert(0) += e;
                }
                out.add_term(&m, c1 * c2);
            }
        }
        out
    }
}

/// `H * g = remainder + sum c * D^order(A[member])`.
#[derive(Clone, Debug, PartialEq)]
pub struct RittCertificate {
    pub h: DiffPolynomial,
    pub remainder: DiffPolynomial,
    pub cofactors: Vec<(DiffPolynomial, u32, usize)>,
}

impl RittCertificate {
    pub fn holds(&self, g: &DiffPolynomial, set: &[DiffPolynomial]) -> bool {
        let mut rhs = self.remainder.clone();
        for (c, order, member) in &self.cofactors {
            rhs = &rhs + &(c * &set[*member].nth_derivative(*order));
        }
        &self.h * g == rhs
    }
}

/// Classical Ritt reduction. At each step the highest offending variable
/// is removed; ties go to the member with the highest leader, then the
/// lowest index. Proper derivatives of a leader are cleared with the
/// separant, powers of the leader itself with the initial.
pub fn ritt_reduce(
    g: &DiffPolynomial,
    set: &[DiffPolynomial],
) -> Result<RittCertificate, ClassicalError> {
    let mut ls = Vec::new();
    for (i, a) in set.iter().enumerate() {
        let u = a
            .leader()
            .ok_or_else(|| ClassicalError::ConstantDivisor(a.to_string()))?;
        if let Some(j) = ls.iter().position(|(w, _)| *w == u) {
            return Err(ClassicalError::DuplicateLeaders(j, i));
        }
        ls.push((u, a.degree_in(u)));
    }
    let mut cur = g.clone();
    let mut h = DiffPolynomial::constant(Rational::one());
    let mut cofactors: Vec<(DiffPolynomial, u32, usize)> = Vec::new();
    loop {
        let mut pick: Option<(DiffVar, DiffVar, usize, u32)> = None;
        for v in cur.variables() {
            let k = cur.degree_in(v);
            for (i, (u, d)) in ls.iter().enumerate() {
                if v.var != u.var || v.order < u.order {
                    continue;
                }
                let i_order = v.order - u.order;
                if i_order == 0 && k < *d {
                    continue;
                }
                let better = match pick {
                    None => true,
                    Some((bv, bu, bi, _)) => {
                        (v, *u, std::cmp::Reverse(i)) > (bv, bu, std::cmp::Reverse(bi))
                    }
                };
                if better {
                    pick = Some((v, *u, i, i_order));
                }
            }
        }
        let Some((v, _, i, order)) = pick else {
            break;
        };
        let a = &set[i];
        let k = cur.degree_in(v);
        let g1 = cur.coefficient(v, k);
        let (m, drop_by) = if order > 0 {
            (a.separant().expect("non-constant"), 1)
        } else {
            (a.initial().expect("non-constant"), ls[i].1)
        };
        let q = &g1 * &DiffPolynomial::var(v.var, v.order).pow(k - drop_by);
        cur = &(&m * &cur) - &(&q * &a.nth_derivative(order));
        for c in &mut cofactors {
            c.0 = &m * &c.0;
        }
        cofactors.push((q, order, i));
        h = &h * &m;
    }
    Ok(RittCertificate {
        h,
        remainder: cur,
        cofactors,
    })
}

fn require_dual(algebra: &DAlgebra) -> Result<(), ClassicalError> {
    if algebra.is_dual_numbers() {
        Ok(())
    } else {
        Err(ClassicalError::WrongAlgebra(
            "expected the dual numbers".into(),
        ))
    }
}

/// Collapses the endomorphism slot: `d^(a,b) x_j` goes to `D^b x_j`.
pub fn project_to_differential(f: &DPolynomial) -> Result<DiffPolynomial, ClassicalError> {
    require_dual(f.algebra())?;
    let mut out = DiffPolynomial::zero();
    for (m, c) in f.terms() {
        let mut mono = Mono::new();
        for (v, e) in m.factors() {
            let w = DiffVar {
                var: v.var,
                order: v.theta.entries()[1],
            };
            *mono.entry(w).or_insert(0) += e;
        }
        out.add_term(&mono, c.clone());
    }
    Ok(out)
}

/// Embeds `D^i x_j` as `d^(0,i) x_j` in a ring over the dual numbers.
pub fn lift_to_dual(
    f: &DiffPolynomial,
    ring: &Arc<PolyRing>,
) -> Result<DPolynomial, ClassicalError> {
    require_dual(ring.algebra())?;
    let terms = f.terms.iter().map(|(k, c)| {
        let factors = k
            .iter()
            .map(|(v, e)| (DVariable::new(v.var, MultiIndex::new(vec![0, v.order])), *e))
            .collect();
        (Monomial::from_factors(factors), c.clone())
    });
    Ok(DPolynomial::from_terms(ring, terms))
}

/// For a product of copies of the base field: the number of endomorphism
/// slots, all slots being endomorphisms.
pub fn difference_specialize(algebra: &DAlgebra) -> Result<usize, ClassicalError> {
    if !algebra.is_difference_only() {
        return Err(ClassicalError::WrongAlgebra(
            "algebra has derivation slots".into(),
        ));
    }
    Ok(algebra.slot_count())
}
