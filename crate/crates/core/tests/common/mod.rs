//! Seeded random inputs shared by the integration tests and benches.
#![allow(dead_code)]

use dstar::dalgebra::{validate_algebra, Builtin};
use dstar::ordering::{DVariable, MultiIndex, Ranking};
use dstar::poly::{DPolynomial, Monomial, PolyRing};
use dstar::rational::int;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The builtins exercised by the randomized checks.
pub fn builtins() -> Vec<(&'static str, Builtin)> {
    vec![
        ("dual", Builtin::Dual),
        ("fields:2", Builtin::Fields(2)),
        ("hs:2", Builtin::TruncatedHs(2)),
        ("hs:3", Builtin::TruncatedHs(3)),
        ("dd:1,1", Builtin::DiffDifference(1, 1)),
        ("dd:2,1", Builtin::DiffDifference(2, 1)),
    ]
}

pub fn ring(b: Builtin, n: u32) -> Arc<PolyRing> {
    PolyRing::new(
        Arc::new(validate_algebra(&b.spec()).unwrap()),
        n,
        Ranking::Sequential,
    )
}

/// A multi-index with entry sum at most `max_total`.
pub fn theta(r: &mut impl Rng, slots: usize, max_total: u32) -> MultiIndex {
    let total = r.random_range(0..=max_total);
    let mut e = vec![0; slots];
    for _ in 0..total {
        e[r.random_range(0..slots)] += 1;
    }
    MultiIndex::new(e)
}

/// A multi-index using only the given slots.
pub fn theta_in(r: &mut impl Rng, slots: usize, allowed: &[usize], max_total: u32) -> MultiIndex {
    let total = r.random_range(0..=max_total);
    let mut e = vec![0; slots];
    for _ in 0..total {
        e[allowed[r.random_range(0..allowed.len())]] += 1;
    }
    MultiIndex::new(e)
}

pub fn variable(r: &mut impl Rng, ring: &PolyRing, max_total: u32) -> DVariable {
    DVariable::new(
        r.random_range(1..=ring.nvars()),
        theta(r, ring.slots(), max_total),
    )
}

/// Up to `max_terms` terms, each of total degree at most `max_deg`, with
/// small nonzero integer coefficients.
pub fn poly(
    r: &mut impl Rng,
    ring: &Arc<PolyRing>,
    max_terms: usize,
    max_deg: u32,
    max_total: u32,
) -> DPolynomial {
    let nterms = r.random_range(1..=max_terms);
    let terms = (0..nterms).map(|_| {
        let deg = r.random_range(0..=max_deg);
        let factors = (0..deg)
            .map(|_| (variable(r, ring, max_total), 1))
            .collect();
        let mut c = r.random_range(-3..=3);
        if c == 0 {
            c = 1;
        }
        (Monomial::from_factors(factors), int(c))
    });
    DPolynomial::from_terms(ring, terms.collect::<Vec<_>>())
}

pub fn nonconstant(
    r: &mut impl Rng,
    ring: &Arc<PolyRing>,
    max_terms: usize,
    max_deg: u32,
    max_total: u32,
) -> DPolynomial {
    loop {
        let p = poly(r, ring, max_terms, max_deg, max_total);
        if !p.is_constant() {
            return p;
        }
    }
}

/// Up to `size` non-constant polynomials with pairwise distinct leaders.
pub fn divisor_set(
    r: &mut impl Rng,
    ring: &Arc<PolyRing>,
    size: usize,
    max_deg: u32,
    max_total: u32,
) -> Vec<DPolynomial> {
    let mut out: Vec<DPolynomial> = Vec::new();
    for _ in 0..size {
        let p = nonconstant(r, ring, 2, max_deg, max_total);
        if out.iter().all(|q| q.leader() != p.leader()) {
            out.push(p);
        }
    }
    out
}
pub mod golden;
