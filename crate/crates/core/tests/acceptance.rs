//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

mod common;

use common::{builtins, ring};
use dstar::charset::{
    charset_complete, closure_step_witness, compare_autoreduced, validate_autoreduced,
    AutoreducedOrder, AutoreducedSet, CharsetError, ClosureVerdict, ClosureWitness, Rejection,
};
use dstar::classical::{lift_to_dual, project_to_differential, ritt_reduce, DiffPolynomial};
use dstar::dalgebra::{validate_algebra, AlgebraError, AlgebraSpec, Builtin, DAlgebra};
use dstar::expr::parse_polynomial;
use dstar::operators::{
    apply, apply_composition, apply_slot_index, block_image, multiply_images, rho,
};
use dstar::ordering::{
    dickson_minimal, ord_delta, sequential_predecessor_count, DVariable, MultiIndex, Ranking,
};
use dstar::par::Execution;
use dstar::poly::{DPolynomial, PolyRank, PolyRing};
use dstar::rational::{int, Rational};
use dstar::reduction::{
    is_reduced_wrt_set, reduce, verify_certificate, Cofactor, FactorSource, StepCase,
};
use num_traits::Zero;
use rand::Rng;
use std::cmp::Ordering;
use std::sync::Arc;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "algebra validation", c1_algebra_validation),
        (2, "homomorphism and product rule", c2_homomorphism),
        (3, "commutation", c3_commutation),
        (4, "ranking axioms", c4_ranking),
        (5, "rank-drop properties", c5_rank_drop),
        (6, "reduction certificates", c6_reduction),
        (7, "classical oracle equivalence", c7_oracle),
        (8, "characteristic sets", c8_charsets),
        (9, "Dickson minimality", c9_dickson),
        (10, "closure witnesses", c10_closure),
        (11, "CLI determinism", c11_cli),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    for (n, name, check) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                println!("criterion {n:>2} FAIL  {name}: {detail} ({secs:.1}s)");
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- 1

/// Rank of a list of vectors by Gaussian elimination.
fn rank_of(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in 0..cols {
                    let sub = &rows[rank][k] * &f;
                    rows[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Depth of each nilpotent basis element, from spans of products of
/// nilpotent basis elements.
fn nu_oracle(alg: &DAlgebra, block: usize) -> Vec<u32> {
    let dim = alg.basis_names(block).len();
    let unit = |j: usize| {
        let mut v = vec![Rational::zero(); dim];
        v[j] = int(1);
        v
    };
    let gens: Vec<Vec<Rational>> = (1..dim).map(unit).collect();
    let mut power = gens.clone();
    let mut powers = vec![power.clone()];
    while rank_of(power.clone()) > 0 {
        let mut next = Vec::new();
        for a in &power {
            for b in &gens {
                next.push(alg.multiply(block, a, b));
            }
        }
        power = next;
        powers.push(power.clone());
    }
    (1..dim)
        .map(|j| {
            powers
                .iter()
                .filter(|span| {
                    let mut with = (*span).clone();
                    with.push(unit(j));
                    rank_of(with) == rank_of((*span).clone())
                })
                .count() as u32
        })
        .collect()
}

fn c1_algebra_validation() -> Outcome {
    let mut all = vec![Builtin::Dual];
    for k in 1..=3 {
        all.push(Builtin::Fields(k));
        all.push(Builtin::TruncatedHs(k));
        for m in 0..=3 {
            all.push(Builtin::DiffDifference(k, m));
        }
    }
    for b in &all {
        let alg = validate_algebra(&b.spec()).map_err(|e| format!("{b:?}: {e}"))?;
        for block in 1..=alg.block_count() {
            let want = nu_oracle(&alg, block);
            let got: Vec<u32> = (1..=alg.nilpotent_count(block))
                .map(|j| alg.nu(block, j).unwrap())
                .collect();
            ensure(got == want, || {
                format!("{b:?} block {block}: nu {got:?}, oracle {want:?}")
            })?;
        }
    }
    let e4 = validate_algebra(&Builtin::TruncatedHs(3).spec()).unwrap();
    let nu = nu_oracle(&e4, 1);
    ensure(nu == [1, 2, 3], || format!("e^4 oracle gives {nu:?}"))?;
    let got: Vec<u32> = (1..=3).map(|j| e4.nu(1, j).unwrap()).collect();
    ensure(got == [1, 2, 3], || format!("e^4 nu {got:?}"))?;

    let misordered = AlgebraSpec::from_json(
        r#"{"blocks":[{"basis":["1","e2","e"],"table":{"e*e":[["e2","1"]],"e*e2":[],"e2*e2":[]}}]}"#,
    )
    .unwrap();
    match validate_algebra(&misordered) {
        Err(AlgebraError::RankedBasisViolation { .. }) => {}
        other => return Err(format!("misordered basis gave {other:?}")),
    }
    Ok(format!(
        "{} builtins valid, nu(e^4) = (1,2,3), misordered basis rejected",
        all.len()
    ))
}

// ---------------------------------------------------------------- 2

const PER_ALGEBRA: usize = 500;

fn c2_homomorphism() -> Outcome {
    let mut r = common::rng(2);
    let mut checked = 0;
    for (name, b) in builtins() {
        let ring = ring(b, 2);
        let alg = ring.algebra();
        for _ in 0..PER_ALGEBRA {
            let f = common::poly(&mut r, &ring, 3, 3, 3);
            let g = common::poly(&mut r, &ring, 3, 3, 3);
            let fg = &f * &g;
            for block in 1..=alg.block_count() {
                let lhs = block_image(&fg, block).unwrap();
                let rhs = multiply_images(
                    alg,
                    block,
                    &block_image(&f, block).unwrap(),
                    &block_image(&g, block).unwrap(),
                );
                ensure(lhs == rhs, || {
                    format!("{name}: image of ({f})*({g}) in block {block}")
                })?;
            }
            if matches!(b, Builtin::Dual | Builtin::TruncatedHs(2)) {
                let m = alg.nilpotent_count(1);
                let op = |h: &DPolynomial, j| apply(h, 1, j).unwrap();
                for i in 0..=m {
                    let mut want = DPolynomial::zero(&ring);
                    for j in 0..=i {
                        want = &want + &(&op(&f, j) * &op(&g, i - j));
                    }
                    ensure(op(&fg, i) == want, || {
                        format!("{name}: coordinate {i} of ({f})*({g})")
                    })?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} pairs over {} algebras",
        builtins().len()
    ))
}

// ---------------------------------------------------------------- 3

fn c3_commutation() -> Outcome {
    let mut r = common::rng(3);
    let mut checked = 0;
    for (name, b) in builtins() {
        let ring = ring(b, 2);
        let m = ring.slots();
        for _ in 0..PER_ALGEBRA {
            let f = common::poly(&mut r, &ring, 3, 3, 2);
            let once: Vec<DPolynomial> = (0..m).map(|s| apply_slot_index(&f, s).unwrap()).collect();
            for a in 0..m {
                for c in a + 1..m {
                    let ac = apply_slot_index(&once[c], a).unwrap();
                    let ca = apply_slot_index(&once[a], c).unwrap();
                    ensure(ac == ca, || {
                        format!("{name}: slots {a},{c} disagree on {f}")
                    })?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} polynomials, all slot pairs"))
}

// ---------------------------------------------------------------- 4

fn all_variables(nvars: u32, slots: usize, max_total: u32) -> Vec<DVariable> {
    fn rec(slots: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == slots {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(slots, left - k, cur, out);
            cur.pop();
        }
    }
    let mut thetas = Vec::new();
    rec(slots, max_total, &mut Vec::new(), &mut thetas);
    let mut out = Vec::new();
    for j in 1..=nvars {
        for t in &thetas {
            out.push(DVariable::new(j, MultiIndex::new(t.clone())));
        }
    }
    out
}

fn c4_ranking() -> Outcome {
    let mut r = common::rng(4);
    let rk = Ranking::Sequential;
    let mut pairs = 0;
    for (name, b) in builtins() {
        let ring = ring(b, 2);
        let alg = ring.algebra();
        let m = ring.slots();
        let vars: Vec<DVariable> = (0..1000)
            .map(|_| common::variable(&mut r, &ring, 4))
            .collect();
        for (k, u) in vars.iter().enumerate() {
            let v = &vars[(k + 1) % vars.len()];
            for s in 0..m {
                ensure(rk.cmp_vars(u, &u.shifted(s)) == Ordering::Less, || {
                    format!("{name}: {u} not below its image in slot {s}")
                })?;
                if rk.cmp_vars(u, v) == Ordering::Less {
                    ensure(
                        rk.cmp_vars(&u.shifted(s), &v.shifted(s)) == Ordering::Less,
                        || format!("{name}: slot {s} does not preserve {u} < {v}"),
                    )?;
                }
                for t in 0..m {
                    let (bs, _) = alg.slot_position(s);
                    let (bt, _) = alg.slot_position(t);
                    if bs == bt && alg.slot_nu(s) < alg.slot_nu(t) {
                        ensure(
                            rk.cmp_vars(&u.shifted(s), &u.shifted(t)) == Ordering::Less,
                            || format!("{name}: depth axiom fails at {u}, slots {s},{t}"),
                        )?;
                    }
                }
                pairs += 1;
            }
            ensure(rk.cmp_vars(u, v) == rk.cmp_vars(v, u).reverse(), || {
                format!("{name}: comparison of {u} and {v} is not antisymmetric")
            })?;
        }
    }
    // Predecessor counts against enumeration of every variable of no higher order.
    let ring = ring(Builtin::TruncatedHs(2), 2);
    for _ in 0..50 {
        let v = common::variable(&mut r, &ring, 4);
        let below = all_variables(2, ring.slots(), v.theta.total())
            .iter()
            .filter(|w| rk.cmp_vars(w, &v) == Ordering::Less)
            .count() as u128;
        let got = sequential_predecessor_count(&v, 2);
        ensure(got == below, || {
            format!("{v}: count {got}, enumeration {below}")
        })?;
    }
    Ok(format!(
        "{pairs} variable/slot checks, 50 predecessor counts"
    ))
}

// ---------------------------------------------------------------- 5

fn rank_of_power(v: &DVariable, d: u32) -> PolyRank {
    PolyRank {
        leader: Some(v.clone()),
        degree: d,
    }
}

fn below(p: &DPolynomial, bound: &PolyRank, rk: &Ranking) -> bool {
    p.rank().compare(bound, rk) == Ordering::Less
}

fn c5_rank_drop() -> Outcome {
    let mut r = common::rng(5);
    let mut checked = 0;
    for (name, b) in builtins() {
        let ring = ring(b, 2);
        let alg = ring.algebra();
        let rk = ring.ranking().clone();
        let m = ring.slots();
        let sigma: Vec<usize> = (0..m).filter(|&s| alg.is_sigma_slot(s)).collect();
        let delta: Vec<usize> = (0..m).filter(|&s| !alg.is_sigma_slot(s)).collect();
        for _ in 0..PER_ALGEBRA {
            let f = common::nonconstant(&mut r, &ring, 3, 3, 2);
            let u = f.leader().unwrap();
            let d = f.degree();
            let s_f = f.separant().unwrap();
            let i_f = f.initial().unwrap();
            // Single derivation slots.
            for &slot in &delta {
                let (block, _) = alg.slot_position(slot);
                let s_slot = alg.slot(block, 0).unwrap();
                let du = u.shifted(slot);
                let lhs = &apply_slot_index(&f, slot).unwrap()
                    - &(&apply_slot_index(&s_f, s_slot).unwrap() * &var(&ring, &du));
                ensure(below(&lhs, &rank_of_power(&du, 1), &rk), || {
                    format!("{name}: slot {slot} on {f}")
                })?;
            }
            // Endomorphism compositions.
            let tau = common::theta_in(&mut r, m, &sigma, 2);
            let tu = u.shifted_by(&tau);
            let h = &apply_composition(&tau, &f).unwrap()
                - &(&apply_composition(&tau, &i_f).unwrap() * &var(&ring, &tu).pow(d));
            ensure(below(&h, &rank_of_power(&tu, d), &rk), || {
                format!("{name}: tau {tau} on {f}")
            })?;
            // Compositions with a derivation.
            if !delta.is_empty() {
                let mut psi = common::theta(&mut r, m, 2);
                if ord_delta(alg, &psi) == 0 {
                    psi = psi.add_slot(delta[r.random_range(0..delta.len())]);
                }
                let pu = u.shifted_by(&psi);
                let lead = apply_composition(&rho(alg, &psi), &s_f).unwrap();
                let rest = &apply_composition(&psi, &f).unwrap() - &(&lead * &var(&ring, &pu));
                ensure(below(&rest, &rank_of_power(&pu, 1), &rk), || {
                    format!("{name}: psi {psi} on {f}")
                })?;
                ensure(below(&lead, &rank_of_power(&pu, 1), &rk), || {
                    format!("{name}: rho({psi}) of the separant of {f}")
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} polynomials"))
}

fn var(ring: &Arc<PolyRing>, v: &DVariable) -> DPolynomial {
    DPolynomial::variable(ring, v.clone()).unwrap()
}

// ---------------------------------------------------------------- 6

fn c6_reduction() -> Outcome {
    let mut r = common::rng(6);
    let mut checked = 0;
    let mut steps = 0;
    for (name, b) in builtins() {
        let ring = ring(b, 2);
        let alg = ring.algebra();
        let rk = ring.ranking().clone();
        for _ in 0..PER_ALGEBRA {
            let set = common::divisor_set(&mut r, &ring, 2, 3, 3);
            let g = common::poly(&mut r, &ring, 3, 3, 3);
            let cert = reduce(&g, &set).map_err(|e| format!("{name}: {e}"))?;
            let ctx = || format!("{name}: g = {g}, A = {set:?}");
            ensure(verify_certificate(&g, &set, &cert), || {
                format!("certificate rejected, {}", ctx())
            })?;
            ensure(is_reduced_wrt_set(&cert.remainder, &set).unwrap(), || {
                format!("remainder not reduced, {}", ctx())
            })?;
            ensure(
                cert.remainder.rank().compare(&g.rank(), &rk) != Ordering::Greater,
                || format!("remainder rank grew, {}", ctx()),
            )?;
            for f in &cert.h_factors {
                ensure(
                    ord_delta(alg, &f.theta) == 0 && f.member < set.len(),
                    || format!("bad multiplier factor, {}", ctx()),
                )?;
                ensure(
                    matches!(f.source, FactorSource::Initial | FactorSource::Separant),
                    ctx,
                )?;
            }
            for w in cert.steps.windows(2) {
                let dropped = rk
                    .cmp_vars(&w[1].var, &w[0].var)
                    .then(w[1].degree.cmp(&w[0].degree));
                ensure(dropped == Ordering::Less, || {
                    format!("measure did not drop, {}", ctx())
                })?;
            }
            steps += cert.steps.len();
            checked += 1;
        }
    }
    let ring = ring(Builtin::Dual, 1);
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    let set = [p("x1[0,1]^2 - 4*x1")];
    let cert = reduce(&p("x1[0,2]"), &set).unwrap();
    ensure(cert.remainder == p("4*x1[0,1]"), || {
        format!("worked example remainder {}", cert.remainder)
    })?;
    let h = cert.multiplier(&set).unwrap();
    ensure(h == p("2*x1[1,1]"), || format!("worked example H = {h}"))?;
    Ok(format!(
        "{checked} instances, {steps} steps, worked example g0 = 4*x1[0,1], H = {h}"
    ))
}

// ---------------------------------------------------------------- 7

fn diff_poly(
    r: &mut impl Rng,
    nvars: u32,
    max_order: u32,
    max_deg: u32,
    max_terms: usize,
) -> DiffPolynomial {
    let mut p = DiffPolynomial::zero();
    for _ in 0..r.random_range(1..=max_terms) {
        let mut c = r.random_range(-3..=3);
        if c == 0 {
            c = 1;
        }
        let mut t = DiffPolynomial::constant(int(c));
        for _ in 0..r.random_range(0..=max_deg) {
            t = &t * &DiffPolynomial::var(r.random_range(1..=nvars), r.random_range(0..=max_order));
        }
        p = &p + &t;
    }
    p
}

fn c7_oracle() -> Outcome {
    let mut r = common::rng(7);
    let nvars = 2;
    let ring = ring(Builtin::Dual, nvars);
    let (mut agree, mut certs_ok, mut total) = (0, 0, 0);
    let mut first_mismatch = None;
    while total < 200 {
        let mut set: Vec<DiffPolynomial> = Vec::new();
        for _ in 0..2 {
            let a = diff_poly(&mut r, nvars, 3, 3, 2);
            if !a.is_constant() && set.iter().all(|b| b.leader() != a.leader()) {
                set.push(a);
            }
        }
        if set.is_empty() {
            continue;
        }
        let g = diff_poly(&mut r, nvars, 3, 3, 3);
        let lifted: Vec<DPolynomial> = set
            .iter()
            .map(|a| lift_to_dual(a, &ring).unwrap())
            .collect();
        let lg = lift_to_dual(&g, &ring).unwrap();
        let cert = reduce(&lg, &lifted).map_err(|e| e.to_string())?;
        let projected = project_to_differential(&cert.remainder).unwrap();
        let classical = ritt_reduce(&g, &set).map_err(|e| e.to_string())?;
        if projected == classical.remainder {
            agree += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(format!(
                "g = {g}, A = {set:?}: projected {projected}, classical {}",
                classical.remainder
            ));
        }
        // The projection is a differential ring map, so the projected
        // certificate is a classical identity in its own right.
        let ph = project_to_differential(&cert.multiplier(&lifted).unwrap()).unwrap();
        let mut rhs = projected.clone();
        for c in &cert.cofactors {
            let pc = project_to_differential(&c.c).unwrap();
            rhs = &rhs + &(&pc * &set[c.member].nth_derivative(c.theta.entries()[1]));
        }
        if &ph * &g == rhs {
            certs_ok += 1;
        }
        total += 1;
    }
    // Difference specialisation: only endomorphism steps.
    let f2 = common::ring(Builtin::Fields(2), 2);
    let mut sigma_only = 0;
    for _ in 0..200 {
        let set = common::divisor_set(&mut r, &f2, 2, 3, 3);
        let g = common::poly(&mut r, &f2, 3, 3, 3);
        let cert = reduce(&g, &set).map_err(|e| e.to_string())?;
        if cert.steps.iter().all(|s| s.case == StepCase::Sigma) {
            sigma_only += 1;
        }
    }
    let summary = format!(
        "{agree}/{total} projected remainders equal the classical ones; {certs_ok}/{total} projected certificates hold; {sigma_only}/200 fields:2 traces sigma-only"
    );
    if agree == total && certs_ok == total && sigma_only == 200 {
        Ok(summary)
    } else {
        Err(format!(
            "{summary}; first mismatch: {}",
            first_mismatch.unwrap_or_default()
        ))
    }
}

// ---------------------------------------------------------------- 8

/// Literal evaluation of the two clauses defining `A < B`.
fn def_less(a: &AutoreducedSet, b: &AutoreducedSet) -> bool {
    let (am, bm) = (a.members(), b.members());
    let rk = |x: &DPolynomial, y: &DPolynomial| x.rank().compare(&y.rank(), x.ranking());
    let first = (0..am.len().min(bm.len())).any(|i| {
        rk(&am[i], &bm[i]) == Ordering::Less
            && (0..i).all(|j| rk(&am[j], &bm[j]) == Ordering::Equal)
    });
    let second =
        bm.len() < am.len() && (0..bm.len()).all(|i| rk(&am[i], &bm[i]) == Ordering::Equal);
    first || second
}

fn random_autoreduced(r: &mut impl Rng, ring: &Arc<PolyRing>) -> AutoreducedSet {
    let mut chosen: Vec<DPolynomial> = Vec::new();
    for _ in 0..r.random_range(0..=4) {
        let p = common::nonconstant(r, ring, 2, 2, 1);
        let mut with = chosen.clone();
        with.push(p);
        if validate_autoreduced(with.clone()).is_ok() {
            chosen = with;
        }
    }
    validate_autoreduced(chosen).unwrap()
}

fn c8_charsets() -> Outcome {
    let ring1 = ring(Builtin::Dual, 1);
    let p = |s: &str| parse_polynomial(&ring1, s).unwrap();
    let res = charset_complete(&[p("x1"), p("x1[0,1]")], Execution::Parallel)
        .map_err(|e| e.to_string())?;
    ensure(res.charset.members() == [p("x1")], || {
        format!("charset of {{x, dx}} is {:?}", res.charset)
    })?;
    ensure(
        res.certificates.iter().all(|c| c.remainder.is_zero()),
        || "nonzero remainder".into(),
    )?;
    match charset_complete(&[p("x1"), p("x1 + 1")], Execution::Parallel) {
        Err(CharsetError::InconsistentSystem(_)) => {}
        other => return Err(format!("{{x, x+1}} gave {other:?}")),
    }

    let mut r = common::rng(8);
    let ring2 = ring(Builtin::Dual, 2);
    let (mut runs, mut rounds, mut inconsistent) = (0, 0, 0);
    for _ in 0..60 {
        let gens: Vec<DPolynomial> = (0..r.random_range(1..=3))
            .map(|_| common::nonconstant(&mut r, &ring2, 2, 2, 1))
            .collect();
        match charset_complete(&gens, Execution::Parallel) {
            Ok(res) => {
                for w in res.trace.windows(2) {
                    let a =
                        validate_autoreduced(w[1].selected.clone()).map_err(|e| e.to_string())?;
                    let b =
                        validate_autoreduced(w[0].selected.clone()).map_err(|e| e.to_string())?;
                    ensure(
                        compare_autoreduced(&a, &b) == AutoreducedOrder::ALessB,
                        || format!("round {} not lower for {gens:?}", w[1].round),
                    )?;
                }
                ensure(
                    res.certificates.iter().zip(&gens).all(|(c, g)| {
                        c.remainder.is_zero() && verify_certificate(g, res.charset.members(), c)
                    }),
                    || format!("bad certificates for {gens:?}"),
                )?;
                rounds += res.trace.len();
                runs += 1;
            }
            Err(CharsetError::InconsistentSystem(_)) => inconsistent += 1,
            Err(e) => return Err(format!("{gens:?}: {e}")),
        }
    }

    for _ in 0..200 {
        let a = random_autoreduced(&mut r, &ring2);
        let b = random_autoreduced(&mut r, &ring2);
        let want = match (def_less(&a, &b), def_less(&b, &a)) {
            (true, false) => AutoreducedOrder::ALessB,
            (false, true) => AutoreducedOrder::BLessA,
            (false, false) => AutoreducedOrder::Equivalent,
            (true, true) => return Err(format!("both {a:?} < {b:?} and the reverse")),
        };
        let got = compare_autoreduced(&a, &b);
        ensure(got == want, || {
            format!("{a:?} vs {b:?}: {got:?}, definition says {want:?}")
        })?;
    }
    Ok(format!(
        "examples hold; {runs} traced runs ({rounds} rounds) monotone, {inconsistent} inconsistent; 200 comparisons agree"
    ))
}

// ---------------------------------------------------------------- 9

fn c9_dickson() -> Outcome {
    let mut r = common::rng(9);
    for _ in 0..200 {
        let set: Vec<MultiIndex> = (0..r.random_range(0..=30))
            .map(|_| MultiIndex::new((0..4).map(|_| r.random_range(0..=5)).collect()))
            .collect();
        let mut brute: Vec<MultiIndex> = set
            .iter()
            .filter(|a| {
                !set.iter()
                    .any(|b| b != *a && b.entries().iter().zip(a.entries()).all(|(x, y)| x <= y))
            })
            .cloned()
            .collect();
        brute.sort();
        brute.dedup();
        let got = dickson_minimal(&set);
        ensure(got == brute, || format!("{set:?}: {got:?} vs {brute:?}"))?;
    }
    Ok("200 random subsets of N^4".into())
}

// ---------------------------------------------------------------- 10

fn c10_closure() -> Outcome {
    let ring = ring(Builtin::Dual, 1);
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    let one = |member| Cofactor {
        c: p("1"),
        theta: MultiIndex::zero(2),
        member,
    };
    let gens = [p("x1*x1[1,0]"), p("x1^2")];
    let reflexive = ClosureWitness {
        a: p("x1"),
        taus: vec![MultiIndex::zero(2), MultiIndex::new(vec![1, 0])],
        exponents: vec![1, 1],
        combination: vec![one(0)],
    };
    ensure(
        closure_step_witness(&gens, &reflexive) == ClosureVerdict::Accept(p("x1")),
        || "reflexive witness rejected".into(),
    )?;
    let radical = ClosureWitness {
        a: p("x1"),
        taus: vec![MultiIndex::zero(2)],
        exponents: vec![2],
        combination: vec![one(1)],
    };
    ensure(
        closure_step_witness(&gens, &radical) == ClosureVerdict::Accept(p("x1")),
        || "radical witness rejected".into(),
    )?;
    let mut wrong = radical.clone();
    wrong.combination = vec![one(0)];
    let verdict = closure_step_witness(&gens, &wrong);
    let ClosureVerdict::Reject(Rejection::BadWitness { difference }) = verdict else {
        return Err(format!("mismatched combination gave {verdict:?}"));
    };
    ensure(difference == p("x1^2 - x1*x1[1,0]"), || {
        format!("difference {difference}")
    })?;
    let mut corrupted = reflexive;
    corrupted.combination[0].c = p("2");
    let verdict = closure_step_witness(&gens, &corrupted);
    let ClosureVerdict::Reject(Rejection::BadWitness { difference }) = verdict else {
        return Err(format!("corrupted witness gave {verdict:?}"));
    };
    ensure(!difference.is_zero(), || "zero difference reported".into())?;
    Ok(format!(
        "two witnesses accepted, corrupted witness rejected with difference {difference}"
    ))
}

// ---------------------------------------------------------------- 11

fn c11_cli() -> Outcome {
    let cases = common::golden::check_all()?;
    let mut r = common::rng(11);
    let mut trips = 0;
    for (name, b) in builtins() {
        let ring = ring(b, 2);
        for _ in 0..500usize.div_ceil(builtins().len()) {
            let f = common::poly(&mut r, &ring, 4, 3, 3);
            let f = f.scalar_mul(&dstar::rational::frac(
                r.random_range(1..=5),
                r.random_range(1..=5),
            ));
            let printed = f.to_string();
            let back =
                parse_polynomial(&ring, &printed).map_err(|e| format!("{name}: {printed}: {e}"))?;
            ensure(back == f, || format!("{name}: {printed} parses to {back}"))?;
            ensure(back.to_string() == printed, || {
                format!("{name}: {printed} reprints as {back}")
            })?;
            trips += 1;
        }
    }
    Ok(format!(
        "{cases} golden transcripts stable, {trips} round trips"
    ))
}
