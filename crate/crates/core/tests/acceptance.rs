//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! Oracles here are written against raw group operations and Gaussian
//! integer arithmetic, not against the library's algebra or search code.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mixlab::algebra::{commuting_square_check, wahp_defect, AlgebraElement, Coefficient};
use mixlab::certs::{
    decide, malnormality_scan, normalizer_check, product_witness, ss_witness, st_via_action,
    standard_corpus, Certificate, Condition, Method, Status,
};
use mixlab::constructions::{free_factor, free_product, Integers, Lattice};
use mixlab::cosets::{coset_orbit, fixed_vector_scan, intersection_set, qn_membership, QnVerdict};
use mixlab::experiments::{build_counterexample, decay_profile, free_product_mixing_check};
use mixlab::instances::{instance, INSTANCE_IDS};
use mixlab::{Budget, Elem, GroupRef, SearchOutcome, Subgroup, Triple};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Gaussian-integer oracle for finitely supported functions on a group.

type Naive = BTreeMap<Elem, (i64, i64)>;

fn gauss(c: &Coefficient) -> (i64, i64) {
    let int = |q: &BigRational| {
        assert!(q.is_integer(), "non-integer coefficient {q}");
        q.to_integer().to_i64().expect("small")
    };
    (int(&c.re), int(&c.im))
}

fn naive(x: &AlgebraElement) -> Naive {
    x.support()
        .iter()
        .map(|(g, c)| (g.clone(), gauss(c)))
        .collect()
}

fn prune(mut m: Naive) -> Naive {
    m.retain(|_, c| *c != (0, 0));
    m
}

fn naive_conv(g: &GroupRef, x: &Naive, y: &Naive) -> Naive {
    let mut out = Naive::new();
    for (a, (p, q)) in x {
        for (b, (r, s)) in y {
            let e = out.entry(g.op(a, b)).or_insert((0, 0));
            e.0 += p * r - q * s;
            e.1 += p * s + q * r;
        }
    }
    prune(out)
}

fn naive_sub(x: &Naive, y: &Naive) -> Naive {
    let mut out = x.clone();
    for (g, (r, s)) in y {
        let e = out.entry(g.clone()).or_insert((0, 0));
        e.0 -= r;
        e.1 -= s;
    }
    prune(out)
}

fn naive_adj(g: &GroupRef, x: &Naive) -> Naive {
    x.iter().map(|(a, (p, q))| (g.inv(a), (*p, -q))).collect()
}

fn naive_restrict(x: &Naive, keep: impl Fn(&Elem) -> bool) -> Naive {
    x.iter()
        .filter(|(g, _)| keep(g))
        .map(|(g, c)| (g.clone(), *c))
        .collect()
}

fn naive_norm_sq(x: &Naive) -> i64 {
    x.values().map(|(p, q)| p * p + q * q).sum()
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> Coefficient {
    match rng.gen_range(0..5) {
        0 => Coefficient::zero(),
        1 => Coefficient::one(),
        2 => Coefficient::from_int(-1),
        3 => Coefficient::i(),
        _ => -&Coefficient::i(),
    }
}

fn random_element(
    rng: &mut ChaCha8Rng,
    g: &GroupRef,
    pool: &[Elem],
    max_terms: usize,
) -> AlgebraElement {
    let n = rng.gen_range(1..=max_terms);
    let terms: Vec<(Elem, Coefficient)> = (0..n)
        .map(|_| {
            (
                pool[rng.gen_range(0..pool.len())].clone(),
                random_coefficient(rng),
            )
        })
        .collect();
    AlgebraElement::from_terms(g.clone(), terms).expect("pool elements belong to the group")
}

// ---------------------------------------------------------------------------
// Test-side helpers for the concrete groups.

fn rotate(v: (i64, i64), n: i64) -> (i64, i64) {
    let mut v = v;
    for _ in 0..n.rem_euclid(4) {
        v = (-v.1, v.0);
    }
    v
}

fn rot_elem(a: (i64, i64), n: i64) -> Elem {
    Elem::pair(Elem::Tuple(vec![a.0, a.1]), Elem::Int(n))
}

fn rot_base(e: &Elem) -> (i64, i64) {
    let v = e.as_pair().expect("pair").0.as_tuple().expect("tuple");
    (v[0], v[1])
}

fn rot_power(e: &Elem) -> i64 {
    e.as_pair().expect("pair").1.as_int().expect("int")
}

/// Lamplighter elements `(map, n)`; in `H` iff the map is empty.
fn wreath_in_h(e: &Elem) -> bool {
    e.as_pair()
        .expect("pair")
        .0
        .as_map()
        .expect("map")
        .is_empty()
}

/// Free-product word with only first-factor letters.
fn word_in_factor(e: &Elem, factor: u8) -> bool {
    e.as_word().expect("word").iter().all(|(k, _)| *k == factor)
}

fn pow(g: &GroupRef, x: &Elem, n: i64) -> Elem {
    let base = if n < 0 { g.inv(x) } else { x.clone() };
    (0..n.unsigned_abs()).fold(g.identity(), |acc, _| g.op(&acc, &base))
}

fn outside_k(t: &Triple, g: &Elem) -> bool {
    !t.k.contains(g)
}

/// `f₁·h·f₂ ∉ H` for all pairs, with `H`-membership decided by `in_h`.
fn oracle_avoids(t: &Triple, f: &[Elem], h: &Elem, in_h: &dyn Fn(&Elem) -> bool) -> bool {
    f.iter()
        .all(|a| f.iter().all(|b| !in_h(&t.g.op(&t.g.op(a, h), b))))
}

fn subsets(items: &[Elem], max: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = Vec::new();
    let mut frontier: Vec<(usize, Vec<Elem>)> = vec![(0, Vec::new())];
    while let Some((start, cur)) = frontier.pop() {
        for (i, item) in items.iter().enumerate().skip(start) {
            let mut next = cur.clone();
            next.push(item.clone());
            if next.len() < max {
                frontier.push((i + 1, next.clone()));
            }
            out.push(next);
        }
    }
    out
}

fn delta(t: &Triple, literal: &str) -> AlgebraElement {
    let g =
        t.g.parse(literal)
            .unwrap_or_else(|e| panic!("{literal}: {e}"));
    AlgebraElement::delta(t.g.clone(), g).unwrap()
}

// ---------------------------------------------------------------------------
// Criteria.

fn algebra_groups() -> Vec<(&'static str, GroupRef)> {
    vec![
        ("Z", Arc::new(Integers) as GroupRef),
        ("Z^2", Arc::new(Lattice::new(2).unwrap()) as GroupRef),
        (
            "Z*Z",
            free_product(Arc::new(Integers), Arc::new(Integers)) as GroupRef,
        ),
        ("rotation4", instance("rotation4").unwrap().g),
    ]
}

fn algebra_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa1);
    let mut elements = 0;
    for (name, g) in algebra_groups() {
        let pool = ok(g.ball(2, 10_000))?;
        for case in 0..60 {
            let (x, y, z) = (
                random_element(&mut rng, &g, &pool, 5),
                random_element(&mut rng, &g, &pool, 5),
                random_element(&mut rng, &g, &pool, 5),
            );
            elements += 3;
            let xy = ok(x.convolve(&y))?;
            ensure!(
                naive(&xy) == naive_conv(&g, &naive(&x), &naive(&y)),
                "{name} #{case}: convolution disagrees with the oracle"
            );
            ensure!(
                ok(xy.convolve(&z))? == ok(x.convolve(&ok(y.convolve(&z))?))?,
                "{name} #{case}: associativity"
            );
            ensure!(
                xy.adjoint() == ok(y.adjoint().convolve(&x.adjoint()))?,
                "{name} #{case}: (xy)* = y*x*"
            );
            ensure!(
                naive(&x.adjoint()) == naive_adj(&g, &naive(&x)),
                "{name} #{case}: adjoint disagrees with the oracle"
            );
            ensure!(
                xy.trace() == ok(y.convolve(&x))?.trace(),
                "{name} #{case}: τ(xy) = τ(yx)"
            );
            let tau = ok(x.adjoint().convolve(&x))?.trace();
            ensure!(
                tau.im.is_zero() && tau.re == x.norm2_sq(),
                "{name} #{case}: ‖x‖² = τ(x*x)"
            );
            ensure!(
                x.norm2_sq() == BigRational::from_integer(naive_norm_sq(&naive(&x)).into()),
                "{name} #{case}: norm vs oracle"
            );
        }
    }
    ensure!(elements >= 200, "only {elements} elements");
    Ok(())
}

fn cond_exp_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc2);
    let mut cases = 0;
    for id in INSTANCE_IDS {
        let t = instance(id).unwrap();
        let pool = ok(t.g.ball(2, 10_000))?;
        let h_pool = ok(t.h.ball(2, 10_000))?;
        for sub in [&t.h, &t.k] {
            for case in 0..16 {
                let x = random_element(&mut rng, &t.g, &pool, 6);
                let (a, b) = (
                    random_element(&mut rng, &t.g, &h_pool, 3),
                    random_element(&mut rng, &t.g, &h_pool, 3),
                );
                cases += 1;
                let ex = ok(x.cond_exp(sub))?;
                ensure!(
                    naive(&ex) == naive_restrict(&naive(&x), |g| sub.contains(g)),
                    "{id} #{case}: E is not restriction"
                );
                ensure!(ok(ex.cond_exp(sub))? == ex, "{id} #{case}: idempotence");
                ensure!(ex.trace() == x.trace(), "{id} #{case}: trace");
                ensure!(ex.norm2_sq() <= x.norm2_sq(), "{id} #{case}: contraction");
                // a, b are supported in H ≤ K, so both subgroups absorb them.
                let axb = ok(ok(a.convolve(&x))?.convolve(&b))?;
                let a_ex_b = ok(ok(a.convolve(&ex))?.convolve(&b))?;
                ensure!(
                    ok(axb.cond_exp(sub))? == a_ex_b,
                    "{id} #{case}: bimodule property"
                );
            }
        }
    }
    ensure!(cases >= 200, "only {cases} cases");
    Ok(())
}

fn wahp_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e);
    for id in INSTANCE_IDS {
        let t = instance(id).unwrap();
        let pool = ok(t.g.ball(2, 10_000))?;
        let h_pool = ok(t.h.ball(2, 10_000))?;
        for case in 0..100 {
            let x = random_element(&mut rng, &t.g, &pool, 5);
            let y = random_element(&mut rng, &t.g, &pool, 5);
            let u = random_element(&mut rng, &t.g, &h_pool, 2);
            let d = ok(wahp_defect(&x, &y, &u, &t.h, &t.k))?;
            ensure!(d.lhs == d.rhs, "{id} #{case}: formulas differ");
            let (nx, ny, nu) = (naive(&x), naive(&y), naive(&u));
            let in_h = |g: &Elem| t.h.contains(g);
            let in_k = |g: &Elem| t.k.contains(g);
            let full = naive_restrict(&naive_conv(&t.g, &naive_conv(&t.g, &nx, &nu), &ny), in_h);
            let (ex, ey) = (naive_restrict(&nx, in_k), naive_restrict(&ny, in_k));
            let through_k =
                naive_restrict(&naive_conv(&t.g, &naive_conv(&t.g, &ex, &nu), &ey), in_h);
            ensure!(
                naive(&d.lhs) == naive_sub(&full, &through_k),
                "{id} #{case}: lhs vs oracle"
            );
            ensure!(
                d.norm2_sq == BigRational::from_integer(naive_norm_sq(&naive(&d.rhs)).into()),
                "{id} #{case}: norm"
            );
        }
    }
    Ok(())
}

fn commuting_squares() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c);
    let fp = free_product(Arc::new(Integers), Arc::new(Integers));
    let g: GroupRef = fp.clone();
    let (ga, gb) = (free_factor(&fp, 1), free_factor(&fp, 2));
    let pool = ok(g.ball(2, 10_000))?;
    for case in 0..100 {
        let x = random_element(&mut rng, &g, &pool, 8);
        ensure!(
            ok(commuting_square_check(&ga, &gb, &x))?,
            "Z*Z #{case}: check false"
        );
        let nx = naive(&x);
        let lhs = naive_restrict(&naive_restrict(&nx, |w| word_in_factor(w, 2)), |w| {
            word_in_factor(w, 1)
        });
        let id = naive_restrict(&nx, |w| w.as_word().is_some_and(|w| w.is_empty()));
        ensure!(lhs == id, "Z*Z #{case}: oracle");
    }

    let t = instance("rotation4").unwrap();
    let s = rot_elem((1, 0), 0);
    let conj: Subgroup = t.h.conjugate(&s);
    // H ∩ sHs⁻¹ consists of (0, 4m): s·(0,n)·s⁻¹ = (e₁ − Mⁿe₁, n).
    let in_both = |e: &Elem| rot_base(e) == (0, 0) && rot_power(e) % 4 == 0;
    let mut pool = ok(t.g.ball(2, 10_000))?;
    for n in -8..=8 {
        pool.push(rot_elem((0, 0), n));
        pool.push(t.g.op(&t.g.op(&s, &rot_elem((0, 0), n)), &t.g.inv(&s)));
    }
    for case in 0..100 {
        let x = random_element(&mut rng, &t.g, &pool, 8);
        ensure!(
            ok(commuting_square_check(&t.h, &conj, &x))?,
            "rotation4 #{case}: check false"
        );
        let expected = naive_restrict(&naive(&x), in_both);
        ensure!(
            naive(&ok(x.cond_exp(&t.h.intersection(&conj)))?) == expected,
            "rotation4 #{case}: oracle"
        );
    }
    Ok(())
}

fn wreath_suite() -> Outcome {
    let t = instance("wreath-z2-z").unwrap();
    let b = Budget::radius(6);
    let st = ok(decide(&t, Condition::St, &b))?;
    ensure!(
        matches!(st.status, Status::Holds { .. }),
        "ST does not hold: {st:?}"
    );
    ensure!(
        matches!(st.method, Method::ClosedForm { .. }),
        "ST not by closed form"
    );

    let outside: Vec<Elem> = ok(t.g.ball(4, 100_000))?
        .into_iter()
        .filter(|g| outside_k(&t, g))
        .collect();
    ensure!(!outside.is_empty(), "empty ball");
    for g in &outside {
        let gi = t.g.inv(g);
        let r = ok(intersection_set(&t, g, &gi, &b))?;
        ensure!(r.complete, "E(g,g⁻¹) not complete for {}", t.g.render(g));
        let got: BTreeSet<Elem> = r.members.iter().cloned().collect();
        // Brute force well past the report's ball: γ = (∅, n).
        let brute: BTreeSet<Elem> = (-40..=40)
            .map(|n| Elem::pair(Elem::Map(vec![]), Elem::Int(n)))
            .filter(|gamma| wreath_in_h(&t.g.op(&t.g.op(g, gamma), &gi)))
            .collect();
        ensure!(
            got == brute,
            "E(g,g⁻¹) differs from brute force for {}",
            t.g.render(g)
        );
    }

    let family = subsets(&outside, 3);
    let failures: Vec<String> = family
        .par_iter()
        .filter_map(|f| match ss_witness(&t, f, &b) {
            Ok(SearchOutcome::Certified { certificate }) => {
                let good = certificate.h != t.g.identity()
                    && wreath_in_h(&certificate.h)
                    && oracle_avoids(&t, f, &certificate.h, &wreath_in_h);
                (!good).then(|| format!("bad witness for {f:?}"))
            }
            Ok(other) => Some(format!("no witness for {f:?}: {other:?}")),
            Err(e) => Some(e.to_string()),
        })
        .collect();
    ensure!(
        failures.is_empty(),
        "{} of {} sets failed, first: {}",
        failures.len(),
        family.len(),
        failures[0]
    );
    Ok(())
}

fn rotation4_suite() -> Outcome {
    let t = instance("rotation4").unwrap();
    let b = Budget::radius(6);

    let orbit = ok(coset_orbit(&t, &rot_elem((1, 0), 0), &b))?;
    let brute: BTreeSet<(i64, i64)> = (-40..=40).map(|n| rotate((1, 0), n)).collect();
    let got: BTreeSet<(i64, i64)> = orbit
        .elements_found
        .iter()
        .map(|c| rot_base(&c.representative))
        .collect();
    ensure!(orbit.is_finite() && orbit.len() == 4, "orbit: {orbit:?}");
    ensure!(
        brute.len() == 4 && got == brute,
        "orbit cosets {got:?} vs {brute:?}"
    );

    ensure!(
        !ok(fixed_vector_scan(&t, &Budget::radius(2)))?.is_empty(),
        "no finite orbit found"
    );

    let n = ok(normalizer_check(&t, &Budget::radius(4)))?;
    ensure!(
        matches!(n.status, Status::Holds { .. }),
        "normalizer: {n:?}"
    );

    let ss = ok(decide(&t, Condition::Ss, &b))?;
    let expected: BTreeSet<Elem> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        .iter()
        .map(|&(x, y)| Elem::Tuple(vec![x, y]))
        .collect();
    match &ss.status {
        Status::Fails {
            certificate: Certificate::InvariantSet { set },
        } => {
            let got: BTreeSet<Elem> = set.iter().cloned().collect();
            ensure!(got == expected && set.len() == 4, "invariant set {set:?}");
        }
        other => return Err(format!("SS: {other:?}")),
    }

    let a = Elem::Tuple(vec![1, 0]);
    for r in [4, 6, 8, 10, 12] {
        let outcome = ok(st_via_action(&t, &a, &Budget::radius(r)))?;
        let SearchOutcome::RefutedWithin { evidence, .. } = outcome else {
            return Err(format!("radius {r}: stabilizer not refuted"));
        };
        let got: BTreeSet<i64> = evidence
            .iter()
            .map(|h| {
                assert_eq!(rot_base(h), (0, 0));
                rot_power(h)
            })
            .collect();
        let brute: BTreeSet<i64> = (-(r as i64)..=r as i64)
            .filter(|&n| rotate((1, 0), n) == (1, 0))
            .collect();
        ensure!(
            got == brute && brute.iter().all(|n| n % 4 == 0),
            "radius {r}: {got:?} vs {brute:?}"
        );
    }
    Ok(())
}

fn counterexample() -> Outcome {
    let t = instance("rotation4").unwrap();
    let report = ok(build_counterexample(
        &t,
        &Elem::Tuple(vec![1, 0]),
        &Budget::radius(6),
    ))?;
    let x = ok(AlgebraElement::from_terms(
        t.g.clone(),
        report
            .x
            .iter()
            .map(|term| (term.element.clone(), term.coefficient.clone())),
    ))?;
    let support: BTreeSet<Elem> = x.support().keys().cloned().collect();
    let expected: BTreeSet<Elem> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        .iter()
        .map(|&v| rot_elem(v, 0))
        .collect();
    ensure!(
        support == expected && report.support_size == 4,
        "support {support:?}"
    );
    ensure!(x.adjoint() == x, "x* ≠ x");
    ensure!(ok(x.cond_exp(&t.k))?.is_zero(), "E_K(x) ≠ 0");
    let s = ok(AlgebraElement::delta(t.g.clone(), rot_elem((0, 0), 1)))?;
    ensure!(ok(x.commutator(&s))?.is_zero(), "[x, λ_s] ≠ 0");
    ensure!(
        x.norm2_sq() == BigRational::from_integer(4.into()),
        "‖x‖² = {}",
        x.norm2_sq()
    );
    let c = &report.checks;
    ensure!(
        c.selfadjoint && c.orthogonal_to_k && c.commutes_with_h_generators,
        "report checks {c:?}"
    );
    Ok(())
}

fn decay_suite() -> Outcome {
    let b20 = Budget::radius(20);
    let one = BigRational::from_integer(1.into());

    let t = instance("free-zz").unwrap();
    let (x, y) = (delta(&t, "b^-1"), delta(&t, "b"));
    let p = ok(decay_profile(&t, &x, &y, &b20))?;
    ensure!(
        p.samples.len() == 41,
        "free-zz: {} samples",
        p.samples.len()
    );
    ensure!(
        p.exceptional == vec![t.g.identity()],
        "free-zz exceptional {:?}",
        p.exceptional
    );
    let a = t.g.parse("a").unwrap();
    let (bi, bb) = (t.g.parse("b^-1").unwrap(), t.g.parse("b").unwrap());
    for n in -20..=20 {
        let w = t.g.op(&t.g.op(&bi, &pow(&t.g, &a, n)), &bb);
        let expect = if word_in_factor(&w, 1) {
            one.clone()
        } else {
            BigRational::zero()
        };
        ensure!(
            p.value_at(&pow(&t.g, &a, n)) == Some(&expect),
            "free-zz n={n}"
        );
    }
    let checked = ok(free_product_mixing_check(&t, &x, &y, &b20))?;
    ensure!(
        checked.predicted_exceptional.as_deref() == Some(&p.exceptional[..]),
        "prediction {:?}",
        checked.predicted_exceptional
    );

    let t = instance("rotation4").unwrap();
    let e1 = delta(&t, "((1,0),0)");
    let p = ok(decay_profile(&t, &e1, &e1, &b20))?;
    ensure!(
        p.samples.len() == 41,
        "rotation4: {} samples",
        p.samples.len()
    );
    for s in &p.samples {
        let n = rot_power(&s.h);
        let v = rotate((1, 0), n);
        let expect = if (1 + v.0, v.1) == (0, 0) {
            one.clone()
        } else {
            BigRational::zero()
        };
        ensure!(s.value == expect, "rotation4 n={n}: {}", s.value);
        ensure!(
            (s.value == one) == (n.rem_euclid(4) == 2),
            "rotation4 n={n} pattern"
        );
    }

    let t = instance("wreath-z2-z").unwrap();
    let lits = ["(d0,0)", "(d0+d1,0)", "(d0,1)", "(d1,-1)", "(d-1+d2,3)"];
    let mut rng = ChaCha8Rng::seed_from_u64(0x8d);
    let pool: Vec<Elem> = lits.iter().map(|l| t.g.parse(l).unwrap()).collect();
    let mut pairs: Vec<(AlgebraElement, AlgebraElement)> = Vec::new();
    for x in &lits {
        for y in &lits {
            pairs.push((delta(&t, x), delta(&t, y)));
        }
    }
    for _ in 0..10 {
        pairs.push((
            random_element(&mut rng, &t.g, &pool, 3),
            random_element(&mut rng, &t.g, &pool, 3),
        ));
    }
    for (x, y) in pairs.iter().filter(|(x, y)| !x.is_zero() && !y.is_zero()) {
        let at = |r| {
            ok(decay_profile(&t, x, y, &Budget::radius(r)))
                .map(|p| p.exceptional.into_iter().collect::<BTreeSet<_>>())
        };
        let base = at(4)?;
        for r in 5..=8 {
            ensure!(
                at(r)? == base,
                "wreath {x} / {y}: exceptional set moves at radius {r}"
            );
        }
    }
    Ok(())
}

fn quasi_normalizer() -> Outcome {
    let b = Budget::radius(6);
    let t = instance("free-zz").unwrap();
    match ok(qn_membership(&t, &t.g.parse("b").unwrap(), &b))?.verdict {
        QnVerdict::IndexAtLeast { count } => {
            ensure!(count >= b.radius as usize, "b: count {count}")
        }
        v => return Err(format!("b: {v:?}")),
    }
    let a3 = t.g.parse("a^3").unwrap();
    match ok(qn_membership(&t, &a3, &b))?.verdict {
        QnVerdict::InQn { cover } => {
            ensure!(cover.len() == 1, "a³ cover {cover:?}");
            let rep = t.g.op(&cover[0], &a3);
            for h in ok(t.h.ball(b.radius, 10_000))? {
                let w = t.g.op(&t.g.inv(&rep), &t.g.op(&h, &a3));
                ensure!(word_in_factor(&w, 1), "a³ cover misses {}", t.g.render(&h));
            }
        }
        v => return Err(format!("a³: {v:?}")),
    }

    let t = instance("z2-line").unwrap();
    let on_line = |e: &Elem| e.as_tuple().is_some_and(|v| v[1] == 0);
    for g in ok(t.g.ball(3, 10_000))? {
        match ok(qn_membership(&t, &g, &b))?.verdict {
            QnVerdict::InQn { cover } => {
                ensure!(cover.len() == 1, "{}: cover {cover:?}", t.g.render(&g));
                let rep = t.g.op(&cover[0], &g);
                for h in ok(t.h.ball(b.radius, 10_000))? {
                    ensure!(
                        on_line(&t.g.op(&t.g.inv(&rep), &t.g.op(&h, &g))),
                        "{} cover misses {}",
                        t.g.render(&g),
                        t.g.render(&h)
                    );
                }
            }
            v => return Err(format!("{}: {v:?}", t.g.render(&g))),
        }
    }
    Ok(())
}

fn implications() -> Outcome {
    let b = Budget::radius(4);
    for id in INSTANCE_IDS {
        let t = instance(id).unwrap();
        let st = ok(decide(&t, Condition::St, &b))?;
        let ss = ok(decide(&t, Condition::Ss, &b))?;
        if st.holds() {
            ensure!(ss.holds(), "{id}: ST holds but SS is {:?}", ss.status);
        }
    }

    let t = instance("free-zz").unwrap();
    ensure!(
        ok(malnormality_scan(&t, &b))?.holds(),
        "free-zz not malnormal"
    );
    ensure!(ok(decide(&t, Condition::St, &b))?.holds(), "free-zz ST");

    let t = instance("prod-wreath2").unwrap();
    ensure!(
        ok(decide(&t, Condition::Ss, &b))?.holds(),
        "prod-wreath2 SS"
    );
    let in_h = |e: &Elem| {
        let (l, r) = e.as_pair().expect("pair");
        wreath_in_h(l) && wreath_in_h(r)
    };
    let corpus = ok(standard_corpus(&t, &b))?;
    ensure!(!corpus.is_empty(), "empty corpus");
    for f in &corpus {
        let w = ok(product_witness(&t, f, &b))?
            .ok_or_else(|| format!("no componentwise witness for {f:?}"))?;
        ensure!(
            w.h == Elem::pair(w.left_h.clone(), w.right_h.clone()),
            "h is not (h₁, h₂)"
        );
        ensure!(oracle_avoids(&t, f, &w.h, &in_h), "witness fails for {f:?}");
    }
    Ok(())
}

fn mixlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mixlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn bodies(dir: &Path) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for entry in ok(std::fs::read_dir(dir))? {
        let path = ok(entry)?.path();
        let v: serde_json::Value = ok(serde_json::from_str(&ok(std::fs::read_to_string(&path))?))?;
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        out.insert(name, ok(serde_json::to_string(&v["body"]))?);
    }
    Ok(out)
}

fn verify_file(path: &Path) -> Result<bool, String> {
    let out = mixlab(&["verify", path.to_str().unwrap()]);
    ensure!(
        out.status.code() == Some(0),
        "verify exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = ok(serde_json::from_slice(&out.stdout))?;
    v["body"]["payload"]["verified"]
        .as_bool()
        .ok_or_else(|| "no verified flag".to_string())
}

fn determinism_and_replay() -> Outcome {
    let (d1, d2) = (ok(tempfile::tempdir())?, ok(tempfile::tempdir())?);
    for d in [&d1, &d2] {
        let out = mixlab(&["repro", "--out", d.path().to_str().unwrap()]);
        ensure!(
            out.status.success(),
            "repro failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v: serde_json::Value = ok(serde_json::from_slice(&out.stdout))?;
        let entries = v["body"]["payload"]["entries"]
            .as_array()
            .cloned()
            .unwrap_or_default();
        ensure!(
            !entries.is_empty() && entries.iter().all(|e| e["verified"] == true),
            "repro entries not all verified"
        );
    }
    let (b1, b2) = (bodies(d1.path())?, bodies(d2.path())?);
    ensure!(
        !b1.is_empty() && b1 == b2,
        "report bodies differ between runs"
    );

    let mut certified = 0;
    for name in b1.keys() {
        let path = d1.path().join(name);
        let text = ok(std::fs::read_to_string(&path))?;
        if text.contains("\"certified\"")
            || text.contains("\"holds\"")
            || text.contains("\"fails\"")
        {
            certified += 1;
        }
        ensure!(verify_file(&path)?, "{name} does not verify");
    }
    ensure!(certified > 0, "no certified reports");

    let path = d1.path().join("ss-witness-wreath.json");
    let text = ok(std::fs::read_to_string(&path))?;
    let v: serde_json::Value = ok(serde_json::from_str(&text))?;
    let h = v["body"]["payload"]["outcome"]["certificate"]["h"]
        .as_str()
        .ok_or("no witness h")?
        .to_string();
    ensure!(h != "<{},0>", "witness is already the identity");
    let mutated = text.replacen(&format!("\"h\": \"{h}\""), "\"h\": \"<{},0>\"", 1);
    ensure!(mutated != text, "mutation did not apply");
    let bad = d1.path().join("mutated.json");
    ok(std::fs::write(&bad, mutated))?;
    ensure!(!verify_file(&bad)?, "mutated witness still verifies");
    Ok(())
}

struct Criterion {
    name: &'static str,
    run: fn() -> Outcome,
    limit: Option<Duration>,
}

fn main() {
    let criteria = [
        Criterion {
            name: "algebra laws on Z, Z², Z∗Z, rotation4",
            run: algebra_laws,
            limit: Some(Duration::from_secs(10)),
        },
        Criterion {
            name: "conditional expectation contract",
            run: cond_exp_contract,
            limit: None,
        },
        Criterion {
            name: "weak asymptotic homomorphism defect identity",
            run: wahp_identity,
            limit: None,
        },
        Criterion {
            name: "commuting squares",
            run: commuting_squares,
            limit: None,
        },
        Criterion {
            name: "wreath-z2-z: ST, E(g,g⁻¹), SS witnesses",
            run: wreath_suite,
            limit: Some(Duration::from_secs(60)),
        },
        Criterion {
            name: "rotation4: orbit, normalizer, SS, stabilizers",
            run: rotation4_suite,
            limit: None,
        },
        Criterion {
            name: "rotation4 finite-orbit element",
            run: counterexample,
            limit: None,
        },
        Criterion {
            name: "decay profiles",
            run: decay_suite,
            limit: None,
        },
        Criterion {
            name: "quasi-normalizer",
            run: quasi_normalizer,
            limit: None,
        },
        Criterion {
            name: "implications",
            run: implications,
            limit: None,
        },
        Criterion {
            name: "determinism and certificate replay",
            run: determinism_and_replay,
            limit: None,
        },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(()), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (r, _) => r,
        };
        match result {
            Ok(()) => println!("PASS {:>2} {} ({elapsed:.2?})", i + 1, c.name),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {} ({elapsed:.2?}): {e}", i + 1, c.name);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
