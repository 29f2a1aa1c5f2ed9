//! Verdicts for (SS) and (ST): closed forms for registered families, generic
//! searches over a standard corpus otherwise.

use rayon::prelude::*;

use crate::certs::action::{normalizer_check, view};
use crate::certs::rules::{self, Recipe, StabilizerForm};
use crate::certs::search::{malnormality_scan, ss_witness, st_exceptional};
use crate::certs::verdict::{
    Certificate, Condition, Method, ProductWitness, SsWitness, Status, Verdict,
};
use crate::constructions::{action_orbit, DirectProduct, Shape};
use crate::cosets::fixed_vector_scan;
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{Budget, SearchOutcome, Triple};

const SPOT_CHECKS: usize = 3;
/// Radius of the `G`-ball feeding the standard corpus and the fixed-vector scan.
pub const CORPUS_RADIUS: u32 = 2;
pub const CORPUS_MAX_SIZE: usize = 3;

/// All subsets of size `1..=3` of `ball_G(2) ∖ K`, by increasing size then
/// lexicographic index.
pub fn standard_corpus(t: &Triple, budget: &Budget) -> Result<Vec<Vec<Elem>>> {
    let outside: Vec<Elem> =
        t.g.ball(CORPUS_RADIUS, budget.element_cap)?
            .into_iter()
            .filter(|g| t.outside_k(g))
            .collect();
    Ok(subsets(&outside, CORPUS_MAX_SIZE))
}

pub fn subsets(items: &[Elem], max: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    for size in 1..=max.min(items.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| items[i].clone()).collect());
            let Some(pos) = (0..size).rev().find(|&p| idx[p] < items.len() - size + p) else {
                break;
            };
            idx[pos] += 1;
            for q in pos + 1..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out
}

pub fn decide(t: &Triple, which: Condition, budget: &Budget) -> Result<Verdict> {
    match which {
        Condition::Ss => decide_ss(t, budget),
        Condition::St => decide_st(t, budget),
        Condition::Malnormal => malnormality_scan(t, budget),
        Condition::NormalizerEqualsK => normalizer_check(t, budget),
        Condition::Wss => Err(Error::input(
            "wSS is checked per (F, g); use the wss witness search",
        )),
    }
}

fn closed(condition: Condition, t: &Triple, holds: bool, certificate: Certificate) -> Verdict {
    Verdict {
        condition,
        status: if holds {
            Status::Holds { certificate }
        } else {
            Status::Fails { certificate }
        },
        method: Method::ClosedForm {
            rule: t.recipe.key().to_string(),
        },
    }
}

fn rule_certificate(t: &Triple, spot_checks: Vec<Certificate>) -> Certificate {
    Certificate::Rule {
        rule: t.recipe.key().to_string(),
        statement: t.recipe.statement().to_string(),
        spot_checks,
    }
}

fn ss_spot_checks(t: &Triple, budget: &Budget) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for f in standard_corpus(t, budget)? {
        if let SearchOutcome::Certified { certificate } = ss_witness(t, &f, budget)? {
            out.push(Certificate::SsWitness(certificate));
            if out.len() == SPOT_CHECKS {
                break;
            }
        }
    }
    Ok(out)
}

fn decide_ss(t: &Triple, budget: &Budget) -> Result<Verdict> {
    let verdict = match closed_ss(t, budget)? {
        Some(v) => v,
        None => return generic_ss(t, budget),
    };
    if verdict.holds() {
        cross_check_holds(t, budget)?;
    }
    Ok(verdict)
}

fn closed_ss(t: &Triple, budget: &Budget) -> Result<Option<Verdict>> {
    Ok(match t.recipe {
        Recipe::TranslationWreath | Recipe::FreeFactor if rules::trivial_intersections(t) => {
            Some(closed(
                Condition::Ss,
                t,
                true,
                rule_certificate(t, ss_spot_checks(t, budget)?),
            ))
        }
        Recipe::FreeFactorMalnormal => match closed_st(t, budget)? {
            Some(st) if st.holds() => Some(closed(
                Condition::Ss,
                t,
                true,
                rule_certificate(t, ss_spot_checks(t, budget)?),
            )),
            _ => None,
        },
        Recipe::FiniteOrderMatrix => invariant_set(t, budget)?
            .map(|set| closed(Condition::Ss, t, false, Certificate::InvariantSet { set })),
        Recipe::Product => product_ss(t, budget)?,
        _ => None,
    })
}

/// A finite `H`-invariant subset of `A ∖ {e}`, closed under inversion.
fn invariant_set(t: &Triple, budget: &Budget) -> Result<Option<Vec<Elem>>> {
    let v = view(t)?;
    let a_group = v.group.base();
    for a in a_group.ball(budget.radius, budget.element_cap)? {
        if v.is_base_identity(&a) {
            continue;
        }
        if let Some(mut set) = action_orbit(
            &v.group,
            v.h_acting.generators(),
            &a,
            budget.radius,
            budget.element_cap,
        ) {
            for x in set.clone() {
                let xi = a_group.inv(&x);
                if !set.contains(&xi) {
                    set.push(xi);
                }
            }
            return Ok(Some(set));
        }
    }
    Ok(None)
}

fn product_parts(t: &Triple) -> Option<(&Triple, &Triple, &DirectProduct)> {
    match &t.shape {
        Shape::Product(l, r) => Some((l, r, t.g.as_any().downcast_ref::<DirectProduct>()?)),
        _ => None,
    }
}

/// Combines componentwise witnesses `h₁`, `h₂` into `h = (h₁, h₂)`.
pub fn product_witness(t: &Triple, f: &[Elem], budget: &Budget) -> Result<Option<ProductWitness>> {
    let Some((left, right, _)) = product_parts(t) else {
        return Ok(None);
    };
    let component = |side: &Triple, pick: fn(&Elem) -> &Elem| -> Result<Option<Elem>> {
        let mut fs: Vec<Elem> = Vec::new();
        for x in f {
            let c = pick(x);
            if side.outside_k(c) && !fs.contains(c) {
                fs.push(c.clone());
            }
        }
        if fs.is_empty() {
            return Ok(Some(side.g.identity()));
        }
        Ok(ss_witness(side, &fs, budget)?
            .certificate()
            .map(|w| w.h.clone()))
    };
    let left_h = component(left, |x| x.as_pair().expect("pair").0)?;
    let right_h = component(right, |x| x.as_pair().expect("pair").1)?;
    let (Some(left_h), Some(right_h)) = (left_h, right_h) else {
        return Ok(None);
    };
    let h = Elem::pair(left_h.clone(), right_h.clone());
    Ok(Some(ProductWitness {
        f: f.to_vec(),
        left_h,
        right_h,
        h,
    }))
}

fn product_ss(t: &Triple, budget: &Budget) -> Result<Option<Verdict>> {
    let Some((left, right, _)) = product_parts(t) else {
        return Ok(None);
    };
    if !decide_ss(left, budget)?.holds() || !decide_ss(right, budget)?.holds() {
        return Ok(None);
    }
    let mut witnesses = Vec::new();
    for f in standard_corpus(t, budget)? {
        match product_witness(t, &f, budget)? {
            Some(w) => witnesses.push(w),
            None => {
                return Err(Error::internal(format!(
                    "components satisfy (SS) but no componentwise witness for an F of size {}",
                    f.len()
                )))
            }
        }
        if witnesses.len() == SPOT_CHECKS {
            break;
        }
    }
    Ok(Some(closed(
        Condition::Ss,
        t,
        true,
        rule_certificate(t, vec![Certificate::Product { witnesses }]),
    )))
}

/// Cosets with finite `H`-orbit in `ball_G(2) ∖ K`, as a certificate.
fn finite_orbit(t: &Triple, budget: &Budget) -> Result<Option<Certificate>> {
    let scan = fixed_vector_scan(t, &budget.with_radius(CORPUS_RADIUS.min(budget.radius)))?;
    Ok(scan
        .into_iter()
        .next()
        .map(|(seed, orbit)| Certificate::FiniteOrbit {
            g: seed.representative,
            cosets: orbit
                .elements_found
                .into_iter()
                .map(|c| c.representative)
                .collect(),
        }))
}

fn generic_ss(t: &Triple, budget: &Budget) -> Result<Verdict> {
    let status = match finite_orbit(t, budget)? {
        Some(certificate) => Status::Fails { certificate },
        None => Status::Undetermined {
            budget: *budget,
            evidence: ss_spot_checks(t, budget)?,
        },
    };
    Ok(Verdict {
        condition: Condition::Ss,
        status,
        method: Method::GenericSearch,
    })
}

/// A closed-form (SS) or (ST) `Holds` must survive the generic evidence: no
/// finite orbit near the identity and no refuted corpus member.
fn cross_check_holds(t: &Triple, budget: &Budget) -> Result<()> {
    if let Some(Certificate::FiniteOrbit { g, .. }) = finite_orbit(t, budget)? {
        return Err(Error::internal(format!(
            "closed form `{}` claims infinite orbits, but {}H has a finite one",
            t.recipe.key(),
            t.g.render(&g)
        )));
    }
    let corpus = standard_corpus(t, budget)?;
    let outcomes: Vec<Result<SearchOutcome<SsWitness>>> = corpus
        .par_iter()
        .map(|f| ss_witness(t, f, budget))
        .collect();
    for (f, outcome) in corpus.iter().zip(outcomes) {
        if outcome?.is_refuted() {
            let rendered: Vec<String> = f.iter().map(|x| t.g.render(x)).collect();
            return Err(Error::internal(format!(
                "closed form `{}` conflicts with a refuted search for F = {{{}}}",
                t.recipe.key(),
                rendered.join(", ")
            )));
        }
    }
    Ok(())
}

fn decide_st(t: &Triple, budget: &Budget) -> Result<Verdict> {
    match closed_st(t, budget)? {
        Some(v) => {
            if v.holds() {
                cross_check_holds(t, budget)?;
            }
            Ok(v)
        }
        None => generic_st(t, budget),
    }
}

fn st_spot_checks(t: &Triple, budget: &Budget) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for f in standard_corpus(t, budget)? {
        if let SearchOutcome::Certified { certificate } = st_exceptional(t, &f, budget)? {
            out.push(Certificate::ExceptionalSet(certificate));
            if out.len() == SPOT_CHECKS {
                break;
            }
        }
    }
    Ok(out)
}

fn infinite_stabilizer(g: Elem, gamma: Elem, reason: &str) -> Certificate {
    Certificate::InfiniteStabilizer {
        g,
        gamma,
        reason: reason.to_string(),
    }
}

fn first_outside_k(t: &Triple, budget: &Budget) -> Result<Option<Elem>> {
    Ok(t.g
        .ball(CORPUS_RADIUS, budget.element_cap)?
        .into_iter()
        .find(|g| t.outside_k(g)))
}

fn closed_st(t: &Triple, budget: &Budget) -> Result<Option<Verdict>> {
    let st = Condition::St;
    Ok(match t.recipe {
        Recipe::TranslationWreath | Recipe::FreeFactor if rules::trivial_intersections(t) => Some(
            closed(st, t, true, rule_certificate(t, st_spot_checks(t, budget)?)),
        ),
        Recipe::FreeFactorMalnormal => {
            let malnormal = malnormality_scan(t, budget)?;
            match (malnormal.holds(), malnormal.certificate()) {
                (true, Some(cert)) => {
                    Some(closed(st, t, true, rule_certificate(t, vec![cert.clone()])))
                }
                _ => None,
            }
        }
        Recipe::FiniteOrderMatrix => {
            let v = view(t)?;
            let mut found = None;
            for a in v.group.base().ball(budget.radius, budget.element_cap)? {
                if v.is_base_identity(&a) {
                    continue;
                }
                if let Some(StabilizerForm::Periodic(p)) = rules::stabilizer_form(t, &a) {
                    found = Some(infinite_stabilizer(
                        v.group.embed_base(a),
                        v.group.embed_acting(p),
                        "γ generates an infinite cyclic subgroup of H and α_γ fixes the base part of g",
                    ));
                    break;
                }
            }
            found.map(|c| closed(st, t, false, c))
        }
        Recipe::Product => {
            let Some((left, right, g)) = product_parts(t) else {
                return Ok(None);
            };
            let (Some(g1), Some(h2)) = (
                first_outside_k(left, budget)?,
                right.h.generators().first().cloned(),
            ) else {
                return Ok(None);
            };
            Some(closed(
                st,
                t,
                false,
                infinite_stabilizer(
                    g.embed_left(g1),
                    g.embed_right(h2),
                    "the second factor commutes with (g₁, e), so {e}×H₂ fixes its coset",
                ),
            ))
        }
        Recipe::AbelianNormal | Recipe::TrivialAction => {
            let (Some(g), Some(gamma)) = (
                first_outside_k(t, budget)?,
                t.h.generators().first().cloned(),
            ) else {
                return Ok(None);
            };
            if t.g.op(&g, &gamma) != t.g.op(&gamma, &g) {
                return Ok(None);
            }
            Some(closed(
                st,
                t,
                false,
                infinite_stabilizer(g, gamma, "γ commutes with g and has infinite order in H"),
            ))
        }
        _ => None,
    })
}

fn generic_st(t: &Triple, budget: &Budget) -> Result<Verdict> {
    // A finite orbit of an infinite group has an infinite stabilizer.
    let status = match finite_orbit(t, budget)? {
        Some(certificate) => Status::Fails { certificate },
        None => Status::Undetermined {
            budget: *budget,
            evidence: st_spot_checks(t, budget)?,
        },
    };
    Ok(Verdict {
        condition: Condition::St,
        status,
        method: Method::GenericSearch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{instance, INSTANCE_IDS};

    #[test]
    fn subsets_enumerate_binomially() {
        let items: Vec<Elem> = (0..6).map(Elem::Int).collect();
        let all = subsets(&items, 3);
        assert_eq!(all.len(), 6 + 15 + 20);
        assert_eq!(all[6], vec![Elem::Int(0), Elem::Int(1)]);
        assert!(subsets(&items[..0], 3).is_empty());
    }

    #[test]
    fn closed_form_examples() {
        let b = Budget::radius(6);
        let t = instance("wreath-z2-z").unwrap();
        let v = decide(&t, Condition::St, &b).unwrap();
        assert!(v.holds() && v.is_closed_form());

        let t = instance("rotation4").unwrap();
        let v = decide(&t, Condition::Ss, &b).unwrap();
        assert!(v.fails() && v.is_closed_form());
        match v.certificate().unwrap() {
            Certificate::InvariantSet { set } => assert_eq!(set.len(), 4),
            other => panic!("{other:?}"),
        }

        let t = instance("prod-wreath2").unwrap();
        assert!(decide(&t, Condition::Ss, &Budget::radius(4))
            .unwrap()
            .holds());
        assert!(decide(&t, Condition::St, &Budget::radius(4))
            .unwrap()
            .fails());
    }

    #[test]
    fn st_implies_ss_on_builtins() {
        let b = Budget::radius(4);
        for id in INSTANCE_IDS {
            let t = instance(id).unwrap();
            let st = decide(&t, Condition::St, &b).unwrap();
            let ss = decide(&t, Condition::Ss, &b).unwrap();
            if st.holds() {
                assert!(ss.holds(), "{id}");
            }
            if ss.fails() {
                assert!(st.fails(), "{id}");
            }
        }
    }

    #[test]
    fn generic_route_finds_finite_orbits() {
        let b = Budget::radius(3);
        for id in ["z2-line", "trivial-action"] {
            let v = decide(&instance(id).unwrap(), Condition::Ss, &b).unwrap();
            assert!(v.fails(), "{id}");
            assert!(matches!(
                v.certificate(),
                Some(Certificate::FiniteOrbit { .. })
            ));
        }
    }
}
