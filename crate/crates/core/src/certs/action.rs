//! Criteria for triples `H ≤ K ≤ A ⋊ K` phrased through the action of `H` on `A`.

use crate::certs::rules::{self, StabilizerForm};
use crate::certs::search::h_scan;
use crate::certs::verdict::{
    Certificate, Condition, DisjointnessWitness, Method, StabilizerReport, Status, Verdict,
};
use crate::constructions::{
    action_orbit, Integers, MatrixAction, SemidirectView, Shape, TranslationAction,
};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{Budget, SearchOutcome, Triple};

pub fn view(t: &Triple) -> Result<&SemidirectView> {
    match &t.shape {
        Shape::Semidirect(v) => Ok(v),
        _ => Err(Error::input(format!(
            "{} is not a semidirect-product triple",
            t.id
        ))),
    }
}

fn check_base_point(v: &SemidirectView, a: &Elem) -> Result<()> {
    if !v.group.base().is_element(a) {
        return Err(Error::input(format!(
            "{a} is not an element of {}",
            v.group.base().name()
        )));
    }
    if v.is_base_identity(a) {
        return Err(Error::input(format!(
            "{} is the identity of A; only A∖{{e}} is allowed",
            v.group.base().render(a)
        )));
    }
    Ok(())
}

/// `α_h(a)` for `h ∈ H` given as an element of `G`.
fn act(v: &SemidirectView, h: &Elem, a: &Elem) -> Elem {
    v.group.alpha(v.acting_part(h), a)
}

pub const PERIODIC_RULE: &str = "α_{h^p} = id for the finite order p of the action, \
     so the stabilizer contains the infinite subgroup ⟨h^p⟩";

/// Stabilizer `{h ∈ H : α_h(a) = a}` sampled on the `H`-ball.
pub fn st_via_action(
    t: &Triple,
    a: &Elem,
    budget: &Budget,
) -> Result<SearchOutcome<StabilizerReport>> {
    let v = view(t)?;
    check_base_point(v, a)?;
    let ball = t.h.ball(budget.radius, budget.element_cap)?;
    let members: Vec<Elem> = ball
        .iter()
        .filter(|h| act(v, h, a) == *a)
        .cloned()
        .collect();
    Ok(match rules::stabilizer_form(t, a) {
        Some(StabilizerForm::Trivial) => {
            if members != [t.g.identity()] {
                return Err(Error::internal(
                    "closed form says the stabilizer is trivial",
                ));
            }
            SearchOutcome::Certified {
                certificate: StabilizerReport {
                    a: a.clone(),
                    members,
                    complete: true,
                },
            }
        }
        Some(StabilizerForm::Periodic(p)) => {
            let p = p.as_int().expect("periodic stabilizers live in Z");
            let pattern: Vec<Elem> = ball
                .into_iter()
                .filter(|h| v.acting_part(h).as_int().is_some_and(|n| n % p == 0))
                .collect();
            if pattern != members {
                return Err(Error::internal(
                    "stabilizer sample breaks the periodic closed form",
                ));
            }
            SearchOutcome::RefutedWithin {
                budget: *budget,
                evidence: members,
                rule: PERIODIC_RULE.to_string(),
            }
        }
        None => SearchOutcome::Inconclusive {
            budget: *budget,
            evidence: members,
        },
    })
}

pub const INVARIANT_ORBIT_RULE: &str =
    "some a ∈ E has a finite H-orbit inside E, so α_h(a) ∈ E ∩ α_h(E) for every h";

/// Scans `h ∈ H` in ball order for `E ∩ α_h(E) = ∅`.
pub fn ss_via_action(
    t: &Triple,
    e: &[Elem],
    budget: &Budget,
) -> Result<SearchOutcome<DisjointnessWitness>> {
    let v = view(t)?;
    if e.is_empty() {
        return Err(Error::input("E must be nonempty"));
    }
    for a in e {
        check_base_point(v, a)?;
    }
    let disjoint = |h: &Elem| e.iter().all(|a| !e.contains(&act(v, h, a)));
    if let Some(h) = h_scan(t, budget)?.into_iter().find(|h| disjoint(h)) {
        return Ok(SearchOutcome::Certified {
            certificate: DisjointnessWitness { set: e.to_vec(), h },
        });
    }
    let gens = v.h_acting.generators();
    let closed = e.iter().find_map(|a| {
        action_orbit(&v.group, gens, a, budget.radius, budget.element_cap)
            .filter(|orbit| orbit.iter().all(|x| e.contains(x)))
    });
    Ok(match closed {
        Some(orbit) => SearchOutcome::RefutedWithin {
            budget: *budget,
            evidence: orbit,
            rule: INVARIANT_ORBIT_RULE.to_string(),
        },
        None => SearchOutcome::Inconclusive {
            budget: *budget,
            evidence: e.to_vec(),
        },
    })
}

/// Closed-form reason that `e` is the only point of `A` fixed by `H`.
pub(crate) fn normalizer_rule(t: &Triple) -> Option<(String, String)> {
    let v = view(t).ok()?;
    if !v.group.acting().as_any().is::<Integers>() {
        return None;
    }
    let action = v.group.action().as_any();
    let gens: Vec<i64> = v
        .h_acting
        .generators()
        .iter()
        .filter_map(Elem::as_int)
        .collect();
    if let Some(m) = action.downcast_ref::<MatrixAction>() {
        return gens.iter().find_map(|&n| {
            let d = m.fixed_point_determinant(n);
            (d != 0).then(|| {
                (
                    "fixed-points-determinant".to_string(),
                    format!("det(M^{n} − I) = {d} ≠ 0, so M^{n} fixes only 0"),
                )
            })
        });
    }
    if action.is::<TranslationAction>() && gens.iter().any(|&n| n != 0) {
        return Some((
            "translation-moves-supports".to_string(),
            "a nonzero translation moves every nonempty finite support".to_string(),
        ));
    }
    None
}

const MOVED_SPOT_CHECKS: usize = 4;

/// Whether `N_G(H) = K`, through the criterion that `e` is the only point of
/// `A` fixed by all of `H`.
pub fn normalizer_check(t: &Triple, budget: &Budget) -> Result<Verdict> {
    let v = view(t)?;
    let sample = t.h.ball(budget.radius.min(2), budget.element_cap)?;
    for k in t.k.ball(budget.radius.min(2), budget.element_cap)? {
        let ki = t.g.inv(&k);
        if let Some(h) = sample
            .iter()
            .find(|h| !t.h.contains(&t.g.op(&t.g.op(&k, h), &ki)))
        {
            return Err(Error::input(format!(
                "H is not normal in K: {} conjugated by {} leaves H",
                t.g.render(h),
                t.g.render(&k)
            )));
        }
    }
    let gens: Vec<Elem> = v
        .h_acting
        .generators()
        .iter()
        .map(|s| v.group.embed_acting(s.clone()))
        .collect();
    let mut spot_checks = Vec::new();
    for a in v.group.base().ball(budget.radius, budget.element_cap)? {
        if v.is_base_identity(&a) {
            continue;
        }
        match gens.iter().find(|s| act(v, s, &a) != a) {
            None => {
                return Ok(Verdict {
                    condition: Condition::NormalizerEqualsK,
                    status: Status::Fails {
                        certificate: Certificate::FixedPoint { a },
                    },
                    method: Method::GenericSearch,
                })
            }
            Some(s) if spot_checks.len() < MOVED_SPOT_CHECKS => {
                spot_checks.push(Certificate::Moved { a, h: s.clone() })
            }
            Some(_) => {}
        }
    }
    Ok(match normalizer_rule(t) {
        Some((rule, statement)) => Verdict {
            condition: Condition::NormalizerEqualsK,
            status: Status::Holds {
                certificate: Certificate::Rule {
                    rule: rule.clone(),
                    statement,
                    spot_checks,
                },
            },
            method: Method::ClosedForm { rule },
        },
        None => Verdict {
            condition: Condition::NormalizerEqualsK,
            status: Status::Undetermined {
                budget: *budget,
                evidence: spot_checks,
            },
            method: Method::GenericSearch,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::instance;

    fn base(t: &Triple, lit: &str) -> Elem {
        view(t).unwrap().group.base().parse(lit).unwrap()
    }

    #[test]
    fn st_via_action_examples() {
        let b = Budget::radius(10);
        let t = instance("wreath-z2-z").unwrap();
        let out = st_via_action(&t, &base(&t, "d0+d3"), &b).unwrap();
        let report = out.certificate().unwrap();
        assert_eq!(report.members, vec![t.g.identity()]);
        assert!(report.complete);

        let t = instance("rotation4").unwrap();
        match st_via_action(&t, &base(&t, "(1,0)"), &b).unwrap() {
            SearchOutcome::RefutedWithin { evidence, .. } => {
                let ns: Vec<i64> = evidence
                    .iter()
                    .map(|h| h.as_pair().unwrap().1.as_int().unwrap())
                    .collect();
                assert_eq!(ns, vec![0, 4, -4, 8, -8]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            st_via_action(&t, &base(&t, "(0,0)"), &b),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn ss_via_action_examples() {
        let b = Budget::radius(6);
        let t = instance("wreath-z2-z").unwrap();
        let e = vec![base(&t, "d0"), base(&t, "d0+d1")];
        let w = ss_via_action(&t, &e, &b).unwrap();
        let h = &w.certificate().unwrap().h;
        let v = view(&t).unwrap();
        assert!(e.iter().all(|a| !e.contains(&act(v, h, a))));

        let t = instance("rotation4").unwrap();
        let e: Vec<Elem> = ["(1,0)", "(-1,0)", "(0,1)", "(0,-1)"]
            .iter()
            .map(|l| base(&t, l))
            .collect();
        assert!(ss_via_action(&t, &e, &b).unwrap().is_refuted());
        let w = ss_via_action(&t, &e[..1], &b).unwrap();
        assert_eq!(w.certificate().unwrap().h, t.g.parse("((0,0),1)").unwrap());

        let identity = base(&t, "(0,0)");
        assert!(ss_via_action(&t, &[identity], &b).is_err());
    }

    #[test]
    fn normalizer_examples() {
        let b = Budget::radius(4);
        for id in ["rotation4", "wreath-z2-z"] {
            let v = normalizer_check(&instance(id).unwrap(), &b).unwrap();
            assert!(v.holds() && v.is_closed_form(), "{id}: {v:?}");
        }
        let t = instance("trivial-action").unwrap();
        let v = normalizer_check(&t, &b).unwrap();
        assert_eq!(
            v.certificate(),
            Some(&Certificate::FixedPoint {
                a: base(&t, "(1,0)")
            })
        );
        assert!(normalizer_check(&instance("free-zz").unwrap(), &b).is_err());
    }
}
