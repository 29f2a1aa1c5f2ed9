//! Independent re-checking of certificates against a triple. Replays only
//! evaluate the claimed facts; they never search.

use crate::certs::action::{normalizer_rule, view};
use crate::certs::rules::{self, Recipe, StabilizerForm};
use crate::certs::search::avoids;
use crate::certs::verdict::{Certificate, Status, Verdict};
use crate::cosets::same_coset;
use crate::elem::Elem;
use crate::group::{power, symmetric_generators, Triple};

/// Orders checked when a certificate claims an element of infinite order.
const ORDER_PROBE: i64 = 64;

pub fn replay_verdict(t: &Triple, v: &Verdict) -> bool {
    match &v.status {
        Status::Holds { certificate } | Status::Fails { certificate } => replay(t, certificate),
        Status::Undetermined { evidence, .. } => evidence.iter().all(|c| replay(t, c)),
    }
}

pub fn replay(t: &Triple, cert: &Certificate) -> bool {
    let g = &t.g;
    let valid = |x: &Elem| g.is_element(x);
    let in_h = |x: &Elem| valid(x) && t.h.contains(x);
    let outside = |xs: &[Elem]| !xs.is_empty() && xs.iter().all(|x| valid(x) && t.outside_k(x));
    match cert {
        Certificate::SsWitness(w) => {
            w.checked && outside(&w.f) && in_h(&w.h) && avoids(t, &w.f, &w.h)
        }
        Certificate::WssWitness(w) => {
            outside(&w.f)
                && outside(std::slice::from_ref(&w.g))
                && in_h(&w.h)
                && w.f
                    .iter()
                    .all(|x| !t.h.contains(&g.op(&g.op(x, &w.h), &w.g)))
        }
        Certificate::ExceptionalSet(set) => {
            let lands = |f1: &Elem, h: &Elem, f2: &Elem| t.h.contains(&g.op(&g.op(f1, h), f2));
            let entries_ok = outside(&set.f)
                && set.exceptional.iter().all(|e| {
                    in_h(&e.h)
                        && set.f.contains(&e.f1)
                        && set.f.contains(&e.f2)
                        && lands(&e.f1, &e.h, &e.f2)
                });
            if !entries_ok {
                return false;
            }
            let listed = set.elements();
            let rest_ok = match t
                .h
                .ball(set.ball_checked, crate::group::DEFAULT_ELEMENT_CAP)
            {
                Ok(ball) => ball
                    .iter()
                    .filter(|h| !listed.contains(h))
                    .all(|h| avoids(t, &set.f, h)),
                Err(_) => false,
            };
            let complete_ok = !set.complete
                || set.f.iter().all(|f1| {
                    set.f.iter().all(|f2| {
                        rules::intersection_candidates(t, f1, f2).is_some_and(|cands| {
                            cands
                                .iter()
                                .filter(|c| lands(f1, c, f2))
                                .all(|c| listed.contains(c))
                        })
                    })
                });
            rest_ok && complete_ok
        }
        Certificate::Stabilizer(report) => {
            let Ok(v) = view(t) else { return false };
            let fixes = |h: &Elem| v.group.alpha(v.acting_part(h), &report.a) == report.a;
            if !v.group.base().is_element(&report.a) || v.is_base_identity(&report.a) {
                return false;
            }
            let members_ok = report.members.iter().all(|h| in_h(h) && fixes(h));
            let complete_ok = !report.complete
                || (rules::stabilizer_form(t, &report.a) == Some(StabilizerForm::Trivial)
                    && report.members == [g.identity()]);
            members_ok && complete_ok
        }
        Certificate::Disjointness(w) => {
            let Ok(v) = view(t) else { return false };
            in_h(&w.h)
                && !w.set.is_empty()
                && w.set.iter().all(|a| {
                    v.group.base().is_element(a)
                        && !v.is_base_identity(a)
                        && !w.set.contains(&v.group.alpha(v.acting_part(&w.h), a))
                })
        }
        Certificate::FiniteOrbit { g: seed, cosets } => {
            let closed = || {
                symmetric_generators(&**g, t.h.generators())
                    .iter()
                    .all(|s| {
                        cosets.iter().all(|c| {
                            let moved = g.op(s, c);
                            cosets.iter().any(|d| same_coset(t, d, &moved))
                        })
                    })
            };
            outside(cosets)
                && valid(seed)
                && cosets.iter().any(|c| same_coset(t, c, seed))
                && closed()
        }
        Certificate::InvariantSet { set } => {
            let Ok(v) = view(t) else { return false };
            let a_group = v.group.base();
            let steps = symmetric_generators(&**v.group.acting(), v.h_acting.generators());
            !set.is_empty()
                && set.iter().all(|a| {
                    a_group.is_element(a)
                        && !v.is_base_identity(a)
                        && set.contains(&a_group.inv(a))
                        && steps.iter().all(|s| set.contains(&v.group.alpha(s, a)))
                })
        }
        Certificate::InfiniteStabilizer {
            g: x,
            gamma,
            reason,
        } => {
            !reason.is_empty()
                && outside(std::slice::from_ref(x))
                && in_h(gamma)
                && t.h.contains(&g.op(&g.op(x, gamma), &g.inv(x)))
                && (1..=ORDER_PROBE).all(|n| power(&**g, gamma, n) != g.identity())
        }
        Certificate::MalnormalViolation { g: x, gamma } => {
            outside(std::slice::from_ref(x))
                && in_h(gamma)
                && *gamma != g.identity()
                && t.h.contains(&g.op(&g.op(x, gamma), &g.inv(x)))
        }
        Certificate::FixedPoint { a } => {
            let Ok(v) = view(t) else { return false };
            v.group.base().is_element(a)
                && !v.is_base_identity(a)
                && v.h_acting
                    .generators()
                    .iter()
                    .all(|s| v.group.alpha(s, a) == *a)
        }
        Certificate::Moved { a, h } => {
            let Ok(v) = view(t) else { return false };
            v.group.base().is_element(a) && in_h(h) && v.group.alpha(v.acting_part(h), a) != *a
        }
        Certificate::Intersection(report) => {
            let lands = |gamma: &Elem| t.h.contains(&g.op(&g.op(&report.g, gamma), &report.h));
            if !outside(&[report.g.clone(), report.h.clone()]) {
                return false;
            }
            let members_ok = report.members.iter().all(|m| in_h(m) && lands(m));
            let complete_ok = !report.complete
                || rules::intersection_candidates(t, &report.g, &report.h).is_some_and(|c| {
                    c.iter()
                        .filter(|x| lands(x))
                        .all(|x| report.members.contains(x))
                });
            members_ok && complete_ok
        }
        Certificate::Product { witnesses } => {
            !witnesses.is_empty()
                && witnesses.iter().all(|w| {
                    w.h == Elem::pair(w.left_h.clone(), w.right_h.clone())
                        && outside(&w.f)
                        && in_h(&w.h)
                        && avoids(t, &w.f, &w.h)
                })
        }
        Certificate::Rule {
            rule,
            statement,
            spot_checks,
        } => {
            let recipe_rule = Recipe::from_key(rule).is_some_and(|r| {
                r == t.recipe && r != Recipe::Generic && r.statement() == statement
            });
            let normalizer = normalizer_rule(t).is_some_and(|(r, s)| r == *rule && s == *statement);
            (recipe_rule || normalizer) && spot_checks.iter().all(|c| replay(t, c))
        }
    }
}
