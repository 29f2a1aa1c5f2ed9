//! Generic witness searches over balls of `H`.

use crate::certs::rules;
use crate::certs::verdict::{
    Certificate, Condition, ExceptionalEntry, ExceptionalSet, Method, SsWitness, Status, Verdict,
    WssWitness,
};
use crate::cosets::{intersection_set, orbit_closure, same_coset};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{Budget, SearchOutcome, Triple};

/// Nonidentity elements of the `H`-ball in ball order. The identity is left
/// out of witness scans so that reported witnesses are genuine translations.
pub fn h_scan(t: &Triple, budget: &Budget) -> Result<Vec<Elem>> {
    let mut ball = t.h.ball(budget.radius, budget.element_cap)?;
    ball.retain(|x| *x != t.g.identity());
    Ok(ball)
}

fn check_f(t: &Triple, f: &[Elem]) -> Result<()> {
    if f.is_empty() {
        return Err(Error::input("F must be nonempty"));
    }
    t.require_outside_k(f)
}

/// `f₁·h·f₂ ∉ H` for all `f₁, f₂ ∈ F`.
pub fn avoids(t: &Triple, f: &[Elem], h: &Elem) -> bool {
    f.iter().all(|f1| {
        let f1h = t.g.op(f1, h);
        f.iter().all(|f2| !t.h.contains(&t.g.op(&f1h, f2)))
    })
}

/// First pair `(f₁, f₂)` with `f₁·h·f₂ ∈ H`.
fn landing_pair(t: &Triple, f: &[Elem], h: &Elem) -> Option<(Elem, Elem)> {
    f.iter().find_map(|f1| {
        let f1h = t.g.op(f1, h);
        f.iter()
            .find(|f2| t.h.contains(&t.g.op(&f1h, f2)))
            .map(|f2| (f1.clone(), f2.clone()))
    })
}

pub const FINITE_ORBIT_RULE: &str = "the H-orbit of f₂H is finite and lies in F⁻¹H, \
     so h·f₂H = f₁⁻¹H for some f₁ ∈ F whatever h is";

/// Some `f₂ ∈ F` whose coset has a finite `H`-orbit inside `{f₁⁻¹H : f₁ ∈ F}`.
fn finite_orbit_obstruction(t: &Triple, f: &[Elem], budget: &Budget) -> Option<Vec<Elem>> {
    let inverses: Vec<Elem> = f.iter().map(|x| t.g.inv(x)).collect();
    f.iter().find_map(|f2| {
        let (cosets, finite) = orbit_closure(t, f2, budget);
        let inside = cosets
            .iter()
            .all(|(_, rep)| inverses.iter().any(|fi| same_coset(t, fi, rep)));
        (finite && inside).then(|| cosets.into_iter().map(|(_, rep)| rep).collect())
    })
}

/// Scans `h ∈ H` in ball order for `F·h·F ∩ H = ∅`.
pub fn ss_witness(t: &Triple, f: &[Elem], budget: &Budget) -> Result<SearchOutcome<SsWitness>> {
    check_f(t, f)?;
    if let Some(h) = h_scan(t, budget)?.into_iter().find(|h| avoids(t, f, h)) {
        return Ok(SearchOutcome::Certified {
            certificate: SsWitness {
                f: f.to_vec(),
                h,
                checked: true,
            },
        });
    }
    Ok(match finite_orbit_obstruction(t, f, budget) {
        Some(orbit) => SearchOutcome::RefutedWithin {
            budget: *budget,
            evidence: orbit,
            rule: FINITE_ORBIT_RULE.to_string(),
        },
        None => SearchOutcome::Inconclusive {
            budget: *budget,
            evidence: f.to_vec(),
        },
    })
}

/// `{h ∈ ball_H : F·h·F ∩ H ≠ ∅}` with a landing pair for each; complete
/// when every `E(f₁,f₂)` has a closed form.
pub fn st_exceptional(
    t: &Triple,
    f: &[Elem],
    budget: &Budget,
) -> Result<SearchOutcome<ExceptionalSet>> {
    check_f(t, f)?;
    let mut exceptional: Vec<ExceptionalEntry> =
        t.h.ball(budget.radius, budget.element_cap)?
            .into_iter()
            .filter_map(|h| landing_pair(t, f, &h).map(|(f1, f2)| ExceptionalEntry { h, f1, f2 }))
            .collect();
    let mut complete = true;
    for f1 in f {
        for f2 in f {
            let report = intersection_set(t, f1, f2, budget)?;
            complete &= report.complete;
            for h in report.members {
                if !exceptional.iter().any(|e| e.h == h) {
                    exceptional.push(ExceptionalEntry {
                        h,
                        f1: f1.clone(),
                        f2: f2.clone(),
                    });
                }
            }
        }
    }
    let set = ExceptionalSet {
        f: f.to_vec(),
        exceptional,
        ball_checked: budget.radius,
        complete,
    };
    Ok(if complete {
        SearchOutcome::Certified { certificate: set }
    } else {
        SearchOutcome::Inconclusive {
            budget: *budget,
            evidence: set.elements(),
        }
    })
}

/// Scans `h ∈ H` in ball order for `F·h·g ∩ H = ∅`.
pub fn wss_witness(
    t: &Triple,
    f: &[Elem],
    g: &Elem,
    budget: &Budget,
) -> Result<SearchOutcome<WssWitness>> {
    check_f(t, f)?;
    t.require_outside_k(std::slice::from_ref(g))?;
    let hit = h_scan(t, budget)?
        .into_iter()
        .find(|h| f.iter().all(|x| !t.h.contains(&t.g.op(&t.g.op(x, h), g))));
    Ok(match hit {
        Some(h) => SearchOutcome::Certified {
            certificate: WssWitness {
                f: f.to_vec(),
                g: g.clone(),
                h,
            },
        },
        None => SearchOutcome::Inconclusive {
            budget: *budget,
            evidence: f.to_vec(),
        },
    })
}

/// Number of intersections sampled into a closed-form malnormality verdict.
const SPOT_CHECKS: usize = 4;

/// Looks for `g ∈ ball_G ∖ K` and `γ ∈ H ∖ {e}` with `gγg⁻¹ ∈ H`.
pub fn malnormality_scan(t: &Triple, budget: &Budget) -> Result<Verdict> {
    let mut spot_checks = Vec::new();
    for g in t.g.ball(budget.radius, budget.element_cap)? {
        if t.k.contains(&g) {
            continue;
        }
        let gi = t.g.inv(&g);
        let report = intersection_set(t, &g, &gi, budget)?;
        if let Some(gamma) = report.members.iter().find(|x| **x != t.g.identity()) {
            return Ok(Verdict {
                condition: Condition::Malnormal,
                status: Status::Fails {
                    certificate: Certificate::MalnormalViolation {
                        g,
                        gamma: gamma.clone(),
                    },
                },
                method: Method::GenericSearch,
            });
        }
        if spot_checks.len() < SPOT_CHECKS {
            spot_checks.push(Certificate::Intersection(report));
        }
    }
    let status = if rules::trivial_intersections(t) {
        Status::Holds {
            certificate: Certificate::Rule {
                rule: t.recipe.key().to_string(),
                statement: t.recipe.statement().to_string(),
                spot_checks,
            },
        }
    } else {
        Status::Undetermined {
            budget: *budget,
            evidence: spot_checks,
        }
    };
    let method = match status {
        Status::Holds { .. } => Method::ClosedForm {
            rule: t.recipe.key().to_string(),
        },
        _ => Method::GenericSearch,
    };
    Ok(Verdict {
        condition: Condition::Malnormal,
        status,
        method,
    })
}
