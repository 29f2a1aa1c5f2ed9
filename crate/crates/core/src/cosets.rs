//! The left action of `H` on cosets `gH`: orbits, the sets
//! `E(g,h) = {γ ∈ H : gγh ∈ H}`, one-sided quasi-normalizer membership and
//! the scan for `H`-fixed vectors outside `ℓ²(K/H)`.

use serde::{Deserialize, Serialize};

use crate::certs::rules;
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{symmetric_generators, Budget, Triple};

/// A coset `gH`, named by a representative. Two ids are equal iff
/// `rep₁⁻¹·rep₂ ∈ H`; compare with [`same_coset`], not `==`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetId {
    pub representative: Elem,
}

pub fn same_coset(t: &Triple, x: &Elem, y: &Elem) -> bool {
    t.h.contains(&t.g.op(&t.g.inv(x), y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitStatus {
    Finite,
    GrowingAtBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub seed: CosetId,
    pub elements_found: Vec<CosetId>,
    pub status: OrbitStatus,
    pub budget: Budget,
}

impl OrbitReport {
    pub fn len(&self) -> usize {
        self.elements_found.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements_found.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.status == OrbitStatus::Finite
    }
}

/// Breadth-first closure of `{gH}` under left multiplication by the
/// symmetric `H`-generators. Each coset is returned as `(u, u·g)` with `u ∈ H`.
/// The closure is finite when a full generator pass adds nothing; it is
/// abandoned when pass number `budget.radius` still grows, or past `element_cap` cosets.
pub(crate) fn orbit_closure(t: &Triple, g: &Elem, budget: &Budget) -> (Vec<(Elem, Elem)>, bool) {
    let steps = symmetric_generators(&*t.g, t.h.generators());
    let mut cosets: Vec<(Elem, Elem)> = vec![(t.g.identity(), g.clone())];
    let mut frontier = 0..1;
    let mut depth = 0;
    loop {
        let start = cosets.len();
        for i in frontier.clone() {
            for s in &steps {
                let u = t.g.op(s, &cosets[i].0);
                let rep = t.g.op(s, &cosets[i].1);
                if !cosets.iter().any(|(_, r)| same_coset(t, r, &rep)) {
                    cosets.push((u, rep));
                }
            }
        }
        if cosets.len() == start {
            return (cosets, true);
        }
        depth += 1;
        if depth > budget.radius || cosets.len() > budget.element_cap {
            return (cosets, false);
        }
        frontier = start..cosets.len();
    }
}

/// Orbit of `gH` under `H`, for `g ∉ K`.
pub fn coset_orbit(t: &Triple, g: &Elem, budget: &Budget) -> Result<OrbitReport> {
    if t.k.contains(g) {
        return Err(Error::input(format!(
            "{} lies in K; the action is on cosets of elements outside K",
            t.g.render(g)
        )));
    }
    let (cosets, finite) = orbit_closure(t, g, budget);
    Ok(OrbitReport {
        seed: CosetId {
            representative: g.clone(),
        },
        elements_found: cosets
            .into_iter()
            .map(|(_, representative)| CosetId { representative })
            .collect(),
        status: if finite {
            OrbitStatus::Finite
        } else {
            OrbitStatus::GrowingAtBudget
        },
        budget: *budget,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub g: Elem,
    pub h: Elem,
    pub members: Vec<Elem>,
    /// True only when a closed-form rule lists every solution.
    pub complete: bool,
}

/// `E(g,h) = {γ ∈ H : gγh ∈ H}` on the `H`-ball, completed by a closed form
/// when the triple has one.
pub fn intersection_set(
    t: &Triple,
    g: &Elem,
    h: &Elem,
    budget: &Budget,
) -> Result<IntersectionReport> {
    t.require_outside_k(&[g.clone(), h.clone()])?;
    let lands = |gamma: &Elem| t.h.contains(&t.g.op(&t.g.op(g, gamma), h));
    let mut members: Vec<Elem> =
        t.h.ball(budget.radius, budget.element_cap)?
            .into_iter()
            .filter(|x| lands(x))
            .collect();
    let complete = match rules::intersection_candidates(t, g, h) {
        Some(candidates) => {
            let exact: Vec<Elem> = candidates.into_iter().filter(|x| lands(x)).collect();
            if let Some(stray) = members.iter().find(|m| !exact.contains(m)) {
                return Err(Error::internal(format!(
                    "closed form for E(g,h) misses {}",
                    t.g.render(stray)
                )));
            }
            for x in exact {
                if !members.contains(&x) {
                    members.push(x);
                }
            }
            true
        }
        None => false,
    };
    Ok(IntersectionReport {
        g: g.clone(),
        h: h.clone(),
        members,
        complete,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum QnVerdict {
    /// `Hg ⊆ ⋃ⱼ uⱼ·g·H` with `uⱼ ∈ H`.
    InQn { cover: Vec<Elem> },
    /// At least this many distinct cosets of `H ∩ gHg⁻¹` in `H`.
    IndexAtLeast { count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QnReport {
    pub g: Elem,
    #[serde(flatten)]
    pub verdict: QnVerdict,
    pub budget: Budget,
}

/// Whether `g` lies in the one-sided quasi-normalizer of `H`, i.e. whether
/// `[H : H ∩ gHg⁻¹]` is finite. The index equals the size of the `H`-orbit
/// of `gH`, since `u·gH = u'·gH ⇔ u⁻¹u' ∈ gHg⁻¹`.
pub fn qn_membership(t: &Triple, g: &Elem, budget: &Budget) -> Result<QnReport> {
    let (cosets, finite) = orbit_closure(t, g, budget);
    let verdict = if finite {
        let cover: Vec<Elem> = cosets.into_iter().map(|(u, _)| u).collect();
        verify_cover(t, g, &cover, budget)?;
        QnVerdict::InQn { cover }
    } else {
        QnVerdict::IndexAtLeast {
            count: cosets.len(),
        }
    };
    Ok(QnReport {
        g: g.clone(),
        verdict,
        budget: *budget,
    })
}

/// Every `h` in the `H`-ball has `hg ∈ uⱼgH` for some `j`.
pub fn cover_holds(t: &Triple, g: &Elem, cover: &[Elem], budget: &Budget) -> Result<bool> {
    let reps: Vec<Elem> = cover.iter().map(|u| t.g.op(u, g)).collect();
    for h in t.h.ball(budget.radius, budget.element_cap)? {
        let hg = t.g.op(&h, g);
        if !reps.iter().any(|r| same_coset(t, r, &hg)) {
            return Ok(false);
        }
    }
    Ok(!cover.is_empty() && cover.iter().all(|u| t.h.contains(u)))
}

fn verify_cover(t: &Triple, g: &Elem, cover: &[Elem], budget: &Budget) -> Result<()> {
    if cover_holds(t, g, cover, budget)? {
        Ok(())
    } else {
        Err(Error::internal("finite coset orbit does not cover Hg"))
    }
}

/// Cosets `gH` with `g` in the `G`-ball outside `K` whose `H`-orbit is
/// finite. Each such orbit spans an `H`-fixed vector of `ℓ²(G/H)` not in
/// `ℓ²(K/H)`; an empty result means no violation within the budget.
pub fn fixed_vector_scan(t: &Triple, budget: &Budget) -> Result<Vec<(CosetId, OrbitReport)>> {
    let mut seen: Vec<Elem> = Vec::new();
    let mut found = Vec::new();
    for g in t.g.ball(budget.radius, budget.element_cap)? {
        if t.k.contains(&g) || seen.iter().any(|r| same_coset(t, r, &g)) {
            continue;
        }
        let report = coset_orbit(t, &g, budget)?;
        seen.extend(
            report
                .elements_found
                .iter()
                .map(|c| c.representative.clone()),
        );
        if report.is_finite() {
            found.push((CosetId { representative: g }, report));
        }
    }
    Ok(found)
}
