//! Computable groups: the `Group` trait, word-length balls, membership-predicate
//! subgroups, validated triples `H ≤ K ≤ G`, search budgets and outcomes.

use std::any::Any;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::certs::rules::Recipe;
use crate::constructions::Shape;
use crate::elem::Elem;
use crate::error::{Error, Result};

pub type GroupRef = Arc<dyn Group>;

/// A group whose elements have decidable normal forms.
pub trait Group: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn identity(&self) -> Elem;
    fn op(&self, a: &Elem, b: &Elem) -> Elem;
    fn inv(&self, a: &Elem) -> Elem;
    fn generators(&self) -> Vec<Elem>;

    /// Whether `e` is a well-formed normal form of this group.
    fn is_element(&self, e: &Elem) -> bool;

    /// Human-facing literal for `e` (inverse of [`Group::parse`]).
    fn render(&self, e: &Elem) -> String;
    fn parse(&self, s: &str) -> Result<Elem>;

    /// Deterministic word-length ball of radius `r` around the identity.
    fn ball(&self, r: u32, cap: usize) -> Result<Vec<Elem>> {
        word_ball(self, &self.generators(), r, cap, &self.name())
    }

    fn as_any(&self) -> &dyn Any;
}

pub fn same_group(a: &dyn Group, b: &dyn Group) -> bool {
    a.name() == b.name()
}

pub fn power<G: Group + ?Sized>(group: &G, g: &Elem, n: i64) -> Elem {
    let base = if n < 0 { group.inv(g) } else { g.clone() };
    let mut acc = group.identity();
    for _ in 0..n.unsigned_abs() {
        acc = group.op(&acc, &base);
    }
    acc
}

/// Generators followed by their inverses, interleaved and deduplicated.
pub fn symmetric_generators<G: Group + ?Sized>(group: &G, gens: &[Elem]) -> Vec<Elem> {
    let mut out: Vec<Elem> = Vec::with_capacity(gens.len() * 2);
    for g in gens {
        for s in [g.clone(), group.inv(g)] {
            if s != group.identity() && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Breadth-first ball: sphere by sphere, each sphere in discovery order,
/// right-multiplying by generators then inverses in declared order.
pub fn word_ball<G: Group + ?Sized>(
    group: &G,
    gens: &[Elem],
    r: u32,
    cap: usize,
    what: &str,
) -> Result<Vec<Elem>> {
    let steps = symmetric_generators(group, gens);
    let id = group.identity();
    let mut seen: HashSet<Elem> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut frontier = 0..1;
    for _ in 0..r {
        let start = out.len();
        for i in frontier.clone() {
            for s in &steps {
                let next = group.op(&out[i], s);
                if seen.insert(next.clone()) {
                    out.push(next);
                    if out.len() > cap {
                        return Err(Error::BudgetExceeded {
                            what: what.to_string(),
                            cap,
                        });
                    }
                }
            }
        }
        if out.len() == start {
            break;
        }
        frontier = start..out.len();
    }
    Ok(out)
}

pub fn enumerate_ball(group: &dyn Group, r: u32, budget: &Budget) -> Result<Vec<Elem>> {
    group.ball(r, budget.element_cap)
}

type Membership = Arc<dyn Fn(&Elem) -> bool + Send + Sync>;

/// A subgroup given by a decidable membership predicate and generators.
#[derive(Clone)]
pub struct Subgroup {
    parent: GroupRef,
    name: String,
    generators: Vec<Elem>,
    membership: Membership,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("name", &self.name)
            .field("parent", &self.parent.name())
            .field("generators", &self.generators)
            .finish()
    }
}

impl Subgroup {
    pub fn new(
        parent: GroupRef,
        name: impl Into<String>,
        generators: Vec<Elem>,
        membership: impl Fn(&Elem) -> bool + Send + Sync + 'static,
    ) -> Subgroup {
        Subgroup {
            parent,
            name: name.into(),
            generators,
            membership: Arc::new(membership),
        }
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(parent: GroupRef) -> Subgroup {
        let gens = parent.generators();
        let name = parent.name();
        Subgroup::new(parent, name, gens, |_| true)
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn contains(&self, g: &Elem) -> bool {
        (self.membership)(g)
    }

    /// Word ball with respect to the subgroup's own generators. Subgroups
    /// without known generators fall back to filtering the parent's ball.
    pub fn ball(&self, r: u32, cap: usize) -> Result<Vec<Elem>> {
        if self.generators.is_empty() {
            let mut out = self.parent.ball(r, cap)?;
            out.retain(|g| self.contains(g));
            return Ok(out);
        }
        word_ball(&*self.parent, &self.generators, r, cap, &self.name)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let (a, b) = (self.membership.clone(), other.membership.clone());
        Subgroup::new(
            self.parent.clone(),
            format!("{} ∩ {}", self.name, other.name),
            Vec::new(),
            move |g| a(g) && b(g),
        )
    }

    /// `g S g⁻¹`.
    pub fn conjugate(&self, g: &Elem) -> Subgroup {
        let parent = self.parent.clone();
        let gi = parent.inv(g);
        let gens = self
            .generators
            .iter()
            .map(|s| parent.op(&parent.op(g, s), &gi))
            .collect();
        let inner = self.membership.clone();
        let p = parent.clone();
        let g = g.clone();
        Subgroup::new(
            parent.clone(),
            format!("{}^{}", self.name, parent.render(&g)),
            gens,
            move |x| inner(&p.op(&p.op(&gi, x), &g)),
        )
    }

    /// Samples the subgroup axioms on a ball of the given radius.
    pub fn validate(&self, radius: u32, cap: usize) -> Result<()> {
        let p = &self.parent;
        if !self.contains(&p.identity()) {
            return Err(Error::input(format!(
                "{} does not contain the identity",
                self.name
            )));
        }
        if let Some(g) = self.generators.iter().find(|g| !self.contains(g)) {
            return Err(Error::input(format!(
                "generator {} of {} fails its membership test",
                p.render(g),
                self.name
            )));
        }
        let ball = self.ball(radius, cap)?;
        for g in &ball {
            for h in &ball {
                if !self.contains(&p.op(g, &p.inv(h))) {
                    return Err(Error::input(format!(
                        "{} is not closed: {} · {}⁻¹",
                        self.name,
                        p.render(g),
                        p.render(h)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A chain `H ≤ K ≤ G` of infinite subgroups, tagged with how it was built.
#[derive(Clone, Debug)]
pub struct Triple {
    pub id: String,
    pub g: GroupRef,
    pub k: Subgroup,
    pub h: Subgroup,
    pub shape: Shape,
    pub recipe: Recipe,
}

impl Triple {
    pub fn new(
        id: impl Into<String>,
        g: GroupRef,
        k: Subgroup,
        h: Subgroup,
        shape: Shape,
        recipe: Recipe,
    ) -> Result<Triple> {
        let t = Triple {
            id: id.into(),
            g,
            k,
            h,
            shape,
            recipe,
        };
        t.validate(3, 10_000)?;
        Ok(t)
    }

    pub fn validate(&self, radius: u32, cap: usize) -> Result<()> {
        if !same_group(&*self.k.parent, &*self.g) || !same_group(&*self.h.parent, &*self.g) {
            return Err(Error::input("subgroups must live in G"));
        }
        self.h.validate(radius, cap)?;
        self.k.validate(radius, cap)?;
        for x in self.h.ball(radius + 1, cap)? {
            if !self.k.contains(&x) {
                return Err(Error::input(format!(
                    "H is not inside K: {} ∈ H ∖ K",
                    self.g.render(&x)
                )));
            }
        }
        Ok(())
    }

    /// Checks that `H` has at least `n` distinct elements, growing the ball
    /// until it does.
    pub fn attest_infinite(&self, n: usize) -> Result<bool> {
        let mut last = 0;
        for r in 0.. {
            let size = self.h.ball(r, n.max(1) * 4 + 16)?.len();
            if size >= n {
                return Ok(true);
            }
            if size == last {
                return Ok(false);
            }
            last = size;
        }
        unreachable!()
    }

    pub fn outside_k(&self, g: &Elem) -> bool {
        !self.k.contains(g)
    }

    /// Elements of `F` lying in `K` are rejected by name.
    pub fn require_outside_k(&self, f: &[Elem]) -> Result<()> {
        let offenders: Vec<String> = f
            .iter()
            .filter(|g| self.k.contains(g))
            .map(|g| self.g.render(g))
            .collect();
        if offenders.is_empty() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "elements must lie outside K; offending: {}",
                offenders.join(", ")
            )))
        }
    }
}

pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub radius: u32,
    pub element_cap: usize,
}

impl Budget {
    pub fn new(radius: u32, element_cap: usize) -> Result<Budget> {
        if radius == 0 || element_cap == 0 {
            return Err(Error::input(
                "budget radius and element cap must be positive",
            ));
        }
        Ok(Budget {
            radius,
            element_cap,
        })
    }

    pub fn radius(radius: u32) -> Budget {
        Budget::new(radius, DEFAULT_ELEMENT_CAP).expect("positive radius")
    }

    pub fn with_radius(self, radius: u32) -> Budget {
        Budget { radius, ..self }
    }
}

/// Result of a budgeted semidecision search.
///
/// `RefutedWithin` is only produced when a stated rule turns the failed
/// search into a proof; otherwise an exhausted search is `Inconclusive`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome<C> {
    Certified {
        certificate: C,
    },
    RefutedWithin {
        budget: Budget,
        evidence: Vec<Elem>,
        rule: String,
    },
    Inconclusive {
        budget: Budget,
        evidence: Vec<Elem>,
    },
}

impl<C> SearchOutcome<C> {
    pub fn certificate(&self) -> Option<&C> {
        match self {
            SearchOutcome::Certified { certificate } => Some(certificate),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, SearchOutcome::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SearchOutcome::RefutedWithin { .. })
    }
}
