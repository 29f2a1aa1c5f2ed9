use serde::{Deserialize, Serialize};

use crate::cosets::IntersectionReport;
use crate::elem::Elem;
use crate::group::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "SS")]
    Ss,
    #[serde(rename = "ST")]
    St,
    #[serde(rename = "wSS")]
    Wss,
    Malnormal,
    NormalizerEqualsK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    GenericSearch,
    ClosedForm { rule: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Holds {
        certificate: Certificate,
    },
    Fails {
        certificate: Certificate,
    },
    Undetermined {
        budget: Budget,
        evidence: Vec<Certificate>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub condition: Condition,
    #[serde(flatten)]
    pub status: Status,
    pub method: Method,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self.status, Status::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self.status, Status::Fails { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.status {
            Status::Holds { certificate } | Status::Fails { certificate } => Some(certificate),
            Status::Undetermined { .. } => None,
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.method, Method::ClosedForm { .. })
    }
}

/// `h ∈ H` with `f₁·h·f₂ ∉ H` for all `f₁, f₂ ∈ F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsWitness {
    pub f: Vec<Elem>,
    pub h: Elem,
    pub checked: bool,
}

/// `h ∈ H` with `f·h·g ∉ H` for all `f ∈ F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WssWitness {
    pub f: Vec<Elem>,
    pub g: Elem,
    pub h: Elem,
}

/// One `h` with `f₁·h·f₂ ∈ H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalEntry {
    pub h: Elem,
    pub f1: Elem,
    pub f2: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSet {
    pub f: Vec<Elem>,
    pub exceptional: Vec<ExceptionalEntry>,
    pub ball_checked: u32,
    /// True only when a closed-form rule shows no exceptional `h` lies
    /// outside the listed ones.
    pub complete: bool,
}

impl ExceptionalSet {
    pub fn elements(&self) -> Vec<Elem> {
        self.exceptional.iter().map(|e| e.h.clone()).collect()
    }
}

/// Stabilizer `{h ∈ H : α_h(a) = a}` sampled on a ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub a: Elem,
    pub members: Vec<Elem>,
    pub complete: bool,
}

/// `h ∈ H` with `E ∩ α_h(E) = ∅`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessWitness {
    pub set: Vec<Elem>,
    pub h: Elem,
}

/// Componentwise witness for a product triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductWitness {
    pub f: Vec<Elem>,
    pub left_h: Elem,
    pub right_h: Elem,
    pub h: Elem,
}

/// Replayable evidence attached to verdicts and reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    SsWitness(SsWitness),
    WssWitness(WssWitness),
    ExceptionalSet(ExceptionalSet),
    Stabilizer(StabilizerReport),
    Disjointness(DisjointnessWitness),
    /// A finite set of cosets `xH` closed under the `H`-generators.
    FiniteOrbit {
        g: Elem,
        cosets: Vec<Elem>,
    },
    /// `E ⊆ A∖{e}`, nonempty, closed under the `H`-action and inversion.
    InvariantSet {
        set: Vec<Elem>,
    },
    /// `g ∉ K`, `γ ∈ H∖{e}` of infinite order with `gγg⁻¹ ∈ H`.
    InfiniteStabilizer {
        g: Elem,
        gamma: Elem,
        reason: String,
    },
    MalnormalViolation {
        g: Elem,
        gamma: Elem,
    },
    /// `a ≠ e` fixed by every `H`-generator.
    FixedPoint {
        a: Elem,
    },
    /// `h ∈ H` with `α_h(a) ≠ a`.
    Moved {
        a: Elem,
        h: Elem,
    },
    Intersection(IntersectionReport),
    Product {
        witnesses: Vec<ProductWitness>,
    },
    /// A closed-form rule keyed to the instance recipe, with concrete
    /// spot checks that replay independently.
    Rule {
        rule: String,
        statement: String,
        spot_checks: Vec<Certificate>,
    },
}
