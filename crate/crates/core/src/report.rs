//! The JSON report schema shared by every command, and certificate replay
//! over whole reports.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Term};
use crate::certs::{self, view, Certificate, SsWitness, Verdict};
use crate::cosets::{cover_holds, same_coset, OrbitReport, QnReport, QnVerdict};
use crate::error::{Error, Result};
use crate::experiments::{CounterexampleReport, DecayProfile, HypothesisReport};
use crate::group::{symmetric_generators, Budget, SearchOutcome, Triple};
use crate::instances::{instance, InstanceSpec};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything a command reports. `body` is deterministic for fixed
/// arguments; wall-clock data lives only in `timing`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub body: ReportBody,
    pub timing: Timing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBody {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproEntry {
    pub file: String,
    pub command: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    Instances {
        instances: Vec<InstanceSpec>,
    },
    Verdict {
        verdict: Verdict,
    },
    /// A single witness search; `verdict` is present when the outcome
    /// settles the condition.
    Search {
        outcome: SearchOutcome<Certificate>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        verdict: Option<Verdict>,
    },
    Qn {
        report: QnReport,
    },
    Orbit {
        report: OrbitReport,
    },
    Decay {
        profile: DecayProfile,
    },
    Counterexample {
        report: CounterexampleReport,
    },
    Corollary {
        report: HypothesisReport,
    },
    Verify {
        verified: bool,
    },
    Repro {
        entries: Vec<ReproEntry>,
    },
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Report> {
        let raw: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Schema(format!("not JSON: {e}")))?;
        let version = raw
            .pointer("/body/schema_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Schema("missing body.schema_version".into()))?;
        if version != u64::from(SCHEMA_VERSION) {
            return Err(Error::Schema(format!(
                "report has schema_version {version}; this build reads {SCHEMA_VERSION}"
            )));
        }
        serde_json::from_value(raw).map_err(|e| Error::Schema(e.to_string()))
    }
}

fn instance_of(body: &ReportBody) -> Result<Triple> {
    let id = body
        .instance
        .as_deref()
        .ok_or_else(|| Error::Schema("report names no instance".into()))?;
    instance(id)
}

/// Replays the certificates carried by a report. Searches are not re-run.
pub fn verify(report: &Report) -> Result<bool> {
    let body = &report.body;
    if body.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema_version {}",
            body.schema_version
        )));
    }
    Ok(match &body.payload {
        Payload::Instances { .. } | Payload::Verify { .. } | Payload::Repro { .. } => true,
        Payload::Verdict { verdict } => certs::replay_verdict(&instance_of(body)?, verdict),
        Payload::Search { outcome, verdict } => {
            let t = instance_of(body)?;
            let outcome_ok = match outcome {
                SearchOutcome::Certified { certificate } => certs::replay(&t, certificate),
                SearchOutcome::RefutedWithin { evidence, .. }
                | SearchOutcome::Inconclusive { evidence, .. } => evidence
                    .iter()
                    .all(|x| t.g.is_element(x) || base_element(&t, x)),
            };
            outcome_ok
                && verdict
                    .as_ref()
                    .is_none_or(|v| certs::replay_verdict(&t, v))
        }
        Payload::Qn { report } => {
            let t = instance_of(body)?;
            match &report.verdict {
                QnVerdict::InQn { cover } => cover_holds(&t, &report.g, cover, &report.budget)?,
                QnVerdict::IndexAtLeast { count } => *count > 0,
            }
        }
        Payload::Orbit { report } => {
            let t = instance_of(body)?;
            let reps: Vec<_> = report
                .elements_found
                .iter()
                .map(|c| c.representative.clone())
                .collect();
            let all_valid = reps.iter().all(|r| t.g.is_element(r) && t.outside_k(r))
                && reps
                    .iter()
                    .any(|r| same_coset(&t, r, &report.seed.representative));
            all_valid
                && (!report.is_finite()
                    || certs::replay(
                        &t,
                        &Certificate::FiniteOrbit {
                            g: report.seed.representative.clone(),
                            cosets: reps,
                        },
                    ))
        }
        Payload::Decay { profile } => verify_decay(&instance_of(body)?, profile)?,
        Payload::Counterexample { report } => verify_counterexample(&instance_of(body)?, report)?,
        Payload::Corollary { report } => {
            let t = instance_of(body)?;
            certs::replay_verdict(&t, &report.normalizer_verdict)
                && certs::replay_verdict(&t, &report.ss_verdict)
                && report.conclusion_licensed
                    == (report.normalizer_verdict.holds() && report.ss_verdict.holds())
        }
    })
}

fn base_element(t: &Triple, x: &crate::elem::Elem) -> bool {
    view(t).is_ok_and(|v| v.group.base().is_element(x))
}

fn rebuild(t: &Triple, terms: &[Term]) -> Result<AlgebraElement> {
    AlgebraElement::from_terms(
        t.g.clone(),
        terms
            .iter()
            .map(|x| (x.element.clone(), x.coefficient.clone())),
    )
}

fn verify_decay(t: &Triple, profile: &DecayProfile) -> Result<bool> {
    let (x, y) = (rebuild(t, &profile.x)?, rebuild(t, &profile.y)?);
    for s in &profile.samples {
        if !t.h.contains(&s.h) {
            return Ok(false);
        }
        let lh = AlgebraElement::delta(t.g.clone(), s.h.clone())?;
        if x.convolve(&lh)?.convolve(&y)?.cond_exp(&t.h)?.norm2_sq() != s.value {
            return Ok(false);
        }
    }
    let nonzero: Vec<_> = profile
        .samples
        .iter()
        .filter(|s| !s.value.is_zero())
        .map(|s| s.h.clone())
        .collect();
    Ok(nonzero == profile.exceptional)
}

fn verify_counterexample(t: &Triple, report: &CounterexampleReport) -> Result<bool> {
    let Ok(v) = view(t) else { return Ok(false) };
    let x = rebuild(t, &report.x)?;
    let steps = symmetric_generators(&*t.g, t.h.generators());
    let f_ok = report.f.iter().all(|g| {
        t.g.is_element(g)
            && *v.group.split(g).1 == v.group.acting().identity()
            && x.support().contains_key(g)
    });
    let orbit_closed = report.f.iter().all(|g| {
        steps.iter().all(|s| {
            let moved = t.g.op(&t.g.op(s, g), &t.g.inv(s));
            report.f.contains(&moved)
        })
    });
    let mut commutes = true;
    for s in &steps {
        commutes &= x
            .commutator(&AlgebraElement::delta(t.g.clone(), s.clone())?)?
            .is_zero();
    }
    Ok(f_ok
        && orbit_closed
        && report.f.iter().any(|g| *v.group.split(g).0 == report.a0)
        && x.len() == report.support_size
        && x.adjoint() == x
        && x.cond_exp(&t.k)?.is_zero()
        && commutes
        && report.checks.selfadjoint
        && report.checks.orthogonal_to_k
        && report.checks.commutes_with_h_generators)
}

/// Certified `SsWitness` outcome as a generic search payload.
pub fn ss_search(outcome: SearchOutcome<SsWitness>) -> SearchOutcome<Certificate> {
    map_outcome(outcome, Certificate::SsWitness)
}

pub fn map_outcome<C>(
    outcome: SearchOutcome<C>,
    f: impl FnOnce(C) -> Certificate,
) -> SearchOutcome<Certificate> {
    match outcome {
        SearchOutcome::Certified { certificate } => SearchOutcome::Certified {
            certificate: f(certificate),
        },
        SearchOutcome::RefutedWithin {
            budget,
            evidence,
            rule,
        } => SearchOutcome::RefutedWithin {
            budget,
            evidence,
            rule,
        },
        SearchOutcome::Inconclusive { budget, evidence } => {
            SearchOutcome::Inconclusive { budget, evidence }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certs::{decide, Condition};

    fn verdict_report(id: &str) -> Report {
        let b = Budget::radius(4);
        let verdict = decide(&instance(id).unwrap(), Condition::Ss, &b).unwrap();
        Report {
            body: ReportBody {
                schema_version: SCHEMA_VERSION,
                instance: Some(id.into()),
                command: "check ss".into(),
                budget: Some(b),
                payload: Payload::Verdict { verdict },
            },
            timing: Timing { elapsed_ms: 0 },
        }
    }

    #[test]
    fn round_trip_and_verify() {
        for id in ["wreath-z2-z", "rotation4", "prod-wreath2"] {
            let r = verdict_report(id);
            let back = Report::from_json(&r.to_json()).unwrap();
            assert_eq!(back, r);
            assert!(verify(&back).unwrap(), "{id}");
        }
    }

    #[test]
    fn newer_schema_is_rejected() {
        let r = verdict_report("rotation4");
        let json = r
            .to_json()
            .replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(Report::from_json(&json), Err(Error::Schema(_))));
    }
}
