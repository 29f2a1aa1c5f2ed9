//! Certificate-producing checks for (SS), (ST), (wSS), malnormality and the
//! normalizer criterion.

mod action;
pub mod decide;
mod replay;
pub mod rules;
mod search;
mod verdict;

pub use action::{normalizer_check, ss_via_action, st_via_action, view};
pub use decide::{decide, product_witness, standard_corpus};
pub use replay::{replay, replay_verdict};
pub use search::{avoids, h_scan, malnormality_scan, ss_witness, st_exceptional, wss_witness};
pub use verdict::{
    Certificate, Condition, DisjointnessWitness, ExceptionalEntry, ExceptionalSet, Method,
    ProductWitness, SsWitness, StabilizerReport, Status, Verdict, WssWitness,
};
