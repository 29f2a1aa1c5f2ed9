//! Finite, exact computations around relative mixing conditions for triples
//! of groups `H ≤ K ≤ G`.

pub mod algebra;
pub mod certs;
pub mod cli;
pub mod constructions;
pub mod cosets;
pub mod elem;
pub mod error;
pub mod experiments;
pub mod group;
pub mod instances;
pub mod literal;
pub mod report;

pub use elem::Elem;
pub use error::{Error, Result};
pub use group::{Budget, Group, GroupRef, SearchOutcome, Subgroup, Triple};
