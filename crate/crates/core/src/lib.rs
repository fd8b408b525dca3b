//! Approval-based committee elections: rules, axiom checkers, and a SAT
//! pipeline for machine-checked impossibility results.

pub mod axioms;
pub mod cli;
pub mod cnf;
pub mod encoder;
pub mod error;
pub mod model;
pub mod mus;
pub mod proofs;
pub mod report;
pub mod rules;
pub mod solver;

pub use error::Error;
pub use model::{Ballot, Committee, ElectionParams, Profile};
pub use rules::RuleTable;
