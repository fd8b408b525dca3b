//! Executable forms of the hand proofs: the singleton-approver lemma, base
//! case replay, and the induction-step rule transformers.

mod replay;
mod transform;

pub use replay::{
    replay, replay_base_case, Claim, Justification, ProofReport, ProofScript, ProofStep, StepReport,
    SCRIPT_FORMAT_VERSION,
};
pub use transform::{droop_guard, droop_reduce, reduce_alternatives, reduce_committee_size, reduce_voters};

use crate::axioms::{check, Axiom, AxiomVerdict};
use crate::error::Error;
use crate::rules::RuleTable;

/// Checks the singleton-approver condition; only meaningful at `m = k + 1`.
pub fn check_lemma2(t: &RuleTable) -> Result<AxiomVerdict, Error> {
    let p = t.params();
    if p.m != p.k + 1 {
        return Err(Error::Precondition(format!("the singleton-approver check needs m = k + 1, got {p}")));
    }
    Ok(check(t, Axiom::SingletonApprovers))
}
