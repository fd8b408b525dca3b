//! Step-by-step replay of scripted impossibility proofs.
//!
//! A script lists claims about `f` at individual profiles together with the
//! reasons the proof gives for them. Each step is checked on one incremental
//! solver loaded with the whole encoding, every clause group behind its own
//! selector: only the groups the justification cites are switched on, every
//! earlier conclusion is asserted, and the claim is negated. The step holds
//! iff that is unsatisfiable.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cnf::Lit;
use crate::encoder::{encode, AxiomInstance, EncodeConfig, Encoding};
use crate::error::Error;
use crate::model::{Ballot, Committee, ElectionParams, Profile};
use crate::solver::{Solver, SolverConfig, SolverStats, Status};

pub const SCRIPT_FORMAT_VERSION: u32 = 1;

const BASE_CASE: &str = include_str!("base_case.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    Equals(String),
    In(Vec<String>),
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Justification {
    /// The allowed committees at the step's profile.
    Proportionality,
    /// The singleton-approver argument: for each qualifying candidate, the
    /// party-list profile where everyone else reports `C \ {c}` and the
    /// chain of voters switching back.
    Lemma2,
    /// Voter `voter` (1-based) links this profile and the profile of step `from`.
    Strategyproofness { from: String, voter: usize },
    /// A without-loss-of-generality assumption present in the encoding.
    Symmetry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub id: String,
    pub profile: String,
    pub claim: Claim,
    pub justification: Vec<Justification>,
    /// Assumptions are checked like steps but not counted as deductions.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub assumption: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofScript {
    pub format_version: u32,
    pub name: String,
    pub config: EncodeConfig,
    pub steps: Vec<ProofStep>,
}

impl ProofScript {
    pub fn base_case() -> ProofScript {
        serde_json::from_str(BASE_CASE).expect("embedded script parses")
    }

    pub fn from_json(s: &str) -> Result<ProofScript, Error> {
        let script: ProofScript = serde_json::from_str(s)?;
        if script.format_version != SCRIPT_FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported proof script version {}",
                script.format_version
            )));
        }
        Ok(script)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub id: String,
    pub profile: String,
    pub claim: Claim,
    pub justification: Vec<Justification>,
    pub assumption: bool,
    pub verified: bool,
    /// Clause groups switched on for this step.
    pub groups: usize,
    pub clauses: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub stats: SolverStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub name: String,
    pub steps: Vec<StepReport>,
    /// Deductions, i.e. steps that are not assumptions.
    pub counted_steps: usize,
    pub verified_steps: usize,
    /// The last step claims a contradiction and was verified.
    pub contradiction: bool,
    pub verified: bool,
}

impl ProofReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.name);
        for s in &self.steps {
            let tag = match (s.assumption, s.verified) {
                (true, true) => "assumed",
                (false, true) => "ok",
                (_, false) => "FAILED",
            };
            out.push_str(&format!(
                "  [{tag:>7}] {:<14} f({}) {}  <- {}  ({} groups, {} conflicts)\n",
                s.id,
                s.profile,
                claim_text(&s.claim),
                s.justification.iter().map(justification_text).join("; "),
                s.groups,
                s.stats.conflicts
            ));
            if let Some(e) = &s.error {
                out.push_str(&format!("            {e}\n"));
            }
        }
        out.push_str(&format!(
            "{}/{} steps verified, contradiction {}\n",
            self.verified_steps,
            self.counted_steps,
            if self.contradiction { "reached" } else { "not reached" }
        ));
        out
    }
}

fn claim_text(c: &Claim) -> String {
    match c {
        Claim::Equals(w) => format!("= {w}"),
        Claim::In(ws) => format!("in {{{}}}", ws.join(", ")),
        Claim::Contradiction => "leads to a contradiction".into(),
    }
}

fn justification_text(j: &Justification) -> String {
    match j {
        Justification::Proportionality => "proportionality".into(),
        Justification::Lemma2 => "singleton approvers".into(),
        Justification::Strategyproofness { from, voter } => format!("strategyproofness, voter {voter} vs {from}"),
        Justification::Symmetry => "symmetry".into(),
    }
}

/// Replays the embedded base-case proof.
pub fn replay_base_case() -> Result<ProofReport, Error> {
    replay(&ProofScript::base_case())
}

struct Replayer {
    enc: Encoding,
    solver: Solver,
    selectors: Vec<Lit>,
    by_instance: HashMap<AxiomInstance, usize>,
    next_var: u32,
}

impl Replayer {
    fn new(enc: Encoding) -> Replayer {
        let base = enc.cnf.num_vars();
        let groups = enc.cnf.groups().len() as u32;
        let mut solver = Solver::new(SolverConfig::default());
        solver.ensure_vars(base + groups);
        let mut selectors = Vec::with_capacity(groups as usize);
        let mut by_instance = HashMap::new();
        let mut buf = Vec::new();
        for (g, group) in enc.cnf.groups().iter().enumerate() {
            let s = Lit::pos(base + 1 + g as u32);
            selectors.push(s);
            by_instance.insert(group.instance.clone(), g);
            for i in group.clauses.clone() {
                buf.clear();
                buf.push(!s);
                buf.extend_from_slice(enc.cnf.clause(i));
                solver.add_clause(&buf);
            }
        }
        Replayer {
            enc,
            solver,
            selectors,
            by_instance,
            next_var: base + groups + 1,
        }
    }

    fn fresh(&mut self) -> Lit {
        let v = self.next_var;
        self.next_var += 1;
        self.solver.ensure_vars(v);
        Lit::pos(v)
    }

    fn params(&self) -> ElectionParams {
        self.enc.config.params
    }

    fn rank(&self, p: &Profile) -> u64 {
        p.rank(&self.params())
    }

    fn function_groups(&self, p: &Profile, out: &mut BTreeSet<usize>) -> Result<(), String> {
        let rank = self.rank(p);
        let total = self
            .by_instance
            .get(&AxiomInstance::Totality { profile: rank })
            .ok_or_else(|| format!("profile ({p}) is not encoded"))?;
        out.insert(*total);
        if let Some(&u) = self.by_instance.get(&AxiomInstance::Uniqueness { profile: rank }) {
            out.insert(u);
        }
        Ok(())
    }

    /// Strategyproofness groups between two profiles differing only in
    /// `voter`'s ballot, in whichever directions the encoding has them.
    fn sp_groups(&self, a: &Profile, b: &Profile, voter: usize, out: &mut BTreeSet<usize>) -> Result<(), String> {
        let differ: Vec<usize> = (0..a.len()).filter(|&i| a.ballot(i) != b.ballot(i)).collect();
        if differ != [voter] {
            return Err(format!("({a}) and ({b}) are not variants for voter {}", voter + 1));
        }
        let (ra, rb) = (self.rank(a), self.rank(b));
        let mut found = false;
        for (p, q) in [(ra, rb), (rb, ra)] {
            let inst = AxiomInstance::Strategyproofness { profile: p, voter, variant: q };
            if let Some(&g) = self.by_instance.get(&inst) {
                out.insert(g);
                found = true;
            }
        }
        self.function_groups(a, out)?;
        self.function_groups(b, out)?;
        if found {
            Ok(())
        } else {
            Err(format!(
                "no strategyproofness constraint links ({a}) and ({b}) for voter {}",
                voter + 1
            ))
        }
    }

    fn lemma2_groups(&self, p: &Profile, out: &mut BTreeSet<usize>) -> Result<(), String> {
        let params = self.params();
        if params.m != params.k + 1 {
            return Err(format!("the singleton-approver argument needs m = k + 1, not {params}"));
        }
        let full = params.full_mask();
        let mut any = false;
        for c in 0..params.m {
            let single = Ballot::singleton(c);
            let count = p.count(single);
            if count == 0 || count * params.k < params.n || p.approval_score(c) != count {
                continue;
            }
            any = true;
            let rest = Ballot::new(full & !(1 << c), params.m).map_err(|e| e.to_string())?;
            let mut cur = Profile::new(
                p.ballots()
                    .iter()
                    .map(|&b| if b == single { b } else { rest })
                    .collect(),
            );
            self.function_groups(&cur, out)?;
            for j in 0..p.len() {
                if cur.ballot(j) == p.ballot(j) {
                    continue;
                }
                let next = cur.with_ballot(j, p.ballot(j));
                self.sp_groups(&cur, &next, j, out)?;
                cur = next;
            }
        }
        if any {
            Ok(())
        } else {
            Err(format!("no singleton ballot at ({p}) meets the quota without other approvers"))
        }
    }

    fn committee(&self, s: &str) -> Result<Committee, String> {
        Committee::parse(s, &self.params()).map_err(|e| e.to_string())
    }

    fn var(&self, p: &Profile, w: Committee) -> Option<u32> {
        self.enc.varmap.var_for(p, w)
    }

    /// The claim as a clause set over `x` variables. `None` for a contradiction.
    fn claim_clause(&self, p: &Profile, claim: &Claim) -> Result<Option<Vec<Lit>>, String> {
        let ws: Vec<Committee> = match claim {
            Claim::Equals(w) => vec![self.committee(w)?],
            Claim::In(ws) => ws.iter().map(|w| self.committee(w)).collect::<Result<_, _>>()?,
            Claim::Contradiction => return Ok(None),
        };
        if ws.is_empty() {
            return Err("empty committee set".into());
        }
        Ok(Some(ws.into_iter().filter_map(|w| self.var(p, w)).map(Lit::pos).collect()))
    }
}

/// Replays a script against a fresh encoding of its configuration.
pub fn replay(script: &ProofScript) -> Result<ProofReport, Error> {
    let enc = encode(&script.config)?;
    let params = enc.config.params;
    let mut r = Replayer::new(enc);
    let mut profiles: HashMap<String, Profile> = HashMap::new();
    let mut conclusions: Vec<Lit> = Vec::new();
    let mut reports = Vec::new();

    for step in &script.steps {
        let p = Profile::parse(&step.profile, params.m)?;
        p.validate(&params)?;
        let mut groups = BTreeSet::new();
        let mut problem: Option<String> = None;
        let mut note = |res: Result<(), String>| {
            if let Err(e) = res {
                problem.get_or_insert(e);
            }
        };
        if profiles.contains_key(&step.id) {
            note(Err(format!("duplicate step id {}", step.id)));
        }
        note(r.function_groups(&p, &mut groups));
        for j in &step.justification {
            match j {
                Justification::Proportionality => {}
                Justification::Lemma2 => note(r.lemma2_groups(&p, &mut groups)),
                Justification::Strategyproofness { from, voter } => match profiles.get(from) {
                    None => note(Err(format!("step {from} is not an earlier step"))),
                    Some(_) if *voter == 0 || *voter > params.n => {
                        note(Err(format!("voter {voter} out of range")))
                    }
                    Some(q) => note(r.sp_groups(&p, q, voter - 1, &mut groups)),
                },
                Justification::Symmetry => {
                    let found = r.enc.cnf.groups().iter().position(|g| {
                        matches!(g.instance, AxiomInstance::Symmetry { profile, .. } if profile == r.rank(&p))
                    });
                    match found {
                        Some(g) => {
                            groups.insert(g);
                        }
                        None => note(Err(format!("the encoding has no symmetry assumption at ({p})"))),
                    }
                }
            }
        }
        let claim = match r.claim_clause(&p, &step.claim) {
            Ok(c) => c,
            Err(e) => {
                note(Err(e));
                None
            }
        };

        let before = r.solver.stats();
        let mut verified = false;
        if problem.is_none() {
            // negate the claim behind a throwaway activation literal
            let act = r.fresh();
            if let Some(clause) = &claim {
                for &l in clause {
                    r.solver.add_clause(&[!act, !l]);
                }
            }
            let mut assumptions: Vec<Lit> = groups.iter().map(|&g| r.selectors[g]).collect();
            assumptions.extend_from_slice(&conclusions);
            assumptions.push(act);
            match r.solver.solve(&assumptions) {
                Status::Unsat => verified = true,
                Status::Sat => {
                    problem = Some("the cited constraints do not force the claim".into());
                }
                Status::Aborted => problem = Some("solver gave up".into()),
            }
            r.solver.add_clause(&[!act]);
        }
        // later steps may rely on this claim as the proof does
        if let Some(clause) = claim {
            let guard = r.fresh();
            let mut c = vec![!guard];
            c.extend(clause);
            r.solver.add_clause(&c);
            conclusions.push(guard);
        }
        let after = r.solver.stats();
        let clauses = groups.iter().map(|&g| r.enc.cnf.groups()[g].clauses.len()).sum();
        reports.push(StepReport {
            id: step.id.clone(),
            profile: p.to_string(),
            claim: step.claim.clone(),
            justification: step.justification.clone(),
            assumption: step.assumption,
            verified,
            groups: groups.len(),
            clauses,
            error: problem,
            stats: SolverStats {
                decisions: after.decisions - before.decisions,
                propagations: after.propagations - before.propagations,
                conflicts: after.conflicts - before.conflicts,
                restarts: after.restarts - before.restarts,
                learnt_clauses: after.learnt_clauses - before.learnt_clauses,
            },
        });
        profiles.insert(step.id.clone(), p);
    }

    let counted_steps = reports.iter().filter(|s| !s.assumption).count();
    let verified_steps = reports.iter().filter(|s| !s.assumption && s.verified).count();
    let contradiction = reports
        .last()
        .is_some_and(|s| s.verified && s.claim == Claim::Contradiction);
    let verified = contradiction && reports.iter().all(|s| s.verified);
    Ok(ProofReport {
        name: script.name.clone(),
        steps: reports,
        counted_steps,
        verified_steps,
        contradiction,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_replays() {
        let report = replay_base_case().unwrap();
        for s in &report.steps {
            assert!(s.verified, "{}: {:?}", s.id, s.error);
        }
        assert_eq!(report.counted_steps, 15);
        assert_eq!(report.verified_steps, 15);
        assert!(report.contradiction && report.verified);
    }

    #[test]
    fn wrong_claims_are_rejected() {
        let mut script = ProofScript::base_case();
        // P2 is forced to bcd, not abd
        let p2 = script.steps.iter_mut().find(|s| s.id == "P2").unwrap();
        p2.claim = Claim::Equals("abd".into());
        let report = replay(&script).unwrap();
        let p2 = report.steps.iter().find(|s| s.id == "P2").unwrap();
        assert!(!p2.verified);
        assert!(!report.verified);
    }

    #[test]
    fn steps_need_their_citations() {
        let mut script = ProofScript::base_case();
        let p2 = script.steps.iter_mut().find(|s| s.id == "P2").unwrap();
        p2.justification.truncate(1);
        let report = replay(&script).unwrap();
        assert!(!report.steps.iter().find(|s| s.id == "P2").unwrap().verified);
    }

    #[test]
    fn forward_references_fail() {
        let mut script = ProofScript::base_case();
        script.steps[2].justification[1] = Justification::Strategyproofness {
            from: "P7".into(),
            voter: 2,
        };
        let report = replay(&script).unwrap();
        assert!(report.steps[2].error.as_deref().unwrap().contains("earlier"));
    }
}
