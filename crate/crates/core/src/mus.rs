//! Group-level minimal unsatisfiable subsets.
//!
//! Each deletable group gets a selector variable `s` and its clauses are
//! added as `¬s ∨ C`. Groups are then tried for deletion in descending id
//! order on one incremental solver; whenever the remaining groups are still
//! unsatisfiable, the candidate set shrinks to the failed selectors.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::ops::Range;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cnf::{Cnf, Lit};
use crate::encoder::{allowed_committees, AxiomInstance, Encoding, ProportionalityMode};
use crate::error::Error;
use crate::model::{enumerate_committees, Profile};
use crate::solver::{self, Solver, SolverConfig, Status};

#[derive(Debug, Clone, Copy)]
pub struct MusOptions {
    /// Keep function-totality and uniqueness groups as fixed background
    /// instead of deletion candidates.
    pub hard_function_constraints: bool,
    pub solver: SolverConfig,
}

impl Default for MusOptions {
    fn default() -> Self {
        MusOptions {
            hard_function_constraints: true,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreGroup {
    /// Group id in the input formula (clause index for ungrouped input).
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<AxiomInstance>,
    pub first_clause: usize,
    pub clause_count: usize,
    /// Part of the background rather than the minimised set.
    pub hard: bool,
}

impl CoreGroup {
    pub fn clauses(&self) -> Range<usize> {
        self.first_clause..self.first_clause + self.clause_count
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MusResult {
    /// Retained groups in ascending id order. Background groups are included
    /// only for profiles the minimised groups mention.
    pub groups: Vec<CoreGroup>,
    /// Ranks of the profiles mentioned by the retained groups.
    pub profiles: Vec<u64>,
    pub hard_function_constraints: bool,
    pub solver_calls: usize,
}

impl MusResult {
    pub fn group_ids(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.id).collect()
    }

    pub fn soft_groups(&self) -> impl Iterator<Item = &CoreGroup> {
        self.groups.iter().filter(|g| !g.hard)
    }

    pub fn num_clauses(&self) -> usize {
        self.groups.iter().map(|g| g.clause_count).sum()
    }

    /// The retained clauses as a formula of their own.
    pub fn to_cnf(&self, cnf: &Cnf) -> Cnf {
        let mut out = Cnf::new(cnf.num_vars());
        for g in &self.groups {
            match &g.instance {
                Some(inst) => out.add_group(inst.clone(), g.clauses().map(|i| cnf.clause(i))),
                None => {
                    for i in g.clauses() {
                        out.add_clause(cnf.clause(i));
                    }
                }
            }
        }
        out.set_num_vars(cnf.num_vars());
        out
    }
}

#[derive(Debug, Clone)]
struct Unit {
    id: usize,
    instance: Option<AxiomInstance>,
    clauses: Range<usize>,
    hard: bool,
}

fn units(cnf: &Cnf, hard_function: bool) -> Vec<Unit> {
    if cnf.groups().is_empty() {
        (0..cnf.num_clauses())
            .map(|i| Unit {
                id: i,
                instance: None,
                clauses: i..i + 1,
                hard: false,
            })
            .collect()
    } else {
        cnf.groups()
            .iter()
            .enumerate()
            .map(|(id, g)| Unit {
                id,
                instance: Some(g.instance.clone()),
                clauses: g.clauses.clone(),
                hard: hard_function && g.instance.is_function_constraint(),
            })
            .collect()
    }
}

/// Extracts a group-minimal unsatisfiable core. Formulas without clause
/// groups are treated as one group per clause.
pub fn extract_mus(cnf: &Cnf, opts: &MusOptions) -> Result<MusResult, Error> {
    let units = units(cnf, opts.hard_function_constraints);
    let soft: Vec<usize> = (0..units.len()).filter(|&u| !units[u].hard).collect();
    let base = cnf.num_vars();
    let selector = |j: usize| Lit::pos(base + 1 + j as u32);

    let mut s = Solver::new(opts.solver);
    s.ensure_vars(base + soft.len() as u32);
    let mut clause_buf = Vec::new();
    for u in units.iter().filter(|u| u.hard) {
        for i in u.clauses.clone() {
            s.add_clause(cnf.clause(i));
        }
    }
    for (j, &u) in soft.iter().enumerate() {
        for i in units[u].clauses.clone() {
            clause_buf.clear();
            clause_buf.push(!selector(j));
            clause_buf.extend_from_slice(cnf.clause(i));
            s.add_clause(&clause_buf);
        }
    }

    let mut calls = 0usize;
    let mut in_core = vec![true; soft.len()];
    let mut necessary = vec![false; soft.len()];
    let assumptions = |in_core: &[bool], skip: Option<usize>| -> Vec<Lit> {
        (0..in_core.len())
            .filter(|&j| in_core[j] && Some(j) != skip)
            .map(selector)
            .collect()
    };
    let shrink_to_failed = |s: &mut Solver, in_core: &mut Vec<bool>| {
        let failed: BTreeSet<u32> = s.failed_assumptions().iter().map(|l| l.var()).collect();
        for j in 0..in_core.len() {
            if in_core[j] && !failed.contains(&selector(j).var()) {
                in_core[j] = false;
                s.add_clause(&[!selector(j)]);
            }
        }
    };

    calls += 1;
    match s.solve(&assumptions(&in_core, None)) {
        Status::Sat => return Err(Error::Satisfiable),
        Status::Aborted => return Err(Error::Aborted),
        Status::Unsat => shrink_to_failed(&mut s, &mut in_core),
    }
    for j in (0..soft.len()).rev() {
        if !in_core[j] || necessary[j] {
            continue;
        }
        calls += 1;
        match s.solve(&assumptions(&in_core, Some(j))) {
            Status::Sat => necessary[j] = true,
            Status::Aborted => return Err(Error::Aborted),
            Status::Unsat => {
                in_core[j] = false;
                s.add_clause(&[!selector(j)]);
                shrink_to_failed(&mut s, &mut in_core);
            }
        }
    }

    let kept_soft: Vec<usize> = (0..soft.len()).filter(|&j| in_core[j]).map(|j| soft[j]).collect();
    let profiles: BTreeSet<u64> = kept_soft
        .iter()
        .filter_map(|&u| units[u].instance.as_ref())
        .flat_map(|i| i.profiles())
        .collect();
    let mut kept: BTreeSet<usize> = kept_soft.into_iter().collect();
    for (u, unit) in units.iter().enumerate() {
        if unit.hard {
            let mentioned = unit
                .instance
                .as_ref()
                .is_some_and(|i| i.profiles().iter().any(|r| profiles.contains(r)));
            if mentioned {
                kept.insert(u);
            }
        }
    }
    Ok(MusResult {
        groups: kept
            .into_iter()
            .map(|u| {
                let unit = &units[u];
                CoreGroup {
                    id: unit.id,
                    instance: unit.instance.clone(),
                    first_clause: unit.clauses.start,
                    clause_count: unit.clauses.len(),
                    hard: unit.hard,
                }
            })
            .collect(),
        profiles: profiles.into_iter().collect(),
        hard_function_constraints: opts.hard_function_constraints,
        solver_calls: calls,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MusCheck {
    pub unsatisfiable: bool,
    /// Every minimised group is needed: dropping it leaves a satisfiable set.
    pub minimal: bool,
    pub solver_calls: usize,
}

/// Re-checks a core with fresh solver instances.
pub fn verify_mus(cnf: &Cnf, mus: &MusResult) -> MusCheck {
    let collect = |skip: Option<usize>| -> Cnf {
        let mut out = Cnf::new(cnf.num_vars());
        for g in mus.groups.iter().filter(|g| Some(g.id) != skip) {
            for i in g.clauses() {
                out.add_clause(cnf.clause(i));
            }
        }
        out
    };
    let mut calls = 1;
    let unsatisfiable = solver::solve(&collect(None), &[]).is_unsat();
    let mut minimal = true;
    for g in mus.soft_groups() {
        calls += 1;
        if !solver::solve(&collect(Some(g.id)), &[]).is_sat() {
            minimal = false;
            break;
        }
    }
    MusCheck {
        unsatisfiable,
        minimal,
        solver_calls: calls,
    }
}

fn profile_text(rank: u64, enc: &Encoding) -> String {
    Profile::from_rank(rank, &enc.config.params).to_string()
}

/// One line of paper vocabulary for an axiom instance.
pub fn describe_instance(instance: &AxiomInstance, enc: &Encoding) -> String {
    let params = &enc.config.params;
    match instance {
        AxiomInstance::Totality { profile } => {
            let p = Profile::from_rank(*profile, params);
            let allowed = allowed_committees(&p, &enc.config).unwrap_or_default();
            if allowed.len() == enc_all_committees(enc) {
                format!("f({p}) is some committee")
            } else {
                let prop_only = allowed_committees(&p, &enc.config.clone().weak_efficiency(false))
                    .map(|a| a.len())
                    .unwrap_or(0);
                let reason = if prop_only == enc_all_committees(enc) {
                    "weak efficiency".to_string()
                } else if prop_only != allowed.len() {
                    format!("{} and weak efficiency", prop_name(enc.config.proportionality))
                } else {
                    prop_name(enc.config.proportionality).to_string()
                };
                format!(
                    "{reason} at profile ({p}) forces {{{}}}",
                    allowed.iter().map(|w| w.to_string()).join(", ")
                )
            }
        }
        AxiomInstance::Uniqueness { profile } => {
            format!("f({}) takes a single value", profile_text(*profile, enc))
        }
        AxiomInstance::Strategyproofness { profile, voter, variant } => {
            let p = Profile::from_rank(*profile, params);
            let q = Profile::from_rank(*variant, params);
            format!(
                "strategyproofness links ({p}) and ({q}) for voter {}: sincere {}, reported {}",
                voter + 1,
                p.ballot(*voter),
                q.ballot(*voter)
            )
        }
        AxiomInstance::Symmetry { profile, committee } => {
            format!("symmetry assumption f({}) = {committee}", profile_text(*profile, enc))
        }
    }
}

fn enc_all_committees(enc: &Encoding) -> usize {
    enumerate_committees(&enc.config.params).len()
}

fn prop_name(mode: ProportionalityMode) -> &'static str {
    match mode {
        ProportionalityMode::HareSingleton => "proportionality",
        ProportionalityMode::JrPartyLists => "JR on party lists",
        ProportionalityMode::DroopSingleton => "Droop proportionality",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MusLine {
    pub group: usize,
    pub hard: bool,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MusReport {
    pub groups: usize,
    pub clauses: usize,
    pub profiles: Vec<String>,
    pub lines: Vec<MusLine>,
}

impl MusReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "unsatisfiable core: {} groups, {} clauses, {} profiles",
            self.groups,
            self.clauses,
            self.profiles.len()
        );
        for l in &self.lines {
            let _ = writeln!(s, "  {}", l.text);
        }
        s
    }
}

/// Renders a core ordered by profile rank. Without an encoding, groups are
/// shown as raw clauses.
pub fn render_mus(mus: &MusResult, cnf: &Cnf, enc: Option<&Encoding>) -> Result<MusReport, Error> {
    let mut keyed: Vec<(u64, u8, usize, String, bool)> = Vec::new();
    for g in &mus.groups {
        if g.clauses().end > cnf.num_clauses() {
            return Err(Error::Manifest(format!("group {} refers to missing clauses", g.id)));
        }
        let (key, kind, text) = match (&g.instance, enc) {
            (Some(inst), Some(enc)) => {
                let expect: Vec<Vec<Lit>> = g.clauses().map(|i| cnf.clause(i).to_vec()).collect();
                if enc.clauses_for(inst)? != expect {
                    return Err(Error::Manifest(format!(
                        "group {} does not match its axiom instance",
                        g.id
                    )));
                }
                let kind = match inst {
                    AxiomInstance::Symmetry { .. } => 0,
                    AxiomInstance::Totality { .. } => 1,
                    AxiomInstance::Uniqueness { .. } => 2,
                    AxiomInstance::Strategyproofness { .. } => 3,
                };
                (inst.sort_key(), kind, describe_instance(inst, enc))
            }
            (Some(_), None) => return Err(Error::Manifest("grouped core needs its encoding".into())),
            (None, _) => {
                let text = g
                    .clauses()
                    .map(|i| cnf.clause(i).iter().map(|l| l.to_string()).join(" "))
                    .map(|c| format!("clause {}: {c} 0", g.first_clause + 1))
                    .join("; ");
                (g.id as u64, 0, text)
            }
        };
        keyed.push((key, kind, g.id, text, g.hard));
    }
    keyed.sort();
    let profiles = match enc {
        Some(enc) => mus.profiles.iter().map(|&r| profile_text(r, enc)).collect(),
        None => Vec::new(),
    };
    Ok(MusReport {
        groups: mus.groups.len(),
        clauses: mus.num_clauses(),
        profiles,
        lines: keyed
            .into_iter()
            .map(|(_, _, group, text, hard)| MusLine { group, hard, text })
            .collect(),
    })
}

/// Grouped DIMACS (`p gcnf`): group 0 holds the background clauses, every
/// other group is numbered from 1 in id order.
pub fn write_gcnf(cnf: &Cnf, hard_function: bool, out: &mut impl Write) -> std::io::Result<()> {
    let units = units(cnf, hard_function);
    let soft = units.iter().filter(|u| !u.hard).count();
    writeln!(out, "p gcnf {} {} {}", cnf.num_vars(), cnf.num_clauses(), soft)?;
    let mut next = 0;
    for u in &units {
        let g = if u.hard {
            0
        } else {
            next += 1;
            next
        };
        for i in u.clauses.clone() {
            let body = cnf.clause(i).iter().map(|l| l.to_string()).join(" ");
            if body.is_empty() {
                writeln!(out, "{{{g}}} 0")?;
            } else {
                writeln!(out, "{{{g}}} {body} 0")?;
            }
        }
    }
    Ok(())
}
