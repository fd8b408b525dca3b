//! Embedded SAT solving, model checking and model decoding.

mod cdcl;

pub use cdcl::{Solver, SolverConfig, Stats, Status};

use serde::{Deserialize, Serialize};

use crate::cnf::{Cnf, Lit};
use crate::encoder::VarMap;
use crate::error::Error;
use crate::rules::RuleTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfiable,
    Unsatisfiable,
    Aborted,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

impl From<Stats> for SolverStats {
    fn from(s: Stats) -> Self {
        SolverStats {
            decisions: s.decisions,
            propagations: s.propagations,
            conflicts: s.conflicts,
            restarts: s.restarts,
            learnt_clauses: s.learnt_clauses,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: Verdict,
    /// One entry per variable, `model[v - 1]` for variable `v`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_assumptions: Option<Vec<Lit>>,
    pub stats: SolverStats,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        self.status == Verdict::Satisfiable
    }

    pub fn is_unsat(&self) -> bool {
        self.status == Verdict::Unsatisfiable
    }

    /// The model as DIMACS literals (`v` or `-v`).
    pub fn model_lits(&self) -> Option<Vec<i32>> {
        self.model.as_ref().map(|m| {
            m.iter()
                .enumerate()
                .map(|(i, &b)| if b { i as i32 + 1 } else { -(i as i32 + 1) })
                .collect()
        })
    }
}

pub fn load(cnf: &Cnf, config: SolverConfig) -> Solver {
    let mut s = Solver::new(config);
    s.ensure_vars(cnf.num_vars());
    for c in cnf.clauses() {
        if !s.add_clause(c) {
            break;
        }
    }
    s
}

pub fn solve(cnf: &Cnf, assumptions: &[Lit]) -> SolveResult {
    solve_with(cnf, assumptions, SolverConfig::default())
}

pub fn solve_with(cnf: &Cnf, assumptions: &[Lit], config: SolverConfig) -> SolveResult {
    let mut s = load(cnf, config);
    run(&mut s, assumptions, cnf.num_vars())
}

/// Runs an already loaded solver and packages the outcome.
pub fn run(s: &mut Solver, assumptions: &[Lit], num_vars: u32) -> SolveResult {
    let status = s.solve(assumptions);
    let stats = s.stats().into();
    match status {
        Status::Sat => {
            let mut model = s.model();
            model.truncate(num_vars.max(assumptions.iter().map(|l| l.var()).max().unwrap_or(0)) as usize);
            SolveResult {
                status: Verdict::Satisfiable,
                model: Some(model),
                failed_assumptions: None,
                stats,
            }
        }
        Status::Unsat => SolveResult {
            status: Verdict::Unsatisfiable,
            model: None,
            failed_assumptions: Some(s.failed_assumptions().to_vec()),
            stats,
        },
        Status::Aborted => SolveResult {
            status: Verdict::Aborted,
            model: None,
            failed_assumptions: None,
            stats,
        },
    }
}

/// True iff every clause has a literal made true by `model`.
pub fn verify_model(cnf: &Cnf, model: &[bool]) -> Result<bool, Error> {
    if model.len() < cnf.num_vars() as usize {
        return Err(Error::Decode(format!(
            "model assigns {} of {} variables",
            model.len(),
            cnf.num_vars()
        )));
    }
    let holds = |l: &Lit| model[(l.var() - 1) as usize] == l.is_positive();
    Ok(cnf.clauses().all(|c| c.iter().any(holds)))
}

/// Reads off the committee chosen at every encoded profile.
pub fn decode_model(model: &[bool], varmap: &VarMap) -> Result<RuleTable, Error> {
    if model.len() < varmap.len() {
        return Err(Error::Decode(format!(
            "model assigns {} of {} variables",
            model.len(),
            varmap.len()
        )));
    }
    let domain = varmap.domain().clone();
    let mut committees = Vec::with_capacity(domain.len());
    for pos in 0..domain.len() {
        let chosen: Vec<u32> = varmap.vars_at(pos).filter(|&v| model[(v - 1) as usize]).collect();
        match chosen.as_slice() {
            [v] => committees.push(varmap.entry(*v).1),
            [] => return Err(Error::Decode(format!("no committee chosen at ({})", domain.profile(pos)))),
            _ => {
                return Err(Error::Decode(format!(
                    "{} committees chosen at ({})",
                    chosen.len(),
                    domain.profile(pos)
                )))
            }
        }
    }
    RuleTable::from_committees(domain, committees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{encode, EncodeConfig};
    use crate::model::{ElectionParams, Profile};

    fn cnf(n: u32, clauses: &[&[i32]]) -> Cnf {
        let mut c = Cnf::new(n);
        for cl in clauses {
            c.add_clause(&cl.iter().map(|&x| Lit::from_dimacs(x)).collect::<Vec<_>>());
        }
        c
    }

    #[test]
    fn unit_and_contradiction() {
        let r = solve(&cnf(1, &[&[1]]), &[]);
        assert_eq!(r.model, Some(vec![true]));
        assert!(solve(&cnf(1, &[&[1], &[-1]]), &[]).is_unsat());
    }

    #[test]
    fn verify_model_rejects_flips_and_partial_models() {
        let f = cnf(2, &[&[1], &[-1, 2]]);
        assert!(verify_model(&f, &[true, true]).unwrap());
        assert!(!verify_model(&f, &[false, true]).unwrap());
        assert!(verify_model(&f, &[true]).is_err());
    }

    #[test]
    fn trivial_decode() {
        let enc = encode(&EncodeConfig::new(ElectionParams::new(2, 1, 1).unwrap())).unwrap();
        let r = solve(&enc.cnf, &[]);
        let t = decode_model(r.model.as_ref().unwrap(), &enc.varmap).unwrap();
        assert_eq!(t.get(&Profile::parse("a", 2).unwrap()).unwrap().to_string(), "a");
        assert_eq!(t.get(&Profile::parse("b", 2).unwrap()).unwrap().to_string(), "b");
        assert!(decode_model(&[true, true], &enc.varmap).is_ok());
        assert!(decode_model(&[false, true], &enc.varmap).is_err());
    }

    #[test]
    fn identical_runs_give_identical_results() {
        let enc = encode(&EncodeConfig::new(ElectionParams::new(3, 2, 2).unwrap())).unwrap();
        let a = serde_json::to_string(&solve(&enc.cnf, &[])).unwrap();
        let b = serde_json::to_string(&solve(&enc.cnf, &[])).unwrap();
        assert_eq!(a, b);
    }
}
