mod common;

use abcsat::cnf::{Cnf, Lit};
use abcsat::solver::{load, run, solve_with, verify_model, SolverConfig, Verdict};
use common::{masks, random_formula, to_cnf, truth_table_sat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn configs() -> Vec<SolverConfig> {
    vec![
        SolverConfig::default(),
        SolverConfig { restarts: false, clause_deletion: false, ..SolverConfig::default() },
        SolverConfig { restart_base: 1, ..SolverConfig::default() },
    ]
}

#[test]
fn random_formulas_agree_with_truth_tables() {
    let cfgs = configs();
    let disagreements: Vec<String> = (0..12_000u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let (n, clauses) = random_formula(seed);
            let expect = truth_table_sat(n, &masks(&clauses));
            let cnf = to_cnf(n, &clauses);
            let mut bad = Vec::new();
            for (i, cfg) in cfgs.iter().enumerate() {
                let r = solve_with(&cnf, &[], *cfg);
                match r.status {
                    Verdict::Satisfiable => {
                        if !expect {
                            bad.push(format!("seed {seed} config {i}: SAT on an unsatisfiable formula"));
                        }
                        if !verify_model(&cnf, r.model.as_ref().unwrap()).unwrap() {
                            bad.push(format!("seed {seed} config {i}: model fails"));
                        }
                    }
                    Verdict::Unsatisfiable => {
                        if expect {
                            bad.push(format!("seed {seed} config {i}: UNSAT on a satisfiable formula"));
                        }
                    }
                    Verdict::Aborted => bad.push(format!("seed {seed} config {i}: aborted")),
                }
            }
            bad
        })
        .collect();
    assert!(disagreements.is_empty(), "{:?}", &disagreements[..disagreements.len().min(10)]);
}

#[test]
fn assumptions_agree_with_truth_tables() {
    let bad: Vec<String> = (0..4_000u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let (n, clauses) = random_formula(seed + 1_000_000);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let assumptions: Vec<i32> = (0..rng.gen_range(0..=n.min(4)))
                .map(|_| {
                    let v = rng.gen_range(1..=n) as i32;
                    if rng.gen_bool(0.5) { v } else { -v }
                })
                .collect();
            let units: Vec<Vec<i32>> = assumptions.iter().map(|&a| vec![a]).collect();
            let expect = truth_table_sat(n, &masks(&[clauses.clone(), units].concat()));
            let cnf = to_cnf(n, &clauses);
            let lits: Vec<Lit> = assumptions.iter().map(|&a| Lit::from_dimacs(a)).collect();
            let mut out = Vec::new();
            let mut s = load(&cnf, SolverConfig::default());
            let r = run(&mut s, &lits, n);
            match r.status {
                Verdict::Satisfiable => {
                    let model = r.model.unwrap();
                    if !expect || !verify_model(&cnf, &model).unwrap() {
                        out.push(format!("seed {seed}: bad SAT"));
                    }
                    if !lits.iter().all(|l| model[(l.var() - 1) as usize] == l.is_positive()) {
                        out.push(format!("seed {seed}: model ignores assumptions"));
                    }
                }
                Verdict::Unsatisfiable => {
                    if expect {
                        out.push(format!("seed {seed}: bad UNSAT"));
                    }
                    let failed = r.failed_assumptions.unwrap();
                    if !failed.iter().all(|l| lits.contains(l)) {
                        out.push(format!("seed {seed}: failed set is not a subset"));
                    }
                    let mut fresh = load(&cnf, SolverConfig::default());
                    if run(&mut fresh, &failed, n).status != Verdict::Unsatisfiable {
                        out.push(format!("seed {seed}: failed set is not sufficient"));
                    }
                }
                Verdict::Aborted => out.push(format!("seed {seed}: aborted")),
            }
            // the same solver must stay usable
            let again = run(&mut s, &[], n);
            let plain = truth_table_sat(n, &masks(&clauses));
            if again.is_sat() != plain {
                out.push(format!("seed {seed}: reuse after assumptions disagrees"));
            }
            out
        })
        .collect();
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(10)]);
}

#[test]
fn incremental_clauses_agree_with_truth_tables() {
    for seed in 0..1_500u64 {
        let (n, clauses) = random_formula(seed + 2_000_000);
        let mut s = load(&Cnf::new(n), SolverConfig::default());
        for (i, c) in clauses.iter().enumerate() {
            s.add_clause(&c.iter().map(|&x| Lit::from_dimacs(x)).collect::<Vec<_>>());
            if i % 5 == 4 || i + 1 == clauses.len() {
                let expect = truth_table_sat(n, &masks(&clauses[..=i]));
                assert_eq!(run(&mut s, &[], n).is_sat(), expect, "seed {seed} after {} clauses", i + 1);
            }
        }
    }
}

#[test]
fn dimacs_round_trip_preserves_verdicts() {
    for seed in 0..500u64 {
        let (n, clauses) = random_formula(seed + 3_000_000);
        let cnf = to_cnf(n, &clauses);
        let text = cnf.to_dimacs_string(None);
        let back = Cnf::parse_dimacs_str(&text).unwrap();
        assert_eq!(back.clauses().collect::<Vec<_>>(), cnf.clauses().collect::<Vec<_>>());
        assert_eq!(back.num_vars(), cnf.num_vars());
    }
}
