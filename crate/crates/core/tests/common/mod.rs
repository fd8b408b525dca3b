//! Brute-force restatements of the axioms on raw bitmasks, used as oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

use abcsat::axioms::{check, revalidate, Axiom, SpVariant};
use abcsat::cnf::{Cnf, Lit};
use abcsat::model::CandidateSet;
use abcsat::rules::{build_table_in, random_table, Domain, Rule, RuleTable};
use abcsat::{Ballot, ElectionParams, Profile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn ones(x: u32) -> usize {
    x.count_ones() as usize
}

pub fn is_party_list(ballots: &[u32]) -> bool {
    ballots
        .iter()
        .all(|&a| ballots.iter().all(|&b| a == b || a & b == 0))
}

fn parties(ballots: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &b in ballots {
        match out.iter_mut().find(|(x, _)| *x == b) {
            Some(e) => e.1 += 1,
            None => out.push((b, 1)),
        }
    }
    out
}

/// Group conditions over every nonempty voter subset.
fn groups_ok(ballots: &[u32], w: u32, k: usize, max_ell: usize, strength: u8) -> bool {
    let n = ballots.len();
    for s in 1u32..(1 << n) {
        let members: Vec<u32> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| ballots[i]).collect();
        let inter = members.iter().fold(u32::MAX, |a, &b| a & b);
        let union = members.iter().fold(0, |a, &b| a | b);
        for ell in 1..=max_ell {
            if members.len() * k < ell * n || ones(inter) < ell {
                continue;
            }
            let ok = match strength {
                0 => w & union != 0,
                1 => ones(w & union) >= ell,
                _ => members.iter().any(|&b| ones(w & b) >= ell),
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Does committee `w` at `p` satisfy an outcome axiom?
pub fn outcome_ok(axiom: Axiom, p: &Profile, w: u32, params: &ElectionParams) -> bool {
    let (n, k, m) = (params.n, params.k, params.m);
    let ballots: Vec<u32> = p.ballots().iter().map(|b| b.mask()).collect();
    let union = ballots.iter().fold(0, |a, &b| a | b);
    let pl = is_party_list(&ballots);
    let ps = parties(&ballots);
    match axiom {
        Axiom::WeakEfficiency => ones(union) < k || w & !union == 0,
        Axiom::Proportionality => {
            !pl || ps.iter().all(|&(b, c)| ones(b) != 1 || c * k < n || w & b != 0)
        }
        Axiom::JrPartyLists => !pl || ps.iter().all(|&(b, c)| c * k < n || w & b != 0),
        Axiom::Jr => groups_ok(&ballots, w, k, 1, 0),
        Axiom::Pjr => groups_ok(&ballots, w, k, k, 1),
        Axiom::Ejr => groups_ok(&ballots, w, k, k, 2),
        Axiom::LowerQuota => {
            !pl || ps.iter().all(|&(b, c)| ones(w & b) >= (c * k / n).min(ones(b)))
        }
        Axiom::DisjointDiversity => !pl || ps.len() > k || ps.iter().all(|&(b, _)| w & b != 0),
        Axiom::DroopProportionality => {
            ps.iter().all(|&(b, c)| ones(b) != 1 || c * (k + 1) <= n || w & b != 0)
        }
        Axiom::SingletonApprovers => {
            assert_eq!(m, k + 1);
            ps.iter().all(|&(b, c)| {
                let others = ballots.iter().any(|&x| x != b && x & b != 0);
                ones(b) != 1 || c * k < n || others || w & b != 0
            })
        }
        Axiom::Strategyproofness(_) => panic!("not an outcome axiom"),
    }
}

pub fn improves(v: SpVariant, truthful: u32, before: u32, after: u32) -> bool {
    let (b, a) = (before & truthful, after & truthful);
    match v {
        SpVariant::Subset | SpVariant::Superset => a != b && a & b == b,
        SpVariant::Cardinality => ones(a) > ones(b),
        SpVariant::Hamming => ones(after ^ truthful) < ones(before ^ truthful),
    }
}

pub fn may_report(v: SpVariant, truthful: u32, reported: u32) -> bool {
    reported != truthful && (v != SpVariant::Subset || reported & !truthful == 0)
}

/// Does the table satisfy the strategyproofness variant, by brute force?
pub fn sp_ok(t: &RuleTable, v: SpVariant) -> bool {
    let params = *t.params();
    let full = (1u32 << params.m) - 1;
    for (p, w) in t.entries() {
        for i in 0..params.n {
            let truthful = p.ballot(i).mask();
            for reported in 1..full {
                if !may_report(v, truthful, reported) {
                    continue;
                }
                let q = p.with_ballot(i, abcsat::Ballot::new(reported, params.m).unwrap());
                if let Some(w2) = t.get(&q) {
                    if improves(v, truthful, w.mask(), w2.mask()) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Table-level verdict of any axiom, by brute force.
pub fn table_ok(t: &RuleTable, axiom: Axiom) -> bool {
    match axiom {
        Axiom::Strategyproofness(v) => sp_ok(t, v),
        a => t.entries().all(|(p, w)| outcome_ok(a, &p, w.mask(), t.params())),
    }
}

/// All k-subsets of the candidates as masks, ascending.
pub fn committees(params: &ElectionParams) -> Vec<u32> {
    (0u32..1 << params.m)
        .filter(|x| ones(*x) == params.k)
        .collect()
}

/// All tables satisfying hare proportionality and subset strategyproofness
/// (and optionally weak efficiency), by backtracking on the definitions.
pub fn enumerate_passing(pp: &ElectionParams, weak_eff: bool) -> BTreeSet<Vec<u32>> {
    let d = Domain::admissible(pp).unwrap();
    let ws = committees(pp);
    let ps: Vec<Profile> = d.profiles().collect();
    let allowed: Vec<Vec<u32>> = ps
        .iter()
        .map(|p| {
            ws.iter()
                .copied()
                .filter(|&w| outcome_ok(Axiom::Proportionality, p, w, pp))
                .filter(|&w| !weak_eff || outcome_ok(Axiom::WeakEfficiency, p, w, pp))
                .collect()
        })
        .collect();
    // constraints against earlier positions: (other, truthful ballot, this one is the truthful side)
    let mut links: Vec<Vec<(usize, u32, bool)>> = vec![Vec::new(); ps.len()];
    let full = (1u32 << pp.m) - 1;
    for (x, p) in ps.iter().enumerate() {
        for i in 0..pp.n {
            let truthful = p.ballot(i).mask();
            for reported in 1..full {
                if !may_report(SpVariant::Subset, truthful, reported) {
                    continue;
                }
                let q = p.with_ballot(i, Ballot::new(reported, pp.m).unwrap());
                if let Some(y) = d.position(&q) {
                    let (later, earlier, truthful_later) = if x > y { (x, y, true) } else { (y, x, false) };
                    links[later].push((earlier, truthful, truthful_later));
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut cur = vec![0u32; ps.len()];
    fn go(
        pos: usize,
        cur: &mut Vec<u32>,
        allowed: &[Vec<u32>],
        links: &[Vec<(usize, u32, bool)>],
        out: &mut BTreeSet<Vec<u32>>,
    ) {
        if pos == cur.len() {
            out.insert(cur.clone());
            return;
        }
        for &w in &allowed[pos] {
            let ok = links[pos].iter().all(|&(other, truthful, here_truthful)| {
                let (before, after) = if here_truthful { (w, cur[other]) } else { (cur[other], w) };
                !improves(SpVariant::Subset, truthful, before, after)
            });
            if ok {
                cur[pos] = w;
                go(pos + 1, cur, allowed, links, out);
            }
        }
    }
    go(0, &mut cur, &allowed, &links, &mut out);
    out
}

pub const EDGES: [(Axiom, Axiom); 7] = [
    (Axiom::Ejr, Axiom::Pjr),
    (Axiom::Pjr, Axiom::Jr),
    (Axiom::Jr, Axiom::JrPartyLists),
    (Axiom::JrPartyLists, Axiom::Proportionality),
    (Axiom::Pjr, Axiom::LowerQuota),
    (Axiom::LowerQuota, Axiom::JrPartyLists),
    (Axiom::DroopProportionality, Axiom::Proportionality),
];

pub const SP_CHAIN: [SpVariant; 3] = [SpVariant::Cardinality, SpVariant::Superset, SpVariant::Subset];

pub fn lattice_tables(n_random: u64) -> Vec<RuleTable> {
    let d = Domain::admissible(&ElectionParams::new(4, 3, 2).unwrap()).unwrap();
    let av = build_table_in(Rule::Av, d.clone(), 1).unwrap();
    let pav = build_table_in(Rule::Pav, d.clone(), 1).unwrap();
    let biases = [0.0, 0.5, 0.9, 0.99, 0.999, 0.9999];
    let mut out: Vec<RuleTable> = (0..n_random)
        .into_par_iter()
        .map(|seed| {
            let base = if seed % 2 == 0 { &av } else { &pav };
            random_table(d.clone(), seed, Some(base), biases[(seed as usize / 2) % biases.len()]).unwrap()
        })
        .collect();
    out.push(av);
    out.push(pav);
    out
}

/// Returns violated edges as (stronger, weaker, table index).
pub fn lattice_violations(ts: &[RuleTable]) -> (Vec<(String, String, usize)>, Vec<usize>) {
    let per_table: Vec<(Vec<(String, String, usize)>, Vec<Axiom>)> = ts
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let mut bad = Vec::new();
            let mut passed = Vec::new();
            let verdict = |a: Axiom| check(t, a);
            for (strong, weak) in EDGES {
                let (s, w) = (verdict(strong), verdict(weak));
                if s.passed && !w.passed {
                    bad.push((strong.to_string(), weak.to_string(), i));
                }
            }
            let sp: Vec<_> = SP_CHAIN.iter().map(|&v| verdict(Axiom::Strategyproofness(v))).collect();
            for pair in sp.windows(2) {
                if pair[0].passed && !pair[1].passed {
                    bad.push((pair[0].axiom.to_string(), pair[1].axiom.to_string(), i));
                }
            }
            // a manipulation of a weaker kind is one of every stronger kind
            for (j, v) in sp.iter().enumerate() {
                if let Some(w) = &v.witness {
                    for stronger in &SP_CHAIN[..j] {
                        if !revalidate(Axiom::Strategyproofness(*stronger), w, t.params()) {
                            bad.push((v.axiom.to_string(), format!("witness for {stronger:?}"), i));
                        }
                    }
                }
            }
            let hamming = verdict(Axiom::Strategyproofness(SpVariant::Hamming));
            if hamming.passed != sp[0].passed {
                bad.push(("hamming-sp".into(), "cardinality-sp".into(), i));
            }
            for a in Axiom::ALL {
                if a != Axiom::SingletonApprovers && verdict(a).passed {
                    passed.push(a);
                }
            }
            (bad, passed)
        })
        .collect();
    let mut bad = Vec::new();
    let mut counts = vec![0; Axiom::ALL.len()];
    for (b, passed) in per_table {
        bad.extend(b);
        for a in passed {
            counts[Axiom::ALL.iter().position(|&x| x == a).unwrap()] += 1;
        }
    }
    (bad, counts)
}

/// A clause as (positive mask, negative mask) over variables 1..=n.
pub type Masks = (u32, u32);

pub fn random_formula(seed: u64) -> (u32, Vec<Vec<i32>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=12u32);
    let ratio = rng.gen_range(0.5..7.0);
    let m = ((n as f64 * ratio) as usize).max(1);
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=4.min(n as usize));
            (0..len)
                .map(|_| {
                    let v = rng.gen_range(1..=n) as i32;
                    if rng.gen_bool(0.5) { v } else { -v }
                })
                .collect()
        })
        .collect();
    (n, clauses)
}

pub fn masks(clauses: &[Vec<i32>]) -> Vec<Masks> {
    clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(p, q), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 { (p | bit, q) } else { (p, q | bit) }
            })
        })
        .collect()
}

pub fn truth_table_sat(n: u32, clauses: &[Masks]) -> bool {
    (0u32..1 << n).any(|x| clauses.iter().all(|&(p, q)| x & p != 0 || !x & q != 0))
}

pub fn to_cnf(n: u32, clauses: &[Vec<i32>]) -> Cnf {
    let mut cnf = Cnf::new(n);
    for c in clauses {
        cnf.add_clause(&c.iter().map(|&x| Lit::from_dimacs(x)).collect::<Vec<_>>());
    }
    cnf
}
