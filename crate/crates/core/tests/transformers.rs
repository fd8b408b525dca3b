use abcsat::axioms::{check, Axiom, SpVariant};
use abcsat::encoder::{encode, EncodeConfig, ProportionalityMode};
use abcsat::error::Error;
use abcsat::model::CandidateSet;
use abcsat::proofs::{check_lemma2, droop_guard, droop_reduce, reduce_alternatives, reduce_committee_size, reduce_voters};
use abcsat::rules::{build_table, random_table, Domain, Rule, RuleTable};
use abcsat::solver::{decode_model, solve};
use abcsat::{Ballot, ElectionParams};

fn params(m: usize, n: usize, k: usize) -> ElectionParams {
    ElectionParams::new(m, n, k).unwrap()
}

fn solved(cfg: &EncodeConfig) -> RuleTable {
    let enc = encode(cfg).unwrap();
    let r = solve(&enc.cnf, &[]);
    let t = decode_model(r.model.as_ref().expect("instance should be satisfiable"), &enc.varmap).unwrap();
    for a in cfg.axioms() {
        assert!(check(&t, a).passed, "premise table fails {a}");
    }
    t
}

fn hare_subset(m: usize, n: usize, k: usize) -> EncodeConfig {
    EncodeConfig::new(params(m, n, k)).weak_efficiency(true)
}

fn assert_passes(t: &RuleTable, axioms: &[Axiom]) {
    for &a in axioms {
        let v = check(t, a);
        assert!(v.passed, "{a} fails at {}: {:?}", t.params(), v.witness.map(|w| w.to_string()));
    }
}

const SUBSET_SP: Axiom = Axiom::Strategyproofness(SpVariant::Subset);

#[test]
fn reduce_voters_is_pointwise_and_inherits() {
    let big = solved(&hare_subset(3, 4, 2));
    let small = reduce_voters(&big, 2).unwrap();
    assert_eq!(*small.params(), params(3, 2, 2));
    for (p, w) in small.entries() {
        assert_eq!(Some(w), big.get(&p.repeat(2)), "at ({p})");
    }
    assert_passes(&small, &[Axiom::Proportionality, SUBSET_SP, Axiom::WeakEfficiency]);

    // the identity holds for any table
    let d = Domain::admissible(&params(3, 4, 2)).unwrap();
    for seed in 0..5 {
        let t = random_table(d.clone(), seed, None, 0.0).unwrap();
        let r = reduce_voters(&t, 2).unwrap();
        for (p, w) in r.entries() {
            assert_eq!(Some(w), t.get(&p.repeat(2)));
        }
    }

    // inheritance is only claimed at m = k + 1
    let k1 = solved(&hare_subset(2, 3, 1));
    assert_passes(&reduce_voters(&k1, 3).unwrap(), &[Axiom::Proportionality, SUBSET_SP, Axiom::WeakEfficiency]);
}

#[test]
fn reduce_alternatives_inherits() {
    for (m, n, k) in [(4, 2, 2), (4, 3, 2)] {
        let big = solved(&hare_subset(m, n, k));
        let small = reduce_alternatives(&big).unwrap();
        assert_eq!(*small.params(), params(m - 1, n, k));
        for (p, w) in small.entries() {
            assert_eq!(Some(w.mask()), big.get(&p).map(|c| c.mask()));
        }
        assert_passes(&small, &[Axiom::Proportionality, SUBSET_SP, Axiom::WeakEfficiency]);
    }
    // a table electing the dropped candidate is rejected
    let d = Domain::admissible(&params(4, 2, 2)).unwrap();
    let t = random_table(d, 3, None, 0.0).unwrap();
    assert!(matches!(reduce_alternatives(&t), Err(Error::Precondition(_))));
}

#[test]
fn reduce_committee_size_inherits() {
    let big = solved(&hare_subset(3, 2, 2));
    assert!(check_lemma2(&big).unwrap().passed);
    let small = reduce_committee_size(&big).unwrap();
    assert_eq!(*small.params(), params(2, 1, 1));
    assert_passes(&small, &[Axiom::Proportionality, SUBSET_SP, Axiom::WeakEfficiency]);

    let av = build_table(Rule::Av, &params(4, 3, 3)).unwrap();
    assert!(matches!(reduce_committee_size(&av), Err(Error::Precondition(_))));
}

#[test]
fn droop_padding_inherits() {
    let cfg = EncodeConfig::new(params(3, 5, 2))
        .proportionality(ProportionalityMode::DroopSingleton)
        .weak_efficiency(true);
    let big = solved(&cfg);
    assert!(droop_guard(2, 2, 1));
    for fixed in ["a", "b", "c", "ab", "ac", "bc"] {
        let ballot = Ballot::parse(fixed, 3).unwrap();
        let small = droop_reduce(&big, 2, &[ballot]).unwrap();
        assert_eq!(*small.params(), params(3, 4, 2));
        for (p, w) in small.entries() {
            assert_eq!(Some(w), big.get(&p.extended(&[ballot])));
        }
        assert_passes(&small, &[Axiom::Proportionality, Axiom::DroopProportionality, SUBSET_SP]);
    }
    // r must stay below k
    let t = build_table(Rule::Av, &params(3, 4, 2)).unwrap();
    let two = [Ballot::parse("a", 3).unwrap(), Ballot::parse("b", 3).unwrap()];
    assert!(matches!(droop_reduce(&t, 1, &two), Err(Error::Precondition(_))));
}
