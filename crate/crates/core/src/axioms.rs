//! Exhaustive axiom checkers over rule tables.
//!
//! Every checker scans the table's domain in rank order and reports the first
//! violation it meets, so verdicts are deterministic. Quota comparisons are
//! done by integer cross-multiplication: `|N'| >= l * n / k` is evaluated as
//! `|N'| * k >= l * n`, which is exact.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{
    hamming, is_party_list, letters, variant_ballots, Ballot, CandidateSet, Committee,
    ElectionParams, Profile, VariantMode,
};
use crate::rules::RuleTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpVariant {
    Subset,
    Superset,
    Cardinality,
    Hamming,
}

impl SpVariant {
    pub fn variant_mode(&self) -> VariantMode {
        match self {
            SpVariant::Subset => VariantMode::ProperSubset,
            _ => VariantMode::Arbitrary,
        }
    }

    /// Does switching from `truthful_outcome` to `manipulated` help a voter
    /// whose sincere ballot is `ballot`?
    pub fn improves(&self, ballot: Ballot, truthful_outcome: Committee, manipulated: Committee) -> bool {
        let before = truthful_outcome.meet(&ballot);
        let after = manipulated.meet(&ballot);
        match self {
            SpVariant::Subset | SpVariant::Superset => after != before && before & !after == 0,
            SpVariant::Cardinality => after.count_ones() > before.count_ones(),
            SpVariant::Hamming => hamming(&manipulated, &ballot) < hamming(&truthful_outcome, &ballot),
        }
    }
}

impl FromStr for SpVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "subset" => Ok(SpVariant::Subset),
            "superset" => Ok(SpVariant::Superset),
            "cardinality" => Ok(SpVariant::Cardinality),
            "hamming" => Ok(SpVariant::Hamming),
            other => Err(Error::Unknown(format!("strategyproofness variant {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    WeakEfficiency,
    Proportionality,
    JrPartyLists,
    Jr,
    Pjr,
    Ejr,
    LowerQuota,
    DisjointDiversity,
    DroopProportionality,
    /// The singleton-approver condition: at `m = k + 1`, a singleton ballot
    /// `{c}` with Hare-quota support and no other approver of `c` elects `c`.
    SingletonApprovers,
    Strategyproofness(SpVariant),
}

impl Axiom {
    pub const ALL: [Axiom; 14] = [
        Axiom::WeakEfficiency,
        Axiom::Proportionality,
        Axiom::JrPartyLists,
        Axiom::Jr,
        Axiom::Pjr,
        Axiom::Ejr,
        Axiom::LowerQuota,
        Axiom::DisjointDiversity,
        Axiom::DroopProportionality,
        Axiom::SingletonApprovers,
        Axiom::Strategyproofness(SpVariant::Subset),
        Axiom::Strategyproofness(SpVariant::Superset),
        Axiom::Strategyproofness(SpVariant::Cardinality),
        Axiom::Strategyproofness(SpVariant::Hamming),
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::WeakEfficiency => "weak-efficiency",
            Axiom::Proportionality => "proportionality",
            Axiom::JrPartyLists => "jr-party-lists",
            Axiom::Jr => "jr",
            Axiom::Pjr => "pjr",
            Axiom::Ejr => "ejr",
            Axiom::LowerQuota => "lower-quota",
            Axiom::DisjointDiversity => "disjoint-diversity",
            Axiom::DroopProportionality => "droop-proportionality",
            Axiom::SingletonApprovers => "singleton-approvers",
            Axiom::Strategyproofness(SpVariant::Subset) => "subset-sp",
            Axiom::Strategyproofness(SpVariant::Superset) => "superset-sp",
            Axiom::Strategyproofness(SpVariant::Cardinality) => "cardinality-sp",
            Axiom::Strategyproofness(SpVariant::Hamming) => "hamming-sp",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let alias = match s {
            "droop" => Some(Axiom::DroopProportionality),
            "hare" | "prop" => Some(Axiom::Proportionality),
            "jr-party" => Some(Axiom::JrPartyLists),
            "sp" | "strategyproofness" => Some(Axiom::Strategyproofness(SpVariant::Subset)),
            "lemma2" => Some(Axiom::SingletonApprovers),
            _ => None,
        };
        alias
            .or_else(|| Axiom::ALL.iter().copied().find(|a| a.name() == s))
            .ok_or_else(|| Error::Unknown(format!("axiom {s:?}")))
    }
}

/// A violation located at a single profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeViolation {
    pub profile: Profile,
    pub committee: Committee,
    /// Voters (0-based) forming the unrepresented group or party.
    pub group: Vec<usize>,
    /// The candidate set the axiom is about: the unapproved candidate, the
    /// singleton or party ballot, or the commonly approved candidates.
    pub candidates: u32,
    /// Representation level demanded (1 unless PJR/EJR/lower quota).
    pub ell: usize,
}

/// A successful manipulation: voter `voter` with sincere profile `truthful`
/// reports `reported` instead and obtains a committee it prefers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manipulation {
    pub voter: usize,
    pub truthful: Profile,
    pub truthful_outcome: Committee,
    pub reported: Ballot,
    pub manipulated_outcome: Committee,
}

impl Manipulation {
    pub fn variant(&self) -> Profile {
        self.truthful.with_ballot(self.voter, self.reported)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Outcome(OutcomeViolation),
    Manipulation(Manipulation),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Outcome(v) => {
                write!(
                    f,
                    "f({}) = {}; group {{{}}}, candidates {}",
                    v.profile,
                    v.committee,
                    v.group.iter().map(|i| (i + 1).to_string()).join(","),
                    letters(v.candidates)
                )?;
                if v.ell > 1 {
                    write!(f, ", l = {}", v.ell)?;
                }
                Ok(())
            }
            Witness::Manipulation(m) => write!(
                f,
                "voter {} at ({}) gets {}; reporting {} gives ({}) -> {}",
                m.voter + 1,
                m.truthful,
                m.truthful_outcome,
                m.reported,
                m.variant(),
                m.manipulated_outcome
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    fn from_witness(axiom: Axiom, witness: Option<Witness>) -> Self {
        AxiomVerdict {
            axiom,
            passed: witness.is_none(),
            witness,
        }
    }
}

/// Quota test `count >= ell * n / k`.
fn meets_hare(count: usize, ell: usize, params: &ElectionParams) -> bool {
    count * params.k >= ell * params.n
}

/// Quota test `count > n / (k + 1)`.
fn exceeds_droop(count: usize, params: &ElectionParams) -> bool {
    count * (params.k + 1) > params.n
}

fn voters_with_ballot(p: &Profile, b: Ballot) -> Vec<usize> {
    (0..p.len()).filter(|&i| p.ballot(i) == b).collect()
}

/// Distinct ballots in order of first appearance.
fn parties(p: &Profile) -> Vec<Ballot> {
    p.ballots().iter().copied().unique().collect()
}

fn singleton_violation(
    p: &Profile,
    w: Committee,
    triggers: impl Fn(&Profile, Ballot, usize) -> bool,
) -> Option<OutcomeViolation> {
    for b in parties(p).into_iter().filter(|b| b.is_singleton()).sorted() {
        let group = voters_with_ballot(p, b);
        if triggers(p, b, group.len()) && w.meet(&b) == 0 {
            return Some(OutcomeViolation {
                profile: p.clone(),
                committee: w,
                group,
                candidates: b.mask(),
                ell: 1,
            });
        }
    }
    None
}

fn pjr_like_violation(p: &Profile, w: Committee, params: &ElectionParams, extended: bool) -> Option<OutcomeViolation> {
    let n = p.len();
    for ell in 1..=params.k {
        for t in (0..params.m).combinations(ell) {
            let t_mask = t.iter().fold(0u32, |acc, &c| acc | 1 << c);
            let cohesive: Vec<usize> = (0..n).filter(|&i| p.ballot(i).mask() & t_mask == t_mask).collect();
            if !meets_hare(cohesive.len(), ell, params) {
                continue;
            }
            if extended {
                // a violating group consists of voters with fewer than ell
                // approved members; take all of them
                let group: Vec<usize> = cohesive
                    .iter()
                    .copied()
                    .filter(|&i| (w.meet(&p.ballot(i)).count_ones() as usize) < ell)
                    .collect();
                if meets_hare(group.len(), ell, params) {
                    return Some(OutcomeViolation {
                        profile: p.clone(),
                        committee: w,
                        group,
                        candidates: t_mask,
                        ell,
                    });
                }
            } else {
                // a violating group's represented members form some U ⊂ W
                // with |U| < ell; the largest group for U is every cohesive
                // voter whose approved members lie inside U
                for u in w.members().combinations(ell - 1) {
                    let u_mask = u.iter().fold(0u32, |acc, &c| acc | 1 << c);
                    let group: Vec<usize> = cohesive
                        .iter()
                        .copied()
                        .filter(|&i| w.meet(&p.ballot(i)) & !u_mask == 0)
                        .collect();
                    if meets_hare(group.len(), ell, params) {
                        return Some(OutcomeViolation {
                            profile: p.clone(),
                            committee: w,
                            group,
                            candidates: t_mask,
                            ell,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Checks a single-profile axiom at one profile.
pub fn outcome_violation(axiom: Axiom, p: &Profile, w: Committee, params: &ElectionParams) -> Option<OutcomeViolation> {
    let outcome = |group: Vec<usize>, candidates: u32, ell: usize| OutcomeViolation {
        profile: p.clone(),
        committee: w,
        group,
        candidates,
        ell,
    };
    match axiom {
        Axiom::WeakEfficiency => {
            if !p.is_admissible(params) {
                return None;
            }
            let unapproved = w.mask() & !p.approved();
            (unapproved != 0).then(|| outcome(vec![], 1 << unapproved.trailing_zeros(), 1))
        }
        Axiom::Proportionality => {
            if !is_party_list(p) {
                return None;
            }
            singleton_violation(p, w, |_, _, count| meets_hare(count, 1, params))
        }
        Axiom::DroopProportionality => {
            singleton_violation(p, w, |_, _, count| exceeds_droop(count, params))
        }
        Axiom::SingletonApprovers => singleton_violation(p, w, |p, b, count| {
            meets_hare(count, 1, params) && p.approval_score(b.mask().trailing_zeros() as usize) == count
        }),
        Axiom::JrPartyLists => {
            if !is_party_list(p) {
                return None;
            }
            parties(p).into_iter().sorted().find_map(|a| {
                let group = voters_with_ballot(p, a);
                (meets_hare(group.len(), 1, params) && w.meet(&a) == 0).then(|| outcome(group, a.mask(), 1))
            })
        }
        Axiom::Jr => (0..params.m).find_map(|c| {
            let group: Vec<usize> = (0..p.len())
                .filter(|&i| p.ballot(i).contains(c) && w.meet(&p.ballot(i)) == 0)
                .collect();
            meets_hare(group.len(), 1, params).then(|| outcome(group, 1 << c, 1))
        }),
        Axiom::Pjr => pjr_like_violation(p, w, params, false),
        Axiom::Ejr => pjr_like_violation(p, w, params, true),
        Axiom::LowerQuota => {
            if !is_party_list(p) {
                return None;
            }
            parties(p).into_iter().sorted().find_map(|a| {
                let group = voters_with_ballot(p, a);
                let deserved = lower_quota_seats(group.len(), a, params);
                ((w.meet(&a).count_ones() as usize) < deserved).then(|| outcome(group, a.mask(), deserved))
            })
        }
        Axiom::DisjointDiversity => {
            if !is_party_list(p) {
                return None;
            }
            let ps = parties(p);
            if ps.len() > params.k {
                return None;
            }
            ps.into_iter()
                .sorted()
                .find(|a| w.meet(a) == 0)
                .map(|a| outcome(voters_with_ballot(p, a), a.mask(), 1))
        }
        Axiom::Strategyproofness(_) => None,
    }
}

/// Seats owed to a party with `supporters` voters: `floor(supporters * k / n)`,
/// capped at the party's size.
pub fn lower_quota_seats(supporters: usize, party: Ballot, params: &ElectionParams) -> usize {
    (supporters * params.k / params.n).min(party.len())
}

/// Visits every manipulation of `variant` starting from domain position `idx`.
fn manipulations_at<'a>(
    t: &'a RuleTable,
    idx: usize,
    variant: SpVariant,
) -> impl Iterator<Item = Manipulation> + 'a {
    let params = *t.params();
    let domain = t.domain();
    let rank = domain.rank(idx);
    let p = domain.profile(idx);
    let w = t.at(idx);
    let b = params.num_ballots();
    let n = params.n;
    (0..n).rev().flat_map(move |i| {
        let weight = b.pow((n - 1 - i) as u32);
        let truthful = p.ballot(i);
        let base = rank - truthful.index() * weight;
        let p = p.clone();
        variant_ballots(truthful, params.m, variant.variant_mode()).filter_map(move |reported| {
            let r2 = base + reported.index() * weight;
            let w2 = t.get_rank(r2)?;
            variant.improves(truthful, w, w2).then(|| Manipulation {
                voter: i,
                truthful: p.clone(),
                truthful_outcome: w,
                reported,
                manipulated_outcome: w2,
            })
        })
    })
}

/// First manipulation from `p` under `variant`: voters from last to first,
/// reported ballots in canonical order.
pub fn find_manipulation(t: &RuleTable, p: &Profile, variant: SpVariant) -> Result<Option<Manipulation>, Error> {
    p.validate(t.params())?;
    if !p.is_admissible(t.params()) {
        return Err(Error::Inadmissible(p.to_string()));
    }
    let idx = t.domain().position(p).ok_or_else(|| Error::OutsideDomain(p.to_string()))?;
    Ok(manipulations_at(t, idx, variant).next())
}

fn violations_at(t: &RuleTable, axiom: Axiom, idx: usize) -> Box<dyn Iterator<Item = Witness> + '_> {
    match axiom {
        Axiom::Strategyproofness(v) => Box::new(manipulations_at(t, idx, v).map(Witness::Manipulation)),
        _ => {
            let found = outcome_violation(axiom, &t.domain().profile(idx), t.at(idx), t.params());
            Box::new(found.into_iter().map(Witness::Outcome))
        }
    }
}

/// Runs one checker, stopping at the first violation.
pub fn check(t: &RuleTable, axiom: Axiom) -> AxiomVerdict {
    let witness = (0..t.len()).find_map(|idx| violations_at(t, axiom, idx).next());
    AxiomVerdict::from_witness(axiom, witness)
}

/// Every violation of `axiom`, in domain order (at most one outcome witness
/// per profile; every successful manipulation for strategyproofness).
pub fn collect_violations(t: &RuleTable, axiom: Axiom) -> Vec<Witness> {
    (0..t.len()).flat_map(|idx| violations_at(t, axiom, idx)).collect()
}

pub fn check_weak_efficiency(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::WeakEfficiency)
}

pub fn check_proportionality(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::Proportionality)
}

pub fn check_jr_party_lists(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::JrPartyLists)
}

pub fn check_jr(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::Jr)
}

pub fn check_pjr(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::Pjr)
}

pub fn check_ejr(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::Ejr)
}

pub fn check_lower_quota(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::LowerQuota)
}

pub fn check_disjoint_diversity(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::DisjointDiversity)
}

pub fn check_droop_proportionality(t: &RuleTable) -> AxiomVerdict {
    check(t, Axiom::DroopProportionality)
}

pub fn check_strategyproofness(t: &RuleTable, variant: SpVariant) -> AxiomVerdict {
    check(t, Axiom::Strategyproofness(variant))
}

/// Re-applies the axiom's definition to the witness alone.
pub fn revalidate(axiom: Axiom, witness: &Witness, params: &ElectionParams) -> bool {
    match (axiom, witness) {
        (Axiom::Strategyproofness(v), Witness::Manipulation(m)) => {
            let truthful = m.truthful.ballot(m.voter);
            let subset_ok = v != SpVariant::Subset || (m.reported.mask() & !truthful.mask() == 0);
            m.voter < m.truthful.len()
                && m.reported != truthful
                && subset_ok
                && v.improves(truthful, m.truthful_outcome, m.manipulated_outcome)
        }
        (Axiom::Strategyproofness(_), _) | (_, Witness::Manipulation(_)) => false,
        (axiom, Witness::Outcome(o)) => revalidate_outcome(axiom, o, params),
    }
}

fn revalidate_outcome(axiom: Axiom, o: &OutcomeViolation, params: &ElectionParams) -> bool {
    let p = &o.profile;
    let w = o.committee;
    let size = o.group.len();
    if o.group.iter().any(|&i| i >= p.len()) || !o.group.iter().all_unique() {
        return false;
    }
    let ballots: Vec<Ballot> = o.group.iter().map(|&i| p.ballot(i)).collect();
    let all_equal_to = |x: u32| ballots.iter().all(|b| b.mask() == x);
    let union = ballots.iter().fold(0u32, |acc, b| acc | b.mask());
    let common = ballots.iter().fold(u32::MAX, |acc, b| acc & b.mask());
    let exact_party = |x: u32| size == p.ballots().iter().filter(|b| b.mask() == x).count();
    match axiom {
        Axiom::WeakEfficiency => {
            o.candidates.count_ones() == 1
                && p.is_admissible(params)
                && p.approved() & o.candidates == 0
                && w.mask() & o.candidates != 0
        }
        Axiom::Proportionality => {
            is_party_list(p)
                && o.candidates.count_ones() == 1
                && all_equal_to(o.candidates)
                && meets_hare(size, 1, params)
                && w.mask() & o.candidates == 0
        }
        Axiom::DroopProportionality => {
            o.candidates.count_ones() == 1
                && all_equal_to(o.candidates)
                && exceeds_droop(size, params)
                && w.mask() & o.candidates == 0
        }
        Axiom::SingletonApprovers => {
            o.candidates.count_ones() == 1
                && all_equal_to(o.candidates)
                && meets_hare(size, 1, params)
                && p.approval_score(o.candidates.trailing_zeros() as usize) == size
                && w.mask() & o.candidates == 0
        }
        Axiom::JrPartyLists => {
            is_party_list(p) && size > 0 && all_equal_to(o.candidates) && meets_hare(size, 1, params) && w.mask() & o.candidates == 0
        }
        Axiom::Jr => size > 0 && common != 0 && meets_hare(size, 1, params) && w.mask() & union == 0,
        Axiom::Pjr => {
            size > 0
                && (common.count_ones() as usize) >= o.ell
                && meets_hare(size, o.ell, params)
                && (w.meet(&union).count_ones() as usize) < o.ell
        }
        Axiom::Ejr => {
            size > 0
                && (common.count_ones() as usize) >= o.ell
                && meets_hare(size, o.ell, params)
                && ballots.iter().all(|b| (w.meet(b).count_ones() as usize) < o.ell)
        }
        Axiom::LowerQuota => {
            let party = Ballot::from_mask_unchecked(o.candidates);
            is_party_list(p)
                && size > 0
                && all_equal_to(o.candidates)
                && exact_party(o.candidates)
                && (w.meet(&party).count_ones() as usize) < lower_quota_seats(size, party, params)
        }
        Axiom::DisjointDiversity => {
            is_party_list(p)
                && parties(p).len() <= params.k
                && size > 0
                && all_equal_to(o.candidates)
                && w.mask() & o.candidates == 0
        }
        Axiom::Strategyproofness(_) => false,
    }
}
