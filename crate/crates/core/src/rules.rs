//! Reference committee rules and explicit rule tables.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{
    enumerate_committees, is_interval, letters, parse_ordering, Ballot, CandidateSet, Committee,
    ElectionParams, Profile,
};

/// Default limit on the number of profiles any enumeration may touch.
pub const DEFAULT_PROFILE_CAP: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_PROFILE_CAP`].
pub const PROFILE_CAP_ENV: &str = "ABCSAT_PROFILE_CAP";

/// The profile cap in effect, honouring the environment override.
pub fn profile_cap() -> u64 {
    std::env::var(PROFILE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_PROFILE_CAP)
}

const NOT_IN_DOMAIN: u32 = u32::MAX;

/// The set of profiles a rule is defined on: all admissible profiles,
/// optionally restricted to candidate-interval profiles for a fixed order.
///
/// Positions in [`Domain::ranks`] are the "admissible-profile ranks" used as
/// table keys.
#[derive(Debug, Clone)]
pub struct Domain {
    params: ElectionParams,
    ci_order: Option<Vec<usize>>,
    ranks: Vec<u64>,
    index: Vec<u32>,
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.ci_order == other.ci_order
    }
}

impl Domain {
    pub fn admissible(params: &ElectionParams) -> Result<Arc<Domain>, Error> {
        Self::build(params, None, profile_cap())
    }

    pub fn build(
        params: &ElectionParams,
        ci_order: Option<Vec<usize>>,
        cap: u64,
    ) -> Result<Arc<Domain>, Error> {
        params.validate()?;
        if let Some(order) = &ci_order {
            crate::model::check_ordering(order, params.m)?;
        }
        let total = (params.num_ballots() as u128).pow(params.n as u32);
        if total > cap as u128 || total >= NOT_IN_DOMAIN as u128 {
            return Err(Error::CapExceeded {
                m: params.m,
                n: params.n,
                count: total,
                cap,
            });
        }
        let total = total as usize;
        let b = params.num_ballots();
        let mut index = vec![NOT_IN_DOMAIN; total];
        let mut ranks = Vec::new();
        let mut digits = vec![0u64; params.n];
        let ci_ok: Vec<bool> = (0..b)
            .map(|i| {
                let mask = Ballot::from_index(i).mask();
                ci_order.as_ref().map_or(true, |o| is_interval(mask, o))
            })
            .collect();
        for (rank, slot) in index.iter_mut().enumerate() {
            let union = digits.iter().fold(0u32, |acc, &d| acc | (d as u32 + 1));
            let keep = union.count_ones() as usize >= params.k
                && digits.iter().all(|&d| ci_ok[d as usize]);
            if keep {
                *slot = ranks.len() as u32;
                ranks.push(rank as u64);
            }
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < b {
                    break;
                }
                *d = 0;
            }
        }
        Ok(Arc::new(Domain {
            params: *params,
            ci_order,
            ranks,
            index,
        }))
    }

    pub fn params(&self) -> &ElectionParams {
        &self.params
    }

    pub fn ci_order(&self) -> Option<&[usize]> {
        self.ci_order.as_deref()
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Profile rank of the profile at domain position `idx`.
    pub fn rank(&self, idx: usize) -> u64 {
        self.ranks[idx]
    }

    pub fn profile(&self, idx: usize) -> Profile {
        Profile::from_rank(self.ranks[idx], &self.params)
    }

    /// Domain position of the profile with the given rank, if it belongs.
    pub fn position_of_rank(&self, rank: u64) -> Option<usize> {
        match self.index.get(rank as usize) {
            Some(&i) if i != NOT_IN_DOMAIN => Some(i as usize),
            _ => None,
        }
    }

    pub fn position(&self, p: &Profile) -> Option<usize> {
        if p.validate(&self.params).is_err() {
            return None;
        }
        self.position_of_rank(p.rank(&self.params))
    }

    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        self.ranks.iter().map(|&r| Profile::from_rank(r, &self.params))
    }
}

/// A resolute committee rule given as an explicit lookup table.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleTable {
    domain: Arc<Domain>,
    committees: Vec<Committee>,
}

impl RuleTable {
    /// Tabulates `rule` over the domain, optionally on several threads.
    pub fn from_fn<F>(domain: Arc<Domain>, threads: usize, rule: F) -> RuleTable
    where
        F: Fn(&Profile) -> Committee + Sync,
    {
        let eval = |i: usize| rule(&domain.profile(i));
        let committees = if threads > 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool");
            pool.install(|| (0..domain.len()).into_par_iter().map(eval).collect())
        } else {
            (0..domain.len()).map(eval).collect()
        };
        RuleTable { domain, committees }
    }

    /// Builds a table from committees listed in domain order.
    pub fn from_committees(domain: Arc<Domain>, committees: Vec<Committee>) -> Result<Self, Error> {
        if committees.len() != domain.len() {
            return Err(Error::Parse(format!(
                "table has {} entries but the domain has {} profiles",
                committees.len(),
                domain.len()
            )));
        }
        for c in &committees {
            Committee::new(c.mask(), domain.params())?;
        }
        Ok(RuleTable { domain, committees })
    }

    pub fn params(&self) -> &ElectionParams {
        self.domain.params()
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.committees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.committees.is_empty()
    }

    pub fn committees(&self) -> &[Committee] {
        &self.committees
    }

    /// Committee at domain position `idx`.
    pub fn at(&self, idx: usize) -> Committee {
        self.committees[idx]
    }

    pub fn get_rank(&self, rank: u64) -> Option<Committee> {
        self.domain.position_of_rank(rank).map(|i| self.committees[i])
    }

    pub fn get(&self, p: &Profile) -> Option<Committee> {
        self.domain.position(p).map(|i| self.committees[i])
    }

    pub fn set(&mut self, p: &Profile, w: Committee) -> Result<(), Error> {
        Committee::new(w.mask(), self.params())?;
        let i = self
            .domain
            .position(p)
            .ok_or_else(|| Error::OutsideDomain(p.to_string()))?;
        self.committees[i] = w;
        Ok(())
    }

    /// `(profile, committee)` pairs in domain order.
    pub fn entries(&self) -> impl Iterator<Item = (Profile, Committee)> + '_ {
        self.domain.profiles().zip(self.committees.iter().copied())
    }

    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            format_version: TABLE_FORMAT_VERSION,
            params: *self.params(),
            ci_order: self
                .domain
                .ci_order()
                .map(|o| o.iter().map(|&c| crate::model::candidate_letter(c)).collect()),
            committees: self.committees.iter().map(|c| c.mask()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("table serialises")
    }

    pub fn from_document(doc: TableDocument, cap: u64) -> Result<Self, Error> {
        if doc.format_version != TABLE_FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported table format version {}",
                doc.format_version
            )));
        }
        doc.params.validate()?;
        let order = doc
            .ci_order
            .as_deref()
            .map(|s| parse_ordering(s, doc.params.m))
            .transpose()?;
        let domain = Domain::build(&doc.params, order, cap)?;
        let committees = doc
            .committees
            .iter()
            .map(|&mask| Committee::new(mask, &doc.params))
            .collect::<Result<Vec<_>, _>>()?;
        RuleTable::from_committees(domain, committees)
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        Self::from_document(serde_json::from_str(s)?, profile_cap())
    }
}

pub const TABLE_FORMAT_VERSION: u32 = 1;

/// On-disk form of a [`RuleTable`]: committee bitmasks indexed by the
/// position of each profile in the domain enumeration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableDocument {
    pub format_version: u32,
    pub params: ElectionParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_order: Option<String>,
    pub committees: Vec<u32>,
}

fn require_admissible(p: &Profile, params: &ElectionParams) -> Result<(), Error> {
    p.validate(params)?;
    if !p.is_admissible(params) {
        return Err(Error::Inadmissible(p.to_string()));
    }
    Ok(())
}

/// Approval Voting: the `k` highest approval scores, lower index first on ties.
pub fn av(p: &Profile, params: &ElectionParams) -> Result<Committee, Error> {
    require_admissible(p, params)?;
    Ok(av_unchecked(p, params))
}

pub(crate) fn av_unchecked(p: &Profile, params: &ElectionParams) -> Committee {
    let mut cands: Vec<(usize, usize)> = (0..params.m).map(|c| (p.approval_score(c), c)).collect();
    cands.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mask = cands[..params.k].iter().fold(0u32, |acc, &(_, c)| acc | 1 << c);
    Committee::from_mask_unchecked(mask)
}

/// Exact PAV objective value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PavScore(BigRational);

impl PavScore {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for PavScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Sum over voters of `1 + 1/2 + ... + 1/|P(i) ∩ W|`.
pub fn pav_score(p: &Profile, w: &Committee) -> PavScore {
    let mut total = BigRational::zero();
    for b in p.ballots() {
        let r = w.meet(b).count_ones() as i64;
        for j in 1..=r {
            total += BigRational::new(1.into(), j.into());
        }
    }
    PavScore(total)
}

fn lcm_up_to(k: usize) -> u64 {
    (1..=k as u64).fold(1, |acc, j| {
        let g = num_integer_gcd(acc, j);
        acc / g * j
    })
}

fn num_integer_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Harmonic prefix sums scaled by `lcm(1..=k)`, so they are exact integers.
pub(crate) struct ScaledHarmonic(Vec<u64>);

impl ScaledHarmonic {
    pub(crate) fn new(k: usize) -> Self {
        let l = lcm_up_to(k);
        let mut h = vec![0u64; k + 1];
        for r in 1..=k {
            h[r] = h[r - 1] + l / r as u64;
        }
        ScaledHarmonic(h)
    }
}

/// Proportional Approval Voting by exhaustive search, first optimum in
/// lexicographic committee order.
pub fn pav(p: &Profile, params: &ElectionParams) -> Result<Committee, Error> {
    require_admissible(p, params)?;
    Ok(pav_with(p, &enumerate_committees(params), &ScaledHarmonic::new(params.k)))
}

pub(crate) fn pav_with(p: &Profile, committees: &[Committee], h: &ScaledHarmonic) -> Committee {
    let mut best = committees[0];
    let mut best_score = None;
    for &w in committees {
        let s: u64 = p
            .ballots()
            .iter()
            .map(|b| h.0[w.meet(b).count_ones() as usize])
            .sum();
        if best_score.map_or(true, |b| s > b) {
            best = w;
            best_score = Some(s);
        }
    }
    best
}

/// Named reference rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Av,
    Pav,
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "av" => Ok(Rule::Av),
            "pav" => Ok(Rule::Pav),
            other => Err(Error::Unknown(format!("rule {other:?}"))),
        }
    }
}

impl Rule {
    pub fn apply(&self, p: &Profile, params: &ElectionParams) -> Result<Committee, Error> {
        match self {
            Rule::Av => av(p, params),
            Rule::Pav => pav(p, params),
        }
    }
}

/// Materialises a named rule over all admissible profiles.
pub fn build_table(rule: Rule, params: &ElectionParams) -> Result<RuleTable, Error> {
    build_table_in(rule, Domain::admissible(params)?, 1)
}

pub fn build_table_in(rule: Rule, domain: Arc<Domain>, threads: usize) -> Result<RuleTable, Error> {
    let params = *domain.params();
    Ok(match rule {
        Rule::Av => RuleTable::from_fn(domain, threads, |p| av_unchecked(p, &params)),
        Rule::Pav => {
            let committees = enumerate_committees(&params);
            let h = ScaledHarmonic::new(params.k);
            RuleTable::from_fn(domain, threads, |p| pav_with(p, &committees, &h))
        }
    })
}

/// A seeded random table. Each entry copies `base` with probability
/// `bias` and is otherwise a uniformly random committee.
pub fn random_table(domain: Arc<Domain>, seed: u64, base: Option<&RuleTable>, bias: f64) -> Result<RuleTable, Error> {
    use rand::{Rng, SeedableRng};
    if let Some(b) = base {
        if b.domain() != &domain {
            return Err(Error::InvalidParams("base table is over a different domain".into()));
        }
    }
    let all = enumerate_committees(domain.params());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let committees = (0..domain.len())
        .map(|i| match base {
            Some(b) if rng.gen_bool(bias.clamp(0.0, 1.0)) => b.at(i),
            _ => all[rng.gen_range(0..all.len())],
        })
        .collect();
    Ok(RuleTable { domain, committees })
}

impl fmt::Display for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, w) in self.entries() {
            writeln!(f, "f({p}) = {}", letters(w.mask()))?;
        }
        Ok(())
    }
}
