//! Candidates, ballots, profiles and committees.
//!
//! Candidate sets are bitmasks over candidate indices (candidate 0 is the
//! least significant bit). Ballots are the nonempty proper subsets of the
//! candidate set; the ballot with mask `x` has ballot index `x - 1`, so the
//! canonical ballot order is ascending bitmask value. Profiles are ordered
//! tuples of ballots and are ranked lexicographically by ballot index with
//! voter 0 most significant.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Largest supported number of candidates.
pub const MAX_CANDIDATES: usize = 16;

/// Number of candidates, voters and the committee size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElectionParams {
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl ElectionParams {
    pub fn new(m: usize, n: usize, k: usize) -> Result<Self, Error> {
        let p = ElectionParams { m, n, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.m < 1 || self.m > MAX_CANDIDATES {
            return Err(Error::InvalidParams(format!(
                "m = {} must lie in 1..={}",
                self.m, MAX_CANDIDATES
            )));
        }
        if self.k < 1 || self.k > self.m {
            return Err(Error::InvalidParams(format!(
                "k = {} must satisfy 1 <= k <= m = {}",
                self.k, self.m
            )));
        }
        if self.n < 1 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        Ok(())
    }

    /// Mask with one bit per candidate.
    pub fn full_mask(&self) -> u32 {
        full_mask(self.m)
    }

    /// Number of distinct ballots, `2^m - 2`.
    pub fn num_ballots(&self) -> u64 {
        (1u64 << self.m) - 2
    }

    /// Number of profiles, `(2^m - 2)^n`, or `None` on overflow.
    pub fn num_profiles(&self) -> Option<u64> {
        self.num_ballots().checked_pow(self.n as u32)
    }
}

impl fmt::Display for ElectionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}, n={}, k={}", self.m, self.n, self.k)
    }
}

pub(crate) fn full_mask(m: usize) -> u32 {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

/// Anything that denotes a set of candidates.
pub trait CandidateSet {
    fn mask(&self) -> u32;

    fn len(&self) -> usize {
        self.mask().count_ones() as usize
    }

    fn contains(&self, c: usize) -> bool {
        self.mask() >> c & 1 == 1
    }

    fn members(&self) -> Members {
        Members(self.mask())
    }
}

impl CandidateSet for u32 {
    fn mask(&self) -> u32 {
        *self
    }
}

/// Iterator over the candidate indices of a mask, ascending.
#[derive(Debug, Clone)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let c = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(c)
    }
}

pub fn candidate_letter(c: usize) -> char {
    (b'a' + c as u8) as char
}

/// Renders a candidate set as concatenated letters, e.g. `abd`.
pub fn letters(mask: u32) -> String {
    mask.members().map(candidate_letter).collect()
}

pub(crate) fn parse_letters(s: &str) -> Result<u32, Error> {
    let mut mask = 0u32;
    for ch in s.trim().chars() {
        if !ch.is_ascii_lowercase() {
            return Err(Error::Parse(format!("invalid candidate letter {ch:?} in {s:?}")));
        }
        let c = (ch as u8 - b'a') as usize;
        if c >= MAX_CANDIDATES {
            return Err(Error::Parse(format!("candidate {ch:?} out of range")));
        }
        if mask >> c & 1 == 1 {
            return Err(Error::Parse(format!("duplicate candidate {ch:?} in {s:?}")));
        }
        mask |= 1 << c;
    }
    Ok(mask)
}

/// Symmetric-difference cardinality of two candidate sets.
pub fn hamming(a: &impl CandidateSet, b: &impl CandidateSet) -> usize {
    (a.mask() ^ b.mask()).count_ones() as usize
}

/// A voter's approval set: nonempty and not the full candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ballot(u32);

impl Ballot {
    pub fn new(mask: u32, m: usize) -> Result<Self, Error> {
        if mask == 0 || mask & !full_mask(m) != 0 || mask == full_mask(m) {
            return Err(Error::InvalidBallot(format!(
                "{:?} is not a nonempty proper subset of {} candidates",
                letters(mask),
                m
            )));
        }
        Ok(Ballot(mask))
    }

    pub(crate) fn from_mask_unchecked(mask: u32) -> Self {
        Ballot(mask)
    }

    pub fn singleton(c: usize) -> Self {
        Ballot(1 << c)
    }

    /// Position in the canonical ballot enumeration.
    pub fn index(&self) -> u64 {
        self.0 as u64 - 1
    }

    pub fn from_index(idx: u64) -> Self {
        Ballot(idx as u32 + 1)
    }

    pub fn is_singleton(&self) -> bool {
        self.0.count_ones() == 1
    }

    pub fn parse(s: &str, m: usize) -> Result<Self, Error> {
        Ballot::new(parse_letters(s)?, m)
    }
}

impl CandidateSet for Ballot {
    fn mask(&self) -> u32 {
        self.0
    }
}

impl fmt::Display for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&letters(self.0))
    }
}

/// A set of exactly `k` candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Committee(u32);

impl Committee {
    pub fn new(mask: u32, params: &ElectionParams) -> Result<Self, Error> {
        if mask & !params.full_mask() != 0 || mask.count_ones() as usize != params.k {
            return Err(Error::InvalidCommittee(format!(
                "{:?} is not a committee of size {} over {} candidates",
                letters(mask),
                params.k,
                params.m
            )));
        }
        Ok(Committee(mask))
    }

    pub(crate) fn from_mask_unchecked(mask: u32) -> Self {
        Committee(mask)
    }

    pub fn parse(s: &str, params: &ElectionParams) -> Result<Self, Error> {
        Committee::new(parse_letters(s)?, params)
    }

    /// Candidates in common with `other`, as a mask.
    pub fn meet(&self, other: &impl CandidateSet) -> u32 {
        self.0 & other.mask()
    }
}

impl CandidateSet for Committee {
    fn mask(&self) -> u32 {
        self.0
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&letters(self.0))
    }
}

impl Ord for Committee {
    /// Lexicographic on ascending member sequences.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.members().cmp(other.members())
    }
}

impl PartialOrd for Committee {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All committees of size `k`, in lexicographic order.
pub fn enumerate_committees(params: &ElectionParams) -> Vec<Committee> {
    use itertools::Itertools;
    (0..params.m)
        .combinations(params.k)
        .map(|cs| Committee(cs.into_iter().fold(0, |acc, c| acc | 1 << c)))
        .collect()
}

/// An ordered tuple of ballots, one per voter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    ballots: Vec<Ballot>,
}

impl Profile {
    pub fn new(ballots: Vec<Ballot>) -> Self {
        Profile { ballots }
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn len(&self) -> usize {
        self.ballots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ballots.is_empty()
    }

    pub fn ballot(&self, voter: usize) -> Ballot {
        self.ballots[voter]
    }

    /// Union of all approval sets.
    pub fn approved(&self) -> u32 {
        self.ballots.iter().fold(0, |acc, b| acc | b.0)
    }

    /// At least `k` candidates are approved by somebody.
    pub fn is_admissible(&self, params: &ElectionParams) -> bool {
        self.approved().count_ones() as usize >= params.k
    }

    /// Number of voters whose ballot equals `ballot`.
    pub fn count(&self, ballot: Ballot) -> usize {
        self.ballots.iter().filter(|&&b| b == ballot).count()
    }

    /// Number of voters approving candidate `c`.
    pub fn approval_score(&self, c: usize) -> usize {
        self.ballots.iter().filter(|b| b.contains(c)).count()
    }

    pub fn with_ballot(&self, voter: usize, ballot: Ballot) -> Profile {
        let mut ballots = self.ballots.clone();
        ballots[voter] = ballot;
        Profile { ballots }
    }

    /// Rank in the canonical enumeration of all `(2^m - 2)^n` profiles.
    pub fn rank(&self, params: &ElectionParams) -> u64 {
        let b = params.num_ballots();
        self.ballots.iter().fold(0, |acc, x| acc * b + x.index())
    }

    pub fn from_rank(rank: u64, params: &ElectionParams) -> Profile {
        let b = params.num_ballots();
        let mut ballots = vec![Ballot(1); params.n];
        let mut r = rank;
        for slot in ballots.iter_mut().rev() {
            *slot = Ballot::from_index(r % b);
            r /= b;
        }
        Profile { ballots }
    }

    /// Parses the comma-separated text form, e.g. `ab,c,d`.
    pub fn parse(s: &str, m: usize) -> Result<Profile, Error> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err(Error::Parse("empty profile".into()));
        }
        let ballots = s
            .split(',')
            .map(|b| Ballot::parse(b, m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Profile { ballots })
    }

    /// Checks the profile against `params` (length and ballot validity).
    pub fn validate(&self, params: &ElectionParams) -> Result<(), Error> {
        if self.ballots.len() != params.n {
            return Err(Error::InvalidProfile(format!(
                "profile ({self}) has {} ballots, expected n = {}",
                self.ballots.len(),
                params.n
            )));
        }
        for b in &self.ballots {
            Ballot::new(b.0, params.m)?;
        }
        Ok(())
    }

    /// The profile obtained by concatenating `q` copies of this one.
    pub fn repeat(&self, q: usize) -> Profile {
        Profile {
            ballots: self.ballots.repeat(q),
        }
    }

    /// This profile followed by `extra` ballots.
    pub fn extended(&self, extra: &[Ballot]) -> Profile {
        let mut ballots = self.ballots.clone();
        ballots.extend_from_slice(extra);
        Profile { ballots }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.ballots.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Profile {
    type Err = Error;

    /// Parses with the smallest candidate count that makes every ballot proper.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let union = s
            .split(',')
            .map(|b| parse_letters(b.trim_matches(|c| c == '(' || c == ')')))
            .try_fold(0u32, |acc, b| b.map(|b| acc | b))?;
        let m = (32 - union.leading_zeros()) as usize + 1;
        Profile::parse(s, m.min(MAX_CANDIDATES))
    }
}

/// All `2^m - 2` ballots in ascending bitmask order.
pub fn enumerate_ballots(params: &ElectionParams) -> Result<Vec<Ballot>, Error> {
    if params.m < 1 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    Ok((1..params.full_mask()).map(Ballot).collect())
}

/// Streams every profile in rank order.
#[derive(Debug, Clone)]
pub struct ProfileIter {
    params: ElectionParams,
    next: Option<Vec<u64>>,
    admissible_only: bool,
}

impl Iterator for ProfileIter {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        let b = self.params.num_ballots();
        loop {
            let digits = self.next.as_mut()?;
            let profile = Profile {
                ballots: digits.iter().map(|&d| Ballot::from_index(d)).collect(),
            };
            // odometer increment, last voter fastest
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    self.next = None;
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < b {
                    break;
                }
                digits[pos] = 0;
            }
            if !self.admissible_only || profile.is_admissible(&self.params) {
                return Some(profile);
            }
        }
    }
}

pub fn enumerate_profiles(params: &ElectionParams, admissible_only: bool) -> ProfileIter {
    ProfileIter {
        params: *params,
        next: (params.num_ballots() > 0).then(|| vec![0; params.n]),
        admissible_only,
    }
}

/// Every ballot pair is either identical or disjoint.
pub fn is_party_list(p: &Profile) -> bool {
    let bs = p.ballots();
    bs.iter()
        .enumerate()
        .all(|(i, a)| bs[i + 1..].iter().all(|b| a == b || a.0 & b.0 == 0))
}

/// How voter `i`'s ballot may change in an i-variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantMode {
    /// Nonempty proper subsets of the original ballot.
    ProperSubset,
    /// Any other ballot.
    Arbitrary,
}

/// Ballots voter `i` may report instead of `truthful`, in canonical order.
pub fn variant_ballots(truthful: Ballot, m: usize, mode: VariantMode) -> impl Iterator<Item = Ballot> {
    let t = truthful.0;
    let full = full_mask(m);
    (1..full).filter_map(move |x| {
        let keep = match mode {
            VariantMode::ProperSubset => x != t && x & !t == 0,
            VariantMode::Arbitrary => x != t,
        };
        keep.then_some(Ballot(x))
    })
}

pub fn i_variants(
    p: &Profile,
    i: usize,
    m: usize,
    mode: VariantMode,
) -> Result<Vec<Profile>, Error> {
    if i >= p.len() {
        return Err(Error::InvalidVoter { voter: i, n: p.len() });
    }
    Ok(variant_ballots(p.ballot(i), m, mode)
        .map(|b| p.with_ballot(i, b))
        .collect())
}

/// Validates that `order` is a permutation of `0..m`.
pub fn check_ordering(order: &[usize], m: usize) -> Result<(), Error> {
    let mut seen = 0u32;
    for &c in order {
        if c >= m || seen >> c & 1 == 1 {
            return Err(Error::InvalidOrdering(format!(
                "{order:?} is not a permutation of {m} candidates"
            )));
        }
        seen |= 1 << c;
    }
    if order.len() != m {
        return Err(Error::InvalidOrdering(format!(
            "{order:?} is not a permutation of {m} candidates"
        )));
    }
    Ok(())
}

/// Parses an ordering written as letters, e.g. `abcd`.
pub fn parse_ordering(s: &str, m: usize) -> Result<Vec<usize>, Error> {
    let order: Vec<usize> = s
        .trim()
        .chars()
        .map(|ch| {
            if ch.is_ascii_lowercase() {
                Ok((ch as u8 - b'a') as usize)
            } else {
                Err(Error::InvalidOrdering(format!("invalid candidate letter {ch:?}")))
            }
        })
        .collect::<Result<_, _>>()?;
    check_ordering(&order, m)?;
    Ok(order)
}

/// True iff `mask` occupies a contiguous run of positions under `order`.
pub(crate) fn is_interval(mask: u32, order: &[usize]) -> bool {
    let positions: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, &c)| mask >> c & 1 == 1)
        .map(|(pos, _)| pos)
        .collect();
    match (positions.first(), positions.last()) {
        (Some(lo), Some(hi)) => hi - lo + 1 == positions.len(),
        _ => true,
    }
}

/// Every ballot is an interval of the candidate ordering.
pub fn is_candidate_interval(p: &Profile, order: &[usize]) -> Result<bool, Error> {
    check_ordering(order, order.len())?;
    let within = full_mask(order.len());
    if p.approved() & !within != 0 {
        return Err(Error::InvalidOrdering(
            "ordering does not cover every approved candidate".into(),
        ));
    }
    Ok(p.ballots().iter().all(|b| is_interval(b.0, order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn params(m: usize, n: usize, k: usize) -> ElectionParams {
        ElectionParams::new(m, n, k).unwrap()
    }

    fn prof(s: &str, m: usize) -> Profile {
        Profile::parse(s, m).unwrap()
    }

    #[test]
    fn ballot_counts() {
        assert_eq!(enumerate_ballots(&params(2, 1, 1)).unwrap().len(), 2);
        assert_eq!(enumerate_ballots(&params(3, 1, 1)).unwrap().len(), 6);
        assert_eq!(enumerate_ballots(&params(4, 1, 1)).unwrap().len(), 14);
        let two: Vec<String> = enumerate_ballots(&params(2, 1, 1))
            .unwrap()
            .iter()
            .map(|b| b.to_string())
            .collect();
        assert_eq!(two, ["a", "b"]);
    }

    #[test]
    fn ballots_distinct() {
        for m in 1..=5 {
            let p = params(m, 1, 1);
            let bs = enumerate_ballots(&p).unwrap();
            let set: HashSet<_> = bs.iter().collect();
            assert_eq!(set.len(), (1 << m) - 2);
            assert!(bs.windows(2).all(|w| w[0].mask() < w[1].mask()));
        }
    }

    #[test]
    fn invalid_params() {
        assert!(ElectionParams::new(0, 1, 1).is_err());
        assert!(ElectionParams::new(3, 0, 1).is_err());
        assert!(ElectionParams::new(3, 1, 4).is_err());
        assert!(ElectionParams::new(3, 1, 0).is_err());
    }

    #[test]
    fn profile_counts() {
        assert_eq!(enumerate_profiles(&params(4, 3, 1), false).count(), 2744);
        assert_eq!(enumerate_profiles(&params(3, 2, 1), false).count(), 36);
        let adm = enumerate_profiles(&params(4, 3, 3), true).count();
        let brute = enumerate_profiles(&params(4, 3, 3), false)
            .filter(|p| p.approved().count_ones() >= 3)
            .count();
        assert_eq!(adm, brute);
    }

    #[test]
    fn rank_matches_enumeration_order() {
        let p = params(3, 3, 2);
        for (r, prof) in enumerate_profiles(&p, false).enumerate() {
            assert_eq!(prof.rank(&p), r as u64);
            assert_eq!(Profile::from_rank(r as u64, &p), prof);
        }
    }

    #[test]
    fn party_lists() {
        assert!(is_party_list(&prof("ab,ab,cde,cde,f", 7)));
        assert!(!is_party_list(&prof("ab,c,c,abc", 4)));
        assert!(is_party_list(&prof("b,c,d", 4)));
    }

    #[test]
    fn variants() {
        let p = prof("ab,c,d", 4);
        let v = i_variants(&p, 0, 4, VariantMode::ProperSubset).unwrap();
        let got: HashSet<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(got, HashSet::from(["a,c,d".to_string(), "b,c,d".to_string()]));

        let p = prof("a,c,d", 4);
        assert!(i_variants(&p, 0, 4, VariantMode::ProperSubset).unwrap().is_empty());

        let p = prof("a,c", 3);
        assert_eq!(i_variants(&p, 0, 3, VariantMode::Arbitrary).unwrap().len(), 5);
        assert!(i_variants(&p, 2, 3, VariantMode::Arbitrary).is_err());
    }

    #[test]
    fn hamming_examples() {
        let ab = parse_letters("ab").unwrap();
        assert_eq!(hamming(&ab, &ab), 0);
        assert_eq!(hamming(&ab, &parse_letters("abc").unwrap()), 1);
        assert_eq!(hamming(&ab, &parse_letters("cd").unwrap()), 4);
    }

    #[test]
    fn candidate_intervals() {
        let abc = [0, 1, 2];
        assert!(is_candidate_interval(&prof("ab,bc", 3), &abc).unwrap());
        assert!(!is_candidate_interval(&prof("ac,b", 3), &abc).unwrap());
        assert!(is_candidate_interval(&prof("c,a,b", 3), &[2, 0, 1]).unwrap());
        assert!(is_candidate_interval(&prof("ac,b", 3), &[0, 2, 1]).unwrap());
        assert!(is_candidate_interval(&prof("a", 3), &[0, 0, 1]).is_err());
        assert!(parse_ordering("abca", 4).is_err());
    }

    #[test]
    fn singleton_profiles_are_intervals() {
        let p = params(4, 3, 1);
        let orders = [[0, 1, 2, 3], [3, 1, 0, 2], [2, 3, 1, 0]];
        for prof in enumerate_profiles(&p, false).filter(|x| x.ballots().iter().all(|b| b.is_singleton())) {
            for o in &orders {
                assert!(is_candidate_interval(&prof, o).unwrap());
            }
        }
    }

    #[test]
    fn text_form_round_trip() {
        let p = prof("ab,c,d", 4);
        assert_eq!(p.to_string(), "ab,c,d");
        assert_eq!(Profile::parse("(ab,c,d)", 4).unwrap(), p);
        assert!(Profile::parse("abcd,a", 4).is_err());
        assert!(Profile::parse("aa", 4).is_err());
        assert_eq!("ab,c,d".parse::<Profile>().unwrap(), p);
    }

    #[test]
    fn committee_order_is_lexicographic() {
        let p = params(4, 1, 2);
        let names: Vec<String> = enumerate_committees(&p).iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["ab", "ac", "ad", "bc", "bd", "cd"]);
        let mut sorted = enumerate_committees(&p);
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, enumerate_committees(&p));
    }
}
