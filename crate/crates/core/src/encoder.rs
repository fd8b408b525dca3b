//! Propositional encoding of "a committee rule with these axioms exists".
//!
//! For every profile `P` in the domain and every committee `W` allowed at
//! `P` there is one variable `x_{P,W}`, true iff `f(P) = W`. Committees that
//! violate the configured proportionality axiom (or weak efficiency) at `P`
//! never get a variable. The clauses say that `f` picks exactly one allowed
//! committee per profile and that no voter can obtain a strict superset of
//! approved members by switching to an i-variant.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::axioms::{outcome_violation, Axiom, SpVariant};
use crate::cnf::{ClauseGroup, Cnf, Lit};
use crate::error::Error;
use crate::model::{
    candidate_letter, enumerate_committees, variant_ballots, CandidateSet, Committee,
    ElectionParams, Profile,
};
use crate::rules::{profile_cap, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProportionalityMode {
    /// Singleton parties with Hare-quota support, party-list profiles only.
    HareSingleton,
    /// Every party with Hare-quota support is represented, party-list profiles only.
    JrPartyLists,
    /// Singleton ballots with more than Droop-quota support, all profiles.
    DroopSingleton,
}

impl ProportionalityMode {
    pub fn axiom(&self) -> Axiom {
        match self {
            ProportionalityMode::HareSingleton => Axiom::Proportionality,
            ProportionalityMode::JrPartyLists => Axiom::JrPartyLists,
            ProportionalityMode::DroopSingleton => Axiom::DroopProportionality,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProportionalityMode::HareSingleton => "hare",
            ProportionalityMode::JrPartyLists => "jr-party",
            ProportionalityMode::DroopSingleton => "droop",
        }
    }
}

impl FromStr for ProportionalityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "hare" | "hare-singleton" | "proportionality" => Ok(ProportionalityMode::HareSingleton),
            "jr-party" | "jr-party-lists" => Ok(ProportionalityMode::JrPartyLists),
            "droop" | "droop-singleton" => Ok(ProportionalityMode::DroopSingleton),
            other => Err(Error::Unknown(format!("proportionality mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodeConfig {
    pub params: ElectionParams,
    /// `Subset` or `Superset`; the other variants are not encodable.
    pub sp_variant: SpVariant,
    pub proportionality: ProportionalityMode,
    pub weak_efficiency: bool,
    pub symmetry_break: bool,
    /// Restrict the domain to candidate-interval profiles for this order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_order: Option<Vec<usize>>,
}

impl EncodeConfig {
    pub fn new(params: ElectionParams) -> Self {
        EncodeConfig {
            params,
            sp_variant: SpVariant::Subset,
            proportionality: ProportionalityMode::HareSingleton,
            weak_efficiency: false,
            symmetry_break: false,
            ci_order: None,
        }
    }

    pub fn sp(mut self, v: SpVariant) -> Self {
        self.sp_variant = v;
        self
    }

    pub fn proportionality(mut self, mode: ProportionalityMode) -> Self {
        self.proportionality = mode;
        self
    }

    pub fn weak_efficiency(mut self, on: bool) -> Self {
        self.weak_efficiency = on;
        self
    }

    pub fn symmetry_break(mut self, on: bool) -> Self {
        self.symmetry_break = on;
        self
    }

    pub fn ci_order(mut self, order: Option<Vec<usize>>) -> Self {
        self.ci_order = order;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.params.validate()?;
        if !matches!(self.sp_variant, SpVariant::Subset | SpVariant::Superset) {
            return Err(Error::InvalidParams(format!(
                "only subset and superset strategyproofness can be encoded, not {:?}",
                self.sp_variant
            )));
        }
        if let Some(o) = &self.ci_order {
            crate::model::check_ordering(o, self.params.m)?;
        }
        if self.symmetry_break {
            symmetry_target(&self.params)?;
        }
        Ok(())
    }

    /// Axioms a decoded model must satisfy.
    pub fn axioms(&self) -> Vec<Axiom> {
        let mut v = vec![self.proportionality.axiom(), Axiom::Strategyproofness(self.sp_variant)];
        if self.weak_efficiency {
            v.push(Axiom::WeakEfficiency);
        }
        v
    }
}

impl fmt::Display for EncodeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, {} proportionality, {:?}-strategyproofness",
            self.params,
            self.proportionality.name(),
            self.sp_variant
        )?;
        if self.weak_efficiency {
            f.write_str(", weak efficiency")?;
        }
        if self.symmetry_break {
            f.write_str(", symmetry break")?;
        }
        if let Some(o) = &self.ci_order {
            write!(f, ", CI order {}", o.iter().map(|&c| candidate_letter(c)).collect::<String>())?;
        }
        Ok(())
    }
}

/// The relabelling assumption used to break symmetry, where one is known:
/// `f(ab,c,d) = acd` for three voters and `k = 3`, and
/// `f(ab,ab,cd,cd) = ac` for four voters and `k = 2`.
pub fn symmetry_target(params: &ElectionParams) -> Result<(Profile, Committee), Error> {
    let (p, w) = match (params.n, params.k) {
        (3, 3) if params.m >= 4 => ("ab,c,d", "acd"),
        (4, 2) if params.m >= 4 => ("ab,ab,cd,cd", "ac"),
        _ => {
            return Err(Error::InvalidParams(format!(
                "no symmetry-breaking assumption is defined for {params}"
            )))
        }
    };
    Ok((Profile::parse(p, params.m)?, Committee::parse(w, params)?))
}

/// One axiom instance: the unit of traceability between clauses and
/// election semantics. Profiles are identified by rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AxiomInstance {
    /// `f(P)` is one of the allowed committees.
    Totality { profile: u64 },
    /// `f(P)` takes at most one value.
    Uniqueness { profile: u64 },
    /// Voter `voter` at truthful profile `profile` cannot gain by switching
    /// to `variant`.
    Strategyproofness { profile: u64, voter: usize, variant: u64 },
    /// `f(P) = W` assumed without loss of generality.
    Symmetry { profile: u64, committee: Committee },
}

impl AxiomInstance {
    pub fn is_function_constraint(&self) -> bool {
        matches!(self, AxiomInstance::Totality { .. } | AxiomInstance::Uniqueness { .. })
    }

    /// Profile ranks mentioned by this instance.
    pub fn profiles(&self) -> Vec<u64> {
        match *self {
            AxiomInstance::Totality { profile }
            | AxiomInstance::Uniqueness { profile }
            | AxiomInstance::Symmetry { profile, .. } => vec![profile],
            AxiomInstance::Strategyproofness { profile, variant, .. } => vec![profile, variant],
        }
    }

    /// Lowest profile rank mentioned; used to order reports.
    pub fn sort_key(&self) -> u64 {
        self.profiles().into_iter().min().unwrap_or(0)
    }
}

/// Bijection between variable ids and allowed `(profile, committee)` pairs.
/// Ids are dense from 1, profile-rank major and committee-lexicographic minor.
#[derive(Debug, Clone)]
pub struct VarMap {
    domain: Arc<Domain>,
    /// `first_var[pos]` is the id of the first variable of domain position
    /// `pos`; one extra entry closes the last range.
    first_var: Vec<u32>,
    committees: Vec<Committee>,
    positions: Vec<u32>,
}

impl VarMap {
    pub fn len(&self) -> usize {
        self.committees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.committees.is_empty()
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn params(&self) -> &ElectionParams {
        self.domain.params()
    }

    /// Domain position and committee of a variable.
    pub fn entry(&self, var: u32) -> (usize, Committee) {
        let i = (var - 1) as usize;
        (self.positions[i] as usize, self.committees[i])
    }

    pub fn describe(&self, var: u32) -> (Profile, Committee) {
        let (pos, w) = self.entry(var);
        (self.domain.profile(pos), w)
    }

    /// Variables of domain position `pos`, in committee order.
    pub fn vars_at(&self, pos: usize) -> std::ops::Range<u32> {
        self.first_var[pos]..self.first_var[pos + 1]
    }

    pub fn allowed_at(&self, pos: usize) -> &[Committee] {
        let r = self.vars_at(pos);
        &self.committees[(r.start - 1) as usize..(r.end - 1) as usize]
    }

    pub fn var(&self, pos: usize, w: Committee) -> Option<u32> {
        self.vars_at(pos).find(|&v| self.committees[(v - 1) as usize] == w)
    }

    pub fn var_for(&self, p: &Profile, w: Committee) -> Option<u32> {
        self.var(self.domain.position(p)?, w)
    }
}

/// Committees that satisfy the configured proportionality axiom and, if
/// enabled, weak efficiency at `p`, in lexicographic order.
pub fn allowed_committees(p: &Profile, cfg: &EncodeConfig) -> Result<Vec<Committee>, Error> {
    p.validate(&cfg.params)?;
    if !p.is_admissible(&cfg.params) {
        return Err(Error::Inadmissible(p.to_string()));
    }
    Ok(allowed_from(p, cfg, &enumerate_committees(&cfg.params)))
}

fn allowed_from(p: &Profile, cfg: &EncodeConfig, all: &[Committee]) -> Vec<Committee> {
    let prop = cfg.proportionality.axiom();
    all.iter()
        .copied()
        .filter(|&w| outcome_violation(prop, p, w, &cfg.params).is_none())
        .filter(|&w| !cfg.weak_efficiency || outcome_violation(Axiom::WeakEfficiency, p, w, &cfg.params).is_none())
        .collect()
}

/// The encoded formula together with its variable map.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub config: EncodeConfig,
    pub cnf: Cnf,
    pub varmap: VarMap,
}

impl Encoding {
    pub fn domain(&self) -> &Arc<Domain> {
        self.varmap.domain()
    }

    /// Re-derives the clauses of an axiom instance from its payload.
    pub fn clauses_for(&self, instance: &AxiomInstance) -> Result<Vec<Vec<Lit>>, Error> {
        let vm = &self.varmap;
        let domain = vm.domain();
        let pos_of = |rank: u64| {
            domain
                .position_of_rank(rank)
                .ok_or_else(|| Error::Manifest(format!("profile rank {rank} is not encoded")))
        };
        Ok(match *instance {
            AxiomInstance::Totality { profile } => {
                vec![vm.vars_at(pos_of(profile)?).map(Lit::pos).collect()]
            }
            AxiomInstance::Uniqueness { profile } => {
                let vars: Vec<u32> = vm.vars_at(pos_of(profile)?).collect();
                amo_pairs(&vars).map(|(a, b)| vec![Lit::neg(a), Lit::neg(b)]).collect()
            }
            AxiomInstance::Strategyproofness { profile, voter, variant } => {
                let pos = pos_of(profile)?;
                let pos2 = pos_of(variant)?;
                let truthful = domain.profile(pos).ballot(voter);
                sp_pairs(vm, pos, pos2, truthful.mask())
                    .map(|(a, b)| vec![Lit::neg(a), Lit::neg(b)])
                    .collect()
            }
            AxiomInstance::Symmetry { profile, committee } => {
                let v = vm
                    .var(pos_of(profile)?, committee)
                    .ok_or_else(|| Error::Manifest(format!("committee {committee} not allowed")))?;
                vec![vec![Lit::pos(v)]]
            }
        })
    }
}

fn amo_pairs(vars: &[u32]) -> impl Iterator<Item = (u32, u32)> + '_ {
    vars.iter()
        .enumerate()
        .flat_map(move |(i, &a)| vars[i + 1..].iter().map(move |&b| (a, b)))
}

/// Variable pairs `(x_{P,C}, x_{P',C'})` with `C' ∩ A ⊋ C ∩ A`.
fn sp_pairs(vm: &VarMap, pos: usize, pos2: usize, truthful: u32) -> impl Iterator<Item = (u32, u32)> + '_ {
    let here = vm.vars_at(pos);
    let there = vm.vars_at(pos2);
    here.flat_map(move |a| {
        let (_, c) = vm.entry(a);
        let before = c.mask() & truthful;
        there.clone().filter_map(move |b| {
            let (_, c2) = vm.entry(b);
            let after = c2.mask() & truthful;
            (after != before && before & !after == 0).then_some((a, b))
        })
    })
}

/// Builds the formula with the default profile cap on a single thread.
pub fn encode(cfg: &EncodeConfig) -> Result<Encoding, Error> {
    encode_with(cfg, profile_cap(), 1)
}

pub fn encode_with(cfg: &EncodeConfig, cap: u64, threads: usize) -> Result<Encoding, Error> {
    cfg.validate()?;
    let params = cfg.params;
    let domain = Domain::build(&params, cfg.ci_order.clone(), cap)?;
    let all = enumerate_committees(&params);

    let mut first_var = Vec::with_capacity(domain.len() + 1);
    let mut committees = Vec::new();
    let mut positions = Vec::new();
    first_var.push(1u32);
    for (pos, p) in domain.profiles().enumerate() {
        let allowed = allowed_from(&p, cfg, &all);
        if allowed.is_empty() {
            return Err(Error::EmptyAllowedSet(p.to_string()));
        }
        positions.extend(std::iter::repeat(pos as u32).take(allowed.len()));
        committees.extend(allowed);
        first_var.push(committees.len() as u32 + 1);
    }
    let varmap = VarMap {
        domain: domain.clone(),
        first_var,
        committees,
        positions,
    };

    let chunk = 2048;
    let build_chunk = |start: usize| -> Cnf {
        let end = (start + chunk).min(domain.len());
        let mut out = Cnf::new(0);
        for pos in start..end {
            encode_profile(&varmap, cfg, pos, &mut out);
        }
        out
    };
    let starts: Vec<usize> = (0..domain.len()).step_by(chunk).collect();
    let parts: Vec<Cnf> = if threads > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| starts.par_iter().map(|&s| build_chunk(s)).collect())
    } else {
        starts.iter().map(|&s| build_chunk(s)).collect()
    };
    let mut cnf = Cnf::new(varmap.len() as u32);
    for part in parts {
        cnf.append(part);
    }
    cnf.set_num_vars(varmap.len() as u32);

    if cfg.symmetry_break {
        let (p, w) = symmetry_target(&params)?;
        let rank = p.rank(&params);
        let v = varmap.var_for(&p, w).ok_or_else(|| {
            Error::InvalidParams(format!("symmetry assumption f({p}) = {w} is not an allowed value"))
        })?;
        cnf.add_group(AxiomInstance::Symmetry { profile: rank, committee: w }, [&[Lit::pos(v)][..]]);
    }
    Ok(Encoding {
        config: cfg.clone(),
        cnf,
        varmap,
    })
}

fn encode_profile(vm: &VarMap, cfg: &EncodeConfig, pos: usize, out: &mut Cnf) {
    let domain = vm.domain();
    let params = domain.params();
    let rank = domain.rank(pos);
    let p = domain.profile(pos);
    let vars: Vec<u32> = vm.vars_at(pos).collect();

    let alo: Vec<Lit> = vars.iter().map(|&v| Lit::pos(v)).collect();
    out.add_group(AxiomInstance::Totality { profile: rank }, [alo.as_slice()]);
    let amo: Vec<[Lit; 2]> = amo_pairs(&vars).map(|(a, b)| [Lit::neg(a), Lit::neg(b)]).collect();
    if !amo.is_empty() {
        out.add_group(AxiomInstance::Uniqueness { profile: rank }, amo.iter().map(|c| &c[..]));
    }

    let b = params.num_ballots();
    let mode = cfg.sp_variant.variant_mode();
    for voter in 0..params.n {
        let weight = b.pow((params.n - 1 - voter) as u32);
        let truthful = p.ballot(voter);
        let base = rank - truthful.index() * weight;
        for reported in variant_ballots(truthful, params.m, mode) {
            let rank2 = base + reported.index() * weight;
            let Some(pos2) = domain.position_of_rank(rank2) else {
                continue;
            };
            let clauses: Vec<[Lit; 2]> = sp_pairs(vm, pos, pos2, truthful.mask())
                .map(|(a, c)| [Lit::neg(a), Lit::neg(c)])
                .collect();
            if clauses.is_empty() {
                continue;
            }
            out.add_group(
                AxiomInstance::Strategyproofness { profile: rank, voter, variant: rank2 },
                clauses.iter().map(|c| &c[..]),
            );
        }
    }
}

/// Sidecar description of an encoding: what every variable and clause group
/// means.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub config: EncodeConfig,
    pub num_vars: u32,
    pub num_clauses: usize,
    pub variables: Vec<ManifestVar>,
    pub groups: Vec<ManifestGroup>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestVar {
    pub id: u32,
    pub profile: String,
    pub committee: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestGroup {
    pub id: usize,
    #[serde(flatten)]
    pub instance: AxiomInstance,
    pub first_clause: usize,
    pub clause_count: usize,
    pub description: String,
}

pub const MANIFEST_FORMAT_VERSION: u32 = 1;

impl Encoding {
    pub fn manifest(&self) -> Manifest {
        let vm = &self.varmap;
        Manifest {
            format_version: MANIFEST_FORMAT_VERSION,
            config: self.config.clone(),
            num_vars: self.cnf.num_vars(),
            num_clauses: self.cnf.num_clauses(),
            variables: (1..=vm.len() as u32)
                .map(|id| {
                    let (p, w) = vm.describe(id);
                    ManifestVar {
                        id,
                        profile: p.to_string(),
                        committee: w.to_string(),
                    }
                })
                .collect(),
            groups: self
                .cnf
                .groups()
                .iter()
                .enumerate()
                .map(|(id, g)| ManifestGroup {
                    id,
                    instance: g.instance.clone(),
                    first_clause: g.clauses.start,
                    clause_count: g.clauses.len(),
                    description: crate::mus::describe_instance(&g.instance, self),
                })
                .collect(),
        }
    }

    /// Rebuilds an encoding from a DIMACS formula and its manifest, checking
    /// that they agree with a fresh encoding of the manifest's configuration.
    pub fn from_manifest(cnf: Cnf, manifest: &Manifest) -> Result<Encoding, Error> {
        if manifest.format_version != MANIFEST_FORMAT_VERSION {
            return Err(Error::Manifest(format!(
                "unsupported manifest version {}",
                manifest.format_version
            )));
        }
        let fresh = encode(&manifest.config)?;
        if fresh.cnf.num_vars() != cnf.num_vars() || fresh.cnf.num_clauses() != cnf.num_clauses() {
            return Err(Error::Manifest(format!(
                "formula has {} variables and {} clauses, the manifest's configuration gives {} and {}",
                cnf.num_vars(),
                cnf.num_clauses(),
                fresh.cnf.num_vars(),
                fresh.cnf.num_clauses()
            )));
        }
        let groups: Vec<ClauseGroup> = manifest
            .groups
            .iter()
            .map(|g| ClauseGroup {
                instance: g.instance.clone(),
                clauses: g.first_clause..g.first_clause + g.clause_count,
            })
            .collect();
        let mut cnf = cnf;
        cnf.set_groups(groups)?;
        Ok(Encoding {
            config: manifest.config.clone(),
            cnf,
            varmap: fresh.varmap,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: usize, n: usize, k: usize) -> ElectionParams {
        ElectionParams::new(m, n, k).unwrap()
    }

    fn names(ws: &[Committee]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn allowed_sets_examples() {
        let cfg = EncodeConfig::new(params(4, 3, 3));
        let p = Profile::parse("ab,c,d", 4).unwrap();
        assert_eq!(names(&allowed_committees(&p, &cfg).unwrap()), ["acd", "bcd"]);

        let cfg2 = EncodeConfig::new(params(4, 4, 2)).proportionality(ProportionalityMode::JrPartyLists);
        let p2 = Profile::parse("ab,ab,cd,cd", 4).unwrap();
        assert_eq!(names(&allowed_committees(&p2, &cfg2).unwrap()), ["ac", "ad", "bc", "bd"]);

        let p3 = Profile::parse("ab,ac,d", 4).unwrap();
        assert_eq!(allowed_committees(&p3, &cfg).unwrap().len(), 4);
        assert!(allowed_committees(&Profile::parse("a,a,b", 4).unwrap(), &cfg).is_err());
    }

    #[test]
    fn trivial_encoding() {
        let enc = encode(&EncodeConfig::new(params(2, 1, 1))).unwrap();
        assert_eq!(enc.cnf.num_vars(), 2);
        assert_eq!(enc.cnf.num_clauses(), 2);
        assert!(enc.cnf.clauses().all(|c| c.len() == 1));
        assert!(enc.cnf.to_dimacs_string(None).starts_with("p cnf 2 2\n"));
        let text = enc.cnf.to_dimacs_string(Some(&enc.varmap));
        assert!(text.contains("c x1 = f(a) == a\n"));
        assert!(text.contains("c x2 = f(b) == b\n"));
    }

    #[test]
    fn rejects_unencodable_variants() {
        let cfg = EncodeConfig::new(params(3, 2, 2)).sp(SpVariant::Cardinality);
        assert!(encode(&cfg).is_err());
        let cfg = EncodeConfig::new(params(3, 2, 2)).symmetry_break(true);
        assert!(encode(&cfg).is_err());
    }

    #[test]
    fn droop_never_empties_allowed_sets() {
        // at most k singletons can exceed n/(k+1) supporters
        for (m, n, k) in [(4, 3, 2), (3, 5, 2), (4, 2, 1)] {
            let cfg = EncodeConfig::new(params(m, n, k))
                .proportionality(ProportionalityMode::DroopSingleton)
                .weak_efficiency(true);
            assert!(encode(&cfg).is_ok());
        }
    }

    #[test]
    fn clauses_rederive_from_instances() {
        let cfg = EncodeConfig::new(params(3, 2, 2)).weak_efficiency(true);
        let enc = encode(&cfg).unwrap();
        for g in enc.cnf.groups() {
            let expect: Vec<Vec<Lit>> = g.clauses.clone().map(|i| enc.cnf.clause(i).to_vec()).collect();
            assert_eq!(enc.clauses_for(&g.instance).unwrap(), expect);
        }
    }

    #[test]
    fn parallel_encoding_is_identical() {
        let cfg = EncodeConfig::new(params(4, 3, 3)).weak_efficiency(true);
        let a = encode_with(&cfg, 1 << 30, 1).unwrap();
        let b = encode_with(&cfg, 1 << 30, 3).unwrap();
        assert_eq!(a.cnf, b.cnf);
    }

    #[test]
    fn no_self_loops_in_sp_groups() {
        let enc = encode(&EncodeConfig::new(params(4, 3, 3)).weak_efficiency(true)).unwrap();
        let pp = enc.config.params;
        for g in enc.cnf.groups() {
            if let AxiomInstance::Strategyproofness { profile, voter, variant } = g.instance {
                assert_ne!(profile, variant);
                let a = Profile::from_rank(profile, &pp);
                let b = Profile::from_rank(variant, &pp);
                for j in 0..pp.n {
                    if j != voter {
                        assert_eq!(a.ballot(j), b.ballot(j));
                    }
                }
                for i in g.clauses.clone() {
                    let c = enc.cnf.clause(i);
                    assert_eq!(c.len(), 2);
                    let (pa, _) = enc.varmap.entry(c[0].var());
                    let (pb, _) = enc.varmap.entry(c[1].var());
                    assert_eq!(enc.domain().rank(pa), profile);
                    assert_eq!(enc.domain().rank(pb), variant);
                }
            }
        }
    }

    #[test]
    fn manifest_round_trip() {
        let enc = encode(&EncodeConfig::new(params(3, 2, 2))).unwrap();
        let m = enc.manifest();
        let json = serde_json::to_string(&m).unwrap();
        let back: Manifest = serde_json::from_str(&json).unwrap();
        let cnf = Cnf::parse_dimacs_str(&enc.cnf.to_dimacs_string(Some(&enc.varmap))).unwrap();
        let rebuilt = Encoding::from_manifest(cnf, &back).unwrap();
        assert_eq!(rebuilt.cnf, enc.cnf);
    }
}
