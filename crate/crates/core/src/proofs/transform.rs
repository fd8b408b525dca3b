//! Rule transformers from the induction steps: each turns a table for
//! larger parameters into a table for smaller ones.

use std::sync::Arc;

use crate::error::Error;
use crate::model::{Ballot, CandidateSet, Committee, ElectionParams, Profile};
use crate::rules::{profile_cap, Domain, RuleTable};

fn lookup(t: &RuleTable, p: &Profile) -> Result<Committee, Error> {
    t.get(p).ok_or_else(|| Error::OutsideDomain(p.to_string()))
}

fn tabulate(
    domain: Arc<Domain>,
    mut f: impl FnMut(&Profile) -> Result<Committee, Error>,
) -> Result<RuleTable, Error> {
    let committees = domain.profiles().map(|p| f(&p)).collect::<Result<Vec<_>, _>>()?;
    RuleTable::from_committees(domain, committees)
}

/// `f_k(P) = f_{qk}(qP)`: a table for `k` voters from one for `q * k` voters.
pub fn reduce_voters(t: &RuleTable, q: usize) -> Result<RuleTable, Error> {
    let params = *t.params();
    if q == 0 || params.n != q * params.k {
        return Err(Error::Precondition(format!(
            "reducing voters with q = {q} needs n = q * k, got {params}"
        )));
    }
    let small = ElectionParams::new(params.m, params.k, params.k)?;
    let domain = Domain::build(&small, t.domain().ci_order().map(|o| o.to_vec()), profile_cap())?;
    tabulate(domain, |p| lookup(t, &p.repeat(q)))
}

/// Restricts a table over `m + 1` candidates to profiles over the first `m`.
/// Fails if the last candidate is ever elected there.
pub fn reduce_alternatives(t: &RuleTable) -> Result<RuleTable, Error> {
    let params = *t.params();
    if params.m < 2 || params.m - 1 < params.k {
        return Err(Error::Precondition(format!(
            "dropping a candidate needs m - 1 >= k, got {params}"
        )));
    }
    let dropped = params.m - 1;
    let small = ElectionParams::new(dropped, params.n, params.k)?;
    let order = t
        .domain()
        .ci_order()
        .map(|o| o.iter().copied().filter(|&c| c != dropped).collect::<Vec<_>>());
    let domain = Domain::build(&small, order, profile_cap())?;
    tabulate(domain, |p| {
        let w = lookup(t, p)?;
        if w.contains(dropped) {
            return Err(Error::Precondition(format!(
                "f({p}) = {w} elects the dropped candidate; the table is not weakly efficient"
            )));
        }
        Committee::new(w.mask(), &small)
    })
}

/// `f_k(A_1..A_k) = f_{k+1}(A_1..A_k, {c_{k+2}}) \ {c_{k+2}}`.
pub fn reduce_committee_size(t: &RuleTable) -> Result<RuleTable, Error> {
    let params = *t.params();
    let k = params.k.checked_sub(1).filter(|&k| k >= 1).ok_or_else(|| {
        Error::Precondition(format!("reducing the committee size needs k >= 2, got {params}"))
    })?;
    if params.n != k + 1 || params.m != k + 2 {
        return Err(Error::Precondition(format!(
            "reducing the committee size needs n = k and m = k + 1 after the step, got {params}"
        )));
    }
    if t.domain().ci_order().is_some() {
        return Err(Error::Precondition("candidate-interval tables are not supported here".into()));
    }
    let extra = k + 1;
    let phantom = Ballot::singleton(extra);
    let small = ElectionParams::new(k + 1, k, k)?;
    let domain = Domain::admissible(&small)?;
    tabulate(domain, |p| {
        let padded = p.extended(&[phantom]);
        let w = lookup(t, &padded)?;
        if !w.contains(extra) {
            return Err(Error::Precondition(format!(
                "f({padded}) = {w} misses the phantom voter's candidate"
            )));
        }
        Committee::new(w.mask() & !(1 << extra), &small)
    })
}

/// The quota guard `n / (k + 1) < q` for `n = q * k + r`, exactly.
pub fn droop_guard(q: usize, k: usize, r: usize) -> bool {
    q * k + r < q * (k + 1)
}

/// Pads every profile with `fixed` ballots: a table for `q * k` voters from
/// one for `q * k + r` voters, `0 <= r < k <= q`.
pub fn droop_reduce(t: &RuleTable, q: usize, fixed: &[Ballot]) -> Result<RuleTable, Error> {
    let params = *t.params();
    let (k, r) = (params.k, fixed.len());
    if !(r < k && k <= q) {
        return Err(Error::Precondition(format!(
            "padding needs 0 <= r < k <= q, got r = {r}, k = {k}, q = {q}"
        )));
    }
    if params.n != q * k + r {
        return Err(Error::Precondition(format!(
            "padding needs n = q * k + r = {}, got {params}",
            q * k + r
        )));
    }
    if !droop_guard(q, k, r) {
        return Err(Error::Precondition(format!("n / (k + 1) = {}/{} is not below q = {q}", params.n, k + 1)));
    }
    for b in fixed {
        Ballot::new(b.mask(), params.m)?;
    }
    let small = ElectionParams::new(params.m, q * k, k)?;
    let domain = Domain::build(&small, t.domain().ci_order().map(|o| o.to_vec()), profile_cap())?;
    tabulate(domain, |p| lookup(t, &p.extended(fixed)))
}
