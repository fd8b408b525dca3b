//! C ABI over `abcsat`.
//!
//! Every function returns an [`AbcsatStatus`]. On failure the message is
//! available from [`abcsat_last_error`] on the same thread. Handles are
//! opaque and must be released with the matching `_free` function; strings
//! returned through out-parameters are released with [`abcsat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use abcsat::axioms::{check, Axiom, SpVariant};
use abcsat::encoder::{encode, EncodeConfig, Encoding, ProportionalityMode};
use abcsat::proofs::replay_base_case;
use abcsat::rules::{build_table, Rule, RuleTable};
use abcsat::solver::{decode_model, solve_with, SolverConfig, Verdict};
use abcsat::{ElectionParams, Error, Profile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbcsatStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    NullOrUtf8 = 1,
    /// Malformed parameters, names, profiles or JSON.
    InvalidInput = 2,
    /// The profile is not in the table's domain.
    OutsideDomain = 3,
    /// The instance would enumerate more profiles than the cap allows.
    CapExceeded = 4,
    /// A decoded model or proof step did not check out.
    CheckFailed = 5,
    /// The solver hit its conflict limit.
    Aborted = 6,
    Io = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbcsatVerdict {
    Unknown = 0,
    Sat = 10,
    Unsat = 20,
}

/// A rule table: one committee per admissible profile.
pub struct AbcsatTable(RuleTable);

/// A CNF encoding with its variable map.
pub struct AbcsatEncoding(Encoding);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn status_of(e: &Error) -> AbcsatStatus {
    match e {
        Error::OutsideDomain(_) | Error::Inadmissible(_) => AbcsatStatus::OutsideDomain,
        Error::CapExceeded { .. } => AbcsatStatus::CapExceeded,
        Error::Decode(_) | Error::ProofStep { .. } | Error::Precondition(_) => AbcsatStatus::CheckFailed,
        Error::Aborted => AbcsatStatus::Aborted,
        Error::Io(_) => AbcsatStatus::Io,
        _ => AbcsatStatus::InvalidInput,
    }
}

struct Fail(AbcsatStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(AbcsatStatus::NullOrUtf8, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AbcsatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbcsatStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AbcsatStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(AbcsatStatus::NullOrUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn params(m: u32, n: u32, k: u32) -> Result<ElectionParams, Fail> {
    Ok(ElectionParams::new(m as usize, n as usize, k as usize)?)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn abcsat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn abcsat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the table of `rule` ("av" or "pav") over all admissible profiles.
///
/// # Safety
/// `rule` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn abcsat_table_build(
    rule: *const c_char,
    m: u32,
    n: u32,
    k: u32,
    out: *mut *mut AbcsatTable,
) -> AbcsatStatus {
    guard(|| {
        let rule: Rule = text(rule, "rule")?.parse()?;
        let t = build_table(rule, &params(m, n, k)?)?;
        put(out, Box::into_raw(Box::new(AbcsatTable(t))), "out")
    })
}

/// Parses a table from its JSON document.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn abcsat_table_from_json(json: *const c_char, out: *mut *mut AbcsatTable) -> AbcsatStatus {
    guard(|| {
        let t = RuleTable::from_json(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(AbcsatTable(t))), "out")
    })
}

/// Serialises a table to JSON.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn abcsat_table_to_json(table: *const AbcsatTable, out: *mut *mut c_char) -> AbcsatStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        put(out, owned(t.0.to_json()), "out")
    })
}

/// Number of profiles in the table's domain.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn abcsat_table_len(table: *const AbcsatTable, out: *mut usize) -> AbcsatStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        put(out, t.0.len(), "out")
    })
}

/// Looks up the committee for a profile such as "ab,c,abd".
///
/// # Safety
/// `table` must be a live handle, `profile` a valid C string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn abcsat_table_lookup(
    table: *const AbcsatTable,
    profile: *const c_char,
    out: *mut *mut c_char,
) -> AbcsatStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let pp = t.0.params();
        let p = Profile::parse(text(profile, "profile")?, pp.m)?;
        if p.len() != pp.n {
            return Err(Error::InvalidProfile(format!("expected {} ballots, got {}", pp.n, p.len())).into());
        }
        let w = t.0.get(&p).ok_or_else(|| Fail::from(Error::OutsideDomain(p.to_string())))?;
        put(out, owned(w.to_string()), "out")
    })
}

/// Checks an axiom by name. On a violation `witness` (if non-null) receives a
/// description of the first one; otherwise it is set to null.
///
/// # Safety
/// `table` must be a live handle, `axiom` a valid C string, `passed` a valid
/// pointer and `witness` null or valid.
#[no_mangle]
pub unsafe extern "C" fn abcsat_table_check(
    table: *const AbcsatTable,
    axiom: *const c_char,
    passed: *mut bool,
    witness: *mut *mut c_char,
) -> AbcsatStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let axiom: Axiom = text(axiom, "axiom")?.parse()?;
        let v = check(&t.0, axiom);
        put(passed, v.passed, "passed")?;
        if !witness.is_null() {
            witness.write(v.witness.map_or(ptr::null_mut(), |w| owned(w.to_string())));
        }
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn abcsat_table_free(table: *mut AbcsatTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Encodes the existence of a rule with the given axioms. `proportionality`
/// is "hare", "droop" or "jr-party"; `sp` is "subset" or "superset".
///
/// # Safety
/// The strings must be valid C strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn abcsat_encode(
    m: u32,
    n: u32,
    k: u32,
    proportionality: *const c_char,
    sp: *const c_char,
    weak_efficiency: bool,
    symmetry_break: bool,
    out: *mut *mut AbcsatEncoding,
) -> AbcsatStatus {
    guard(|| {
        let mode: ProportionalityMode = text(proportionality, "proportionality")?.parse()?;
        let sp: SpVariant = text(sp, "sp")?.parse()?;
        let cfg = EncodeConfig::new(params(m, n, k)?)
            .proportionality(mode)
            .sp(sp)
            .weak_efficiency(weak_efficiency)
            .symmetry_break(symmetry_break);
        let enc = encode(&cfg)?;
        put(out, Box::into_raw(Box::new(AbcsatEncoding(enc))), "out")
    })
}

/// Variable and clause counts of an encoding.
///
/// # Safety
/// `enc` must be a live handle and the out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn abcsat_encoding_size(
    enc: *const AbcsatEncoding,
    vars: *mut u32,
    clauses: *mut usize,
) -> AbcsatStatus {
    guard(|| {
        let e = enc.as_ref().ok_or_else(|| null("encoding"))?;
        put(vars, e.0.cnf.num_vars(), "vars")?;
        put(clauses, e.0.cnf.num_clauses(), "clauses")
    })
}

/// The encoding in DIMACS form, with variable-name comments.
///
/// # Safety
/// `enc` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn abcsat_encoding_to_dimacs(enc: *const AbcsatEncoding, out: *mut *mut c_char) -> AbcsatStatus {
    guard(|| {
        let e = enc.as_ref().ok_or_else(|| null("encoding"))?;
        put(out, owned(e.0.cnf.to_dimacs_string(Some(&e.0.varmap))), "out")
    })
}

/// Solves an encoding. `conflict_limit` 0 means no limit. On SAT, `table`
/// (if non-null) receives the decoded rule; otherwise it is set to null.
/// Hitting the limit returns `Aborted` with verdict `Unknown`.
///
/// # Safety
/// `enc` must be a live handle, `verdict` valid and `table` null or valid.
#[no_mangle]
pub unsafe extern "C" fn abcsat_encoding_solve(
    enc: *const AbcsatEncoding,
    conflict_limit: u64,
    verdict: *mut AbcsatVerdict,
    table: *mut *mut AbcsatTable,
) -> AbcsatStatus {
    guard(|| {
        let e = enc.as_ref().ok_or_else(|| null("encoding"))?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        verdict.write(AbcsatVerdict::Unknown);
        if !table.is_null() {
            table.write(ptr::null_mut());
        }
        let config = SolverConfig {
            conflict_limit: (conflict_limit > 0).then_some(conflict_limit),
            ..SolverConfig::default()
        };
        let r = solve_with(&e.0.cnf, &[], config);
        match r.status {
            Verdict::Aborted => Err(Error::Aborted.into()),
            Verdict::Unsatisfiable => {
                verdict.write(AbcsatVerdict::Unsat);
                Ok(())
            }
            Verdict::Satisfiable => {
                let t = decode_model(r.model.as_deref().unwrap_or_default(), &e.0.varmap)?;
                verdict.write(AbcsatVerdict::Sat);
                if !table.is_null() {
                    table.write(Box::into_raw(Box::new(AbcsatTable(t))));
                }
                Ok(())
            }
        }
    })
}

/// # Safety
/// `enc` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn abcsat_encoding_free(enc: *mut AbcsatEncoding) {
    if !enc.is_null() {
        drop(Box::from_raw(enc));
    }
}

/// Replays the bundled base-case proof. Returns `CheckFailed` if any step or
/// the final contradiction does not verify.
///
/// # Safety
/// The out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn abcsat_replay_base_case(counted: *mut usize, verified: *mut usize) -> AbcsatStatus {
    guard(|| {
        let r = replay_base_case()?;
        put(counted, r.counted_steps, "counted")?;
        put(verified, r.verified_steps, "verified")?;
        if !r.verified {
            return Err(Fail(AbcsatStatus::CheckFailed, "base-case proof does not verify".into()));
        }
        Ok(())
    })
}
