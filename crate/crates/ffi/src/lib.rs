//! C ABI for confluence-core.
//!
//! Terms cross the boundary as opaque `ClTerm` handles; reports and
//! counterexamples as JSON strings. Every function returns a `ClStatus`;
//! on an error status `cl_last_error` describes what went wrong on the
//! calling thread. Strings returned through out-parameters are owned by the
//! caller and must be released with `cl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use confluence_core::cex::find_diamond_cex;
use confluence_core::parallel::{complete_dev, par_step_check};
use confluence_core::props::{
    check_commutation, check_confluence, check_diamond, check_strip, check_strong_commutation, Budget, Outcome,
};
use confluence_core::reduction::{normalize, Normalization};
use confluence_core::{parse, pretty, CorpusSpec, Error, NamingContext, Relation, Term};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    /// A check failed or a counterexample was found.
    Fail = 1,
    /// A check ran out of budget on some instance.
    Inconclusive = 2,
    NullArgument = -1,
    InvalidUtf8 = -2,
    Parse = -3,
    Term = -4,
    Relation = -5,
    Type = -6,
    Json = -7,
    UnknownName = -8,
    Panic = -9,
    InvalidArgument = -10,
}

/// An untyped term.
pub struct ClTerm(Term);

/// A list of terms, in reduct order.
pub struct ClTermList(Vec<ClTerm>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(ClStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match &e {
            Error::Parse(_) => ClStatus::Parse,
            Error::Term(_) => ClStatus::Term,
            Error::Relation(_) => ClStatus::Relation,
            Error::Type(_) => ClStatus::Type,
            Error::Json(_) => ClStatus::Json,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: ClStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<ClStatus, Failure>) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ClStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(ClStatus::NullArgument, format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(ClStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn term_arg<'a>(p: *const ClTerm, what: &str) -> Result<&'a Term, Failure> {
    match p.as_ref() {
        Some(t) => Ok(&t.0),
        None => fail(ClStatus::NullArgument, format!("{what} is null")),
    }
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    match p.as_mut() {
        Some(p) => Ok(p),
        None => fail(ClStatus::NullArgument, format!("{what} is null")),
    }
}

fn naming(ctx: Option<&str>) -> Result<NamingContext, Failure> {
    Ok(NamingContext::from_list(ctx.unwrap_or("")).map_err(Error::from)?)
}

fn relation(name: &str) -> Result<Relation, Failure> {
    let mut out: Option<Relation> = None;
    for part in name.split('+') {
        let Some(r) = Relation::by_name(part.trim()) else {
            return fail(ClStatus::UnknownName, format!("unknown relation `{part}`"));
        };
        out = Some(match out {
            Some(acc) => confluence_core::union_rel(&acc, &r),
            None => r,
        });
    }
    Ok(out.expect("split yields one part"))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let out = unsafe { out_arg(out, "out")? };
    *out = CString::new(s).expect("generated text has no nul").into_raw();
    Ok(())
}

fn give_term(t: Term, out: *mut *mut ClTerm) -> Result<(), Failure> {
    let out = unsafe { out_arg(out, "out")? };
    *out = Box::into_raw(Box::new(ClTerm(t)));
    Ok(())
}

/// Message for the last error on this thread, or null. Free with
/// `cl_string_free`.
#[no_mangle]
pub extern "C" fn cl_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` with free names `ctx` (comma-separated, may be null).
///
/// # Safety
/// `text` and `ctx` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_term_parse(text: *const c_char, ctx: *const c_char, out: *mut *mut ClTerm) -> ClStatus {
    guard(|| {
        let names = naming(opt_str_arg(ctx, "ctx")?)?;
        let t = parse(str_arg(text, "text")?, &names).map_err(Error::from)?;
        give_term(t, out)?;
        Ok(ClStatus::Ok)
    })
}

/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cl_term_from_json(json: *const c_char, out: *mut *mut ClTerm) -> ClStatus {
    guard(|| {
        let t: Term = serde_json::from_str(str_arg(json, "json")?).map_err(Error::from)?;
        give_term(t, out)?;
        Ok(ClStatus::Ok)
    })
}

/// # Safety
/// `t` must be null or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn cl_term_free(t: *mut ClTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle; `ctx` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_term_pretty(t: *const ClTerm, ctx: *const c_char, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        let names = naming(opt_str_arg(ctx, "ctx")?)?;
        let s = pretty(term_arg(t, "term")?, &names).map_err(Error::from)?;
        give_string(s, out)?;
        Ok(ClStatus::Ok)
    })
}

/// # Safety
/// `t` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_term_to_json(t: *const ClTerm, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        let s = serde_json::to_string(term_arg(t, "term")?).map_err(Error::from)?;
        give_string(s, out)?;
        Ok(ClStatus::Ok)
    })
}

/// Structural (α-) equality; false if either handle is null.
///
/// # Safety
/// Non-null arguments must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cl_term_equal(a: *const ClTerm, b: *const ClTerm) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

/// # Safety
/// `t` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn cl_term_height(t: *const ClTerm) -> usize {
    t.as_ref().map_or(0, |t| t.0.height())
}

/// One-step reducts under `rel` ("beta", "eta", "betaeta", "par", or a
/// `+`-joined union).
///
/// # Safety
/// `t` must be a live handle; `rel` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_reducts(t: *const ClTerm, rel: *const c_char, out: *mut *mut ClTermList) -> ClStatus {
    guard(|| {
        let rel = relation(str_arg(rel, "rel")?)?;
        let rs = rel.reducts(term_arg(t, "term")?);
        let out = out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(ClTermList(rs.into_iter().map(ClTerm).collect())));
        Ok(ClStatus::Ok)
    })
}

/// # Safety
/// `list` must be null or a live list.
#[no_mangle]
pub unsafe extern "C" fn cl_term_list_len(list: *const ClTermList) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// Borrowed element `i`, or null when out of range. The handle stays owned
/// by the list.
///
/// # Safety
/// `list` must be null or a live list.
#[no_mangle]
pub unsafe extern "C" fn cl_term_list_get(list: *const ClTermList, i: usize) -> *const ClTerm {
    list.as_ref()
        .and_then(|l| l.0.get(i))
        .map_or(ptr::null(), |t| t as *const ClTerm)
}

/// # Safety
/// `list` must be null or a live list.
#[no_mangle]
pub unsafe extern "C" fn cl_term_list_free(list: *mut ClTermList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// # Safety
/// `t` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_complete_dev(t: *const ClTerm, out: *mut *mut ClTerm) -> ClStatus {
    guard(|| {
        give_term(complete_dev(term_arg(t, "term")?), out)?;
        Ok(ClStatus::Ok)
    })
}

/// Leftmost-outermost normalization with at most `fuel` steps. Returns
/// `CL_STATUS_FAIL` (with the last term in `out`) when fuel runs out.
///
/// # Safety
/// `t` must be a live handle; `rel` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_normalize(
    t: *const ClTerm,
    rel: *const c_char,
    fuel: usize,
    out: *mut *mut ClTerm,
) -> ClStatus {
    guard(|| {
        let rel = relation(str_arg(rel, "rel")?)?;
        let (status, t) = match normalize(term_arg(t, "term")?, &rel, fuel) {
            Normalization::NormalForm(n) => (ClStatus::Ok, n),
            Normalization::FuelExhausted(n) => (ClStatus::Fail, n),
        };
        give_term(t, out)?;
        Ok(status)
    })
}

/// Whether `m` parallel-reduces to `n` in one step; false on null.
///
/// # Safety
/// Non-null arguments must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cl_par_step(m: *const ClTerm, n: *const ClTerm) -> bool {
    match (m.as_ref(), n.as_ref()) {
        (Some(m), Some(n)) => par_step_check(&m.0, &n.0),
        _ => false,
    }
}

/// Runs a property check over all terms of height at most `height` with
/// `free_vars` free variables and writes the JSON report to `report`.
/// `property` is one of "diamond", "strong-comm", "comm", "confluence",
/// "strip"; `rel2` may be null for single-relation properties.
///
/// # Safety
/// String arguments must be NUL-terminated (`rel2` may be null); `report`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cl_check(
    property: *const c_char,
    rel: *const c_char,
    rel2: *const c_char,
    height: usize,
    free_vars: usize,
    depth: usize,
    nodes: usize,
    report: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        let r = relation(str_arg(rel, "rel")?)?;
        let s = match opt_str_arg(rel2, "rel2")? {
            Some(name) => relation(name)?,
            None => r.clone(),
        };
        let spec = CorpusSpec::untyped(height, free_vars);
        if nodes == 0 {
            return fail(ClStatus::InvalidArgument, "node budget must be positive");
        }
        let budget = Budget::new(depth).with_nodes(nodes);
        let rep = match str_arg(property, "property")? {
            "diamond" => check_diamond(&r, &spec),
            "strong-comm" => check_strong_commutation(&r, &s, &spec, budget),
            "comm" => check_commutation(&r, &s, &spec, budget),
            "confluence" => check_confluence(&r, &spec, budget),
            "strip" => check_strip(&r, &spec, budget),
            other => return fail(ClStatus::UnknownName, format!("unknown property `{other}`")),
        };
        give_string(rep.to_json().to_string(), report)?;
        Ok(match rep.outcome {
            Outcome::Pass => ClStatus::Ok,
            Outcome::Fail(_) => ClStatus::Fail,
            Outcome::Inconclusive(_) => ClStatus::Inconclusive,
        })
    })
}

/// Searches for a diamond counterexample. On `CL_STATUS_FAIL` the
/// counterexample JSON is written to `cex`; on `CL_STATUS_OK` none exists in
/// the corpus and `cex` is set to null.
///
/// # Safety
/// `rel` must be NUL-terminated; `cex` writable.
#[no_mangle]
pub unsafe extern "C" fn cl_find_diamond_cex(
    rel: *const c_char,
    height: usize,
    free_vars: usize,
    cex: *mut *mut c_char,
) -> ClStatus {
    guard(|| {
        let r = relation(str_arg(rel, "rel")?)?;
        match find_diamond_cex(&r, &CorpusSpec::untyped(height, free_vars)) {
            Some(c) => {
                give_string(serde_json::to_string(&c).map_err(Error::from)?, cex)?;
                Ok(ClStatus::Fail)
            }
            None => {
                *out_arg(cex, "cex")? = ptr::null_mut();
                Ok(ClStatus::Ok)
            }
        }
    })
}
