//! C ABI over `scc-core`.
//!
//! Correspondences live behind an opaque `SccHandle` created by one of the
//! `scc_new_*` / `scc_load` functions and released with `scc_free`. Every
//! fallible call returns an `SccStatus`; on failure the message is available
//! from `scc_last_error` until the next call on the same thread. Strings
//! returned through `out` parameters are owned by the caller and must be
//! released with `scc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::json;

use scc_core::ds::{ds_strategy_proof_given, ProbabilityModel};
use scc_core::io::{load_scc, parse_table_code, table_code, NamedScc, SccFile};
use scc_core::verify::{Bias, Scope, Verification};
use scc_core::{
    find_taylor_manipulation, is_onto_singletons, weak_dictators, Alternative, Ballot, Error, Mode,
    Profile, Rule, Scc,
};

/// Opaque correspondence handle.
pub struct SccHandle {
    inner: NamedScc,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SccStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Range = 3,
    ModelInvalid = 4,
    TooLarge = 5,
    Format = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SccRuleKind {
    /// `param` is the alternative.
    Constant = 0,
    /// `param` is the voter.
    Dictatorial = 1,
    Omninomination = 2,
    PluralityTies = 3,
    BordaSet = 4,
    ParetoSet = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SccProperty {
    Spo = 0,
    Spp = 1,
    Onto = 2,
    WeakDictator = 3,
    /// Both SPO and SPP.
    Taylor = 4,
    /// No expected-utility manipulation under the half-half model.
    DsHalf = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SccMode {
    Optimist = 0,
    Pessimist = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SccModel {
    HalfHalf = 0,
    UniformOverSet = 1,
    /// Uses the accompanying seed.
    SeededRandom = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(SccStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => SccStatus::Domain,
            Error::Range { .. } => SccStatus::Range,
            Error::ModelInvalid(_) => SccStatus::ModelInvalid,
            Error::TooLarge { .. } => SccStatus::TooLarge,
            Error::Format(_) => SccStatus::Format,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SccStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SccStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SccStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SccStatus::Panic
        }
    }
}

unsafe fn handle<'a>(h: *const SccHandle) -> Result<&'a NamedScc, Failure> {
    h.as_ref().map(|h| &h.inner).ok_or_else(|| null("handle"))
}

unsafe fn string_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(SccStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn emit_handle(out: *mut *mut SccHandle, inner: NamedScc) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(SccHandle { inner }));
    Ok(())
}

unsafe fn emit_string(out: *mut *mut c_char, s: Option<String>) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = match s {
        Some(s) => CString::new(s).expect("json has no NUL").into_raw(),
        None => ptr::null_mut(),
    };
    Ok(())
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn scc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a built-in rule over `voters` voters and `alternatives` alternatives.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_new_rule(
    kind: SccRuleKind,
    param: u32,
    voters: u32,
    alternatives: u32,
    out: *mut *mut SccHandle,
) -> SccStatus {
    guard(|| {
        let rule = match kind {
            SccRuleKind::Constant => {
                let a = u8::try_from(param).map_err(|_| Failure(SccStatus::Domain, "alternative out of range".into()))?;
                Rule::Constant(Alternative(a))
            }
            SccRuleKind::Dictatorial => Rule::Dictatorial(param as usize),
            SccRuleKind::Omninomination => Rule::Omninomination,
            SccRuleKind::PluralityTies => Rule::PluralityTies,
            SccRuleKind::BordaSet => Rule::BordaSet,
            SccRuleKind::ParetoSet => Rule::ParetoSet,
        };
        let scc = Scc::from_rule(voters as usize, alternatives as usize, rule)?;
        emit_handle(out, NamedScc::with_default_names(scc))
    })
}

/// Parses a correspondence from JSON text in the file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_from_json(json: *const c_char, out: *mut *mut SccHandle) -> SccStatus {
    guard(|| {
        let text = string_arg(json, "json")?;
        let file: SccFile =
            serde_json::from_str(text).map_err(|e| Failure(SccStatus::Format, e.to_string()))?;
        emit_handle(out, NamedScc::from_file(&file)?)
    })
}

/// Loads a correspondence file from `path`.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_load(path: *const c_char, out: *mut *mut SccHandle) -> SccStatus {
    guard(|| {
        let path = string_arg(path, "path")?;
        emit_handle(out, load_scc(path)?)
    })
}

/// Rebuilds an explicit table from its table code.
///
/// # Safety
/// `code` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_from_code(code: *const c_char, out: *mut *mut SccHandle) -> SccStatus {
    guard(|| {
        let code = string_arg(code, "code")?;
        emit_handle(out, NamedScc::with_default_names(parse_table_code(code)?))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn scc_free(h: *mut SccHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn scc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of voters, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scc_voters(h: *const SccHandle) -> u32 {
    h.as_ref().map_or(0, |h| h.inner.scc.n() as u32)
}

/// Number of alternatives, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn scc_alternatives(h: *const SccHandle) -> u32 {
    h.as_ref().map_or(0, |h| h.inner.scc.m() as u32)
}

/// Evaluates the correspondence on a profile given as `voters * alternatives`
/// alternative ids, one ballot after another, most preferred first. Writes
/// the outcome as a bitmask (bit `a` set iff `a` is chosen).
///
/// # Safety
/// `ballots` must point to `len` readable bytes; `out_mask` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_evaluate(
    h: *const SccHandle,
    ballots: *const u8,
    len: usize,
    out_mask: *mut u8,
) -> SccStatus {
    guard(|| {
        let f = handle(h)?;
        if ballots.is_null() {
            return Err(null("ballots"));
        }
        if out_mask.is_null() {
            return Err(null("out_mask"));
        }
        let (n, m) = (f.scc.n(), f.scc.m());
        if len != n * m {
            return Err(Failure(SccStatus::Domain, format!("expected {} ids, got {len}", n * m)));
        }
        let ids = std::slice::from_raw_parts(ballots, len);
        let profile = Profile::new(
            ids.chunks(m)
                .map(|b| Ballot::new(b.to_vec()))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        *out_mask = f.scc.evaluate(&profile)?.mask();
        Ok(())
    })
}

/// Decides `property`, writing whether it holds.
///
/// # Safety
/// `h` must be a live handle; `out_holds` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_check(h: *const SccHandle, property: SccProperty, out_holds: *mut bool) -> SccStatus {
    guard(|| {
        let f = &handle(h)?.scc;
        if out_holds.is_null() {
            return Err(null("out_holds"));
        }
        *out_holds = match property {
            SccProperty::Spo => find_taylor_manipulation(f, Mode::Optimist).is_none(),
            SccProperty::Spp => find_taylor_manipulation(f, Mode::Pessimist).is_none(),
            SccProperty::Onto => is_onto_singletons(f).onto,
            SccProperty::WeakDictator => !weak_dictators(f).is_empty(),
            SccProperty::Taylor => {
                find_taylor_manipulation(f, Mode::Optimist).is_none()
                    && find_taylor_manipulation(f, Mode::Pessimist).is_none()
            }
            SccProperty::DsHalf => ds_strategy_proof_given(f, &ProbabilityModel::HalfHalf)?.is_none(),
        };
        Ok(())
    })
}

/// Weak dictators as a bitmask over voters (bit `i` set iff voter `i` is one).
///
/// # Safety
/// `h` must be a live handle; `out_mask` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_weak_dictators(h: *const SccHandle, out_mask: *mut u64) -> SccStatus {
    guard(|| {
        let f = &handle(h)?.scc;
        if out_mask.is_null() {
            return Err(null("out_mask"));
        }
        if f.n() > 64 {
            return Err(Failure(SccStatus::Range, "more than 64 voters".into()));
        }
        *out_mask = weak_dictators(f).into_iter().fold(0, |acc, v| acc | 1 << v);
        Ok(())
    })
}

/// First optimist/pessimist manipulation as JSON, or null in `*out` when none exists.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_taylor_witness_json(h: *const SccHandle, mode: SccMode, out: *mut *mut c_char) -> SccStatus {
    guard(|| {
        let f = &handle(h)?.scc;
        let mode = match mode {
            SccMode::Optimist => Mode::Optimist,
            SccMode::Pessimist => Mode::Pessimist,
        };
        let w = find_taylor_manipulation(f, mode);
        emit_string(out, w.map(|w| serde_json::to_string(&w).expect("witness serializes")))
    })
}

/// First expected-utility manipulation under `model` as JSON (utilities as
/// `"num/den"` strings), or null in `*out` when none exists.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_ds_witness_json(
    h: *const SccHandle,
    model: SccModel,
    seed: u64,
    out: *mut *mut c_char,
) -> SccStatus {
    guard(|| {
        let f = &handle(h)?.scc;
        let model = match model {
            SccModel::HalfHalf => ProbabilityModel::HalfHalf,
            SccModel::UniformOverSet => ProbabilityModel::UniformOverSet,
            SccModel::SeededRandom => ProbabilityModel::SeededRandom { seed },
        };
        let w = ds_strategy_proof_given(f, &model)?;
        emit_string(out, w.map(|w| serde_json::to_string(&w).expect("witness serializes")))
    })
}

/// The table code of the correspondence.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_table_code(h: *const SccHandle, out: *mut *mut c_char) -> SccStatus {
    guard(|| {
        let f = &handle(h)?.scc;
        emit_string(out, Some(table_code(f)))
    })
}

/// Runs a verification and writes the report as JSON.
///
/// With `exhaustive` false, `count` seeded uniform samples follow the
/// fixtures. With `equivalence` false only the weak-dictator check runs.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn scc_verify_json(
    voters: u32,
    alternatives: u32,
    exhaustive: bool,
    count: u64,
    seed: u64,
    models: u32,
    jobs: u32,
    equivalence: bool,
    out: *mut *mut c_char,
) -> SccStatus {
    guard(|| {
        let scope = if exhaustive {
            Scope::Exhaustive
        } else {
            Scope::Sample {
                count,
                seed,
                bias: Bias::Uniform,
            }
        };
        let v = Verification::new(voters as usize, alternatives as usize, scope)
            .jobs(jobs as usize)
            .models(models as usize, seed);
        let report = if equivalence { v.run_equivalence()? } else { v.run_taylor()? };
        let clean = report.is_clean();
        let mut value = serde_json::to_value(&report).expect("report serializes");
        value["clean"] = json!(clean);
        emit_string(out, Some(value.to_string()))
    })
}
