//! C ABI for relcon.
//!
//! Relations, cones and markets are opaque handles built from the same JSON
//! documents the command-line tool reads, and released with the matching
//! `_free` function. Every fallible call returns a `RelconStatus`; on failure
//! `relcon_last_error` describes the problem until the next call on the same
//! thread. Strings handed out through out-parameters belong to the caller and
//! are released with `relcon_string_free`.
//!
//! Out-parameters documented as optional may be null. Required pointers that
//! are null yield `RELCON_STATUS_NULL_ARGUMENT` and nothing is written.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use relcon::cone::{common_cone_completion, path_consistent};
use relcon::consistency::{chain_consistent, common_completion, completion_unique};
use relcon::io::{parse_document, to_json, ConeDoc, ConePairDoc, DocumentError, MarketDoc, RelationDoc, RelationPairDoc};
use relcon::pareto::pareto_improvement;
use relcon::{Cone, ConeError, ConsistencyError, Market, MarketError, Relation, RelationError};
use serde_json::json;
use thiserror::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelconStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A document failed to parse or violated a precondition.
    InvalidInput = 3,
    /// Operands live on different universes or in different dimensions.
    Incompatible = 4,
    /// The operands are inconsistent, so no completion exists.
    Inconsistent = 5,
    /// An internal failure inside the library; the message describes it.
    Internal = 6,
}

/// A relation on a finite universe.
pub struct RelconRelation {
    inner: Relation,
}

/// A finitely generated rational cone.
pub struct RelconCone {
    inner: Cone,
}

/// A validated market of fair exchanges and down-trades.
pub struct RelconMarket {
    inner: Market,
}

#[derive(Debug, Error)]
enum FfiError {
    #[error("argument `{0}` is null")]
    Null(&'static str),
    #[error("argument `{0}` is not valid UTF-8")]
    Utf8(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Incompatible(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl FfiError {
    fn status(&self) -> RelconStatus {
        match self {
            FfiError::Null(_) => RelconStatus::NullArgument,
            FfiError::Utf8(_) => RelconStatus::InvalidUtf8,
            FfiError::Invalid(_) => RelconStatus::InvalidInput,
            FfiError::Incompatible(_) => RelconStatus::Incompatible,
            FfiError::Inconsistent(_) => RelconStatus::Inconsistent,
            FfiError::Internal(_) => RelconStatus::Internal,
        }
    }
}

impl From<DocumentError> for FfiError {
    fn from(e: DocumentError) -> Self {
        FfiError::Invalid(e.to_string())
    }
}

impl From<ConsistencyError> for FfiError {
    fn from(e: ConsistencyError) -> Self {
        match e {
            ConsistencyError::Inconsistent(_) => FfiError::Inconsistent(e.to_string()),
            ConsistencyError::UniverseMismatch | ConsistencyError::Relation(RelationError::UniverseMismatch) => {
                FfiError::Incompatible(e.to_string())
            }
            _ => FfiError::Invalid(e.to_string()),
        }
    }
}

impl From<ConeError> for FfiError {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::Inconsistent(_) => FfiError::Inconsistent(e.to_string()),
            ConeError::DimensionMismatch { .. } => FfiError::Incompatible(e.to_string()),
            _ => FfiError::Invalid(e.to_string()),
        }
    }
}

impl From<MarketError> for FfiError {
    fn from(e: MarketError) -> Self {
        match e {
            MarketError::ArbitrageExists(_) => FfiError::Inconsistent(e.to_string()),
            _ => FfiError::Invalid(e.to_string()),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: Option<String>) {
    // interior NULs cannot come from our messages, but never lose the error
    let message = message.map(|m| CString::new(m.replace('\0', " ")).expect("NULs removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

/// Runs `f`, records its error and converts panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), FfiError>) -> RelconStatus {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".to_owned());
        Err(FfiError::Internal(message))
    });
    match result {
        Ok(()) => {
            set_last_error(None);
            RelconStatus::Ok
        }
        Err(e) => {
            let status = e.status();
            set_last_error(Some(e.to_string()));
            status
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, FfiError> {
    if p.is_null() {
        return Err(FfiError::Null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| FfiError::Utf8(name))
}

unsafe fn handle<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, FfiError> {
    p.as_ref().ok_or(FfiError::Null(name))
}

fn require<T>(p: *mut T, name: &'static str) -> Result<(), FfiError> {
    if p.is_null() {
        Err(FfiError::Null(name))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NULs removed").into_raw()
}

/// Writes `value` through `out` unless `out` is null.
unsafe fn put<T>(out: *mut T, value: T) {
    if let Some(slot) = out.as_mut() {
        *slot = value;
    }
}

unsafe fn put_json(out: *mut *mut c_char, value: Option<serde_json::Value>) {
    if !out.is_null() {
        *out = value.map_or(ptr::null_mut(), |v| c_string(to_json(&v)));
    }
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn relcon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a
/// successful call. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn relcon_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn relcon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a relation from a `{"universe": [..], "pairs": [[a, b], ..]}`
/// document.
///
/// # Safety
/// `json` must be null or NUL-terminated; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_relation_from_json(json: *const c_char, out: *mut *mut RelconRelation) -> RelconStatus {
    guard(|| {
        require(out, "out")?;
        let doc: RelationDoc = parse_document(text(json, "json")?)?;
        *out = boxed(RelconRelation { inner: doc.to_relation()? });
        Ok(())
    })
}

/// Builds both relations of a `{"universe", "relation_1", "relation_2"}`
/// document.
///
/// # Safety
/// `json` must be null or NUL-terminated; `out1` and `out2` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_relation_pair_from_json(
    json: *const c_char,
    out1: *mut *mut RelconRelation,
    out2: *mut *mut RelconRelation,
) -> RelconStatus {
    guard(|| {
        require(out1, "out1")?;
        require(out2, "out2")?;
        let doc: RelationPairDoc = parse_document(text(json, "json")?)?;
        let (r1, r2) = doc.to_relations()?;
        *out1 = boxed(RelconRelation { inner: r1 });
        *out2 = boxed(RelconRelation { inner: r2 });
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a relation from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn relcon_relation_free(r: *mut RelconRelation) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Serializes a relation as a relation document.
///
/// # Safety
/// `r` must be null or a live relation; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_relation_to_json(r: *const RelconRelation, out_json: *mut *mut c_char) -> RelconStatus {
    guard(|| {
        require(out_json, "out_json")?;
        let r = handle(r, "r")?;
        *out_json = c_string(to_json(&RelationDoc::from_relation(&r.inner)));
        Ok(())
    })
}

/// Reports which order axioms a relation satisfies, as a JSON object of
/// booleans.
///
/// # Safety
/// `r` must be null or a live relation; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_relation_classify(r: *const RelconRelation, out_json: *mut *mut c_char) -> RelconStatus {
    guard(|| {
        require(out_json, "out_json")?;
        let r = handle(r, "r")?;
        *out_json = c_string(to_json(&r.inner.classify()));
        Ok(())
    })
}

/// Decides chain consistency of two transitive relations. When inconsistent
/// and `out_witness_json` is non-null, it receives the witness chain as
/// `{"nodes": [..], "tags": [..]}`; otherwise it is set to null.
///
/// # Safety
/// Handles must be null or live; `out_consistent` must be null or writable;
/// `out_witness_json` is optional.
#[no_mangle]
pub unsafe extern "C" fn relcon_chain_consistent(
    r1: *const RelconRelation,
    r2: *const RelconRelation,
    out_consistent: *mut bool,
    out_witness_json: *mut *mut c_char,
) -> RelconStatus {
    guard(|| {
        require(out_consistent, "out_consistent")?;
        let verdict = chain_consistent(&handle(r1, "r1")?.inner, &handle(r2, "r2")?.inner)?;
        *out_consistent = verdict.is_consistent();
        put_json(out_witness_json, verdict.witness().map(|w| json!(w)));
        Ok(())
    })
}

/// Total preorder consistently extending both relations. Fails with
/// `RELCON_STATUS_INCONSISTENT` when the pair is not chain-consistent.
///
/// # Safety
/// Handles must be null or live; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_common_completion(
    r1: *const RelconRelation,
    r2: *const RelconRelation,
    out: *mut *mut RelconRelation,
) -> RelconStatus {
    guard(|| {
        require(out, "out")?;
        let t = common_completion(&handle(r1, "r1")?.inner, &handle(r2, "r2")?.inner)?;
        *out = boxed(RelconRelation { inner: t });
        Ok(())
    })
}

/// Whether the common completion of a consistent pair is unique.
///
/// # Safety
/// Handles must be null or live; `out_unique` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_completion_unique(
    r1: *const RelconRelation,
    r2: *const RelconRelation,
    out_unique: *mut bool,
) -> RelconStatus {
    guard(|| {
        require(out_unique, "out_unique")?;
        *out_unique = completion_unique(&handle(r1, "r1")?.inner, &handle(r2, "r2")?.inner)?;
        Ok(())
    })
}

/// Builds a cone from a `{"dim": d, "generators": [[..], ..]}` document.
///
/// # Safety
/// `json` must be null or NUL-terminated; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_cone_from_json(json: *const c_char, out: *mut *mut RelconCone) -> RelconStatus {
    guard(|| {
        require(out, "out")?;
        let doc: ConeDoc = parse_document(text(json, "json")?)?;
        *out = boxed(RelconCone { inner: doc.to_cone()? });
        Ok(())
    })
}

/// Builds both cones of a `{"dim", "cone_1", "cone_2"}` document.
///
/// # Safety
/// `json` must be null or NUL-terminated; `out1` and `out2` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_cone_pair_from_json(
    json: *const c_char,
    out1: *mut *mut RelconCone,
    out2: *mut *mut RelconCone,
) -> RelconStatus {
    guard(|| {
        require(out1, "out1")?;
        require(out2, "out2")?;
        let doc: ConePairDoc = parse_document(text(json, "json")?)?;
        let (c1, c2) = doc.to_cones()?;
        *out1 = boxed(RelconCone { inner: c1 });
        *out2 = boxed(RelconCone { inner: c2 });
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a cone from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn relcon_cone_free(c: *mut RelconCone) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Facets, linear part basis and extreme rays of a cone as JSON.
///
/// # Safety
/// `c` must be null or a live cone; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_cone_describe(c: *const RelconCone, out_json: *mut *mut c_char) -> RelconStatus {
    guard(|| {
        require(out_json, "out_json")?;
        let c = &handle(c, "c")?.inner;
        let doc = json!({
            "dim": c.dim(),
            "facets": c.facets(),
            "linear_part_basis": c.linear_part_basis(),
            "extreme_rays": c.extreme_rays(),
            "total": c.is_total(),
        });
        *out_json = c_string(to_json(&doc));
        Ok(())
    })
}

/// Decides path consistency of two cones. When inconsistent and
/// `out_witness_json` is non-null, it receives
/// `{"delta1", "delta2", "strict_side"}`; otherwise it is set to null.
///
/// # Safety
/// Handles must be null or live; `out_consistent` must be null or writable;
/// `out_witness_json` is optional.
#[no_mangle]
pub unsafe extern "C" fn relcon_path_consistent(
    c1: *const RelconCone,
    c2: *const RelconCone,
    out_consistent: *mut bool,
    out_witness_json: *mut *mut c_char,
) -> RelconStatus {
    guard(|| {
        require(out_consistent, "out_consistent")?;
        let verdict = path_consistent(&handle(c1, "c1")?.inner, &handle(c2, "c2")?.inner)?;
        *out_consistent = verdict.is_consistent();
        put_json(out_witness_json, verdict.witness().map(|w| json!(w)));
        Ok(())
    })
}

/// Linear functional, as a JSON array of rational strings, whose halfspace
/// completes both cones. Fails with `RELCON_STATUS_INCONSISTENT` when the
/// cones are not path-consistent.
///
/// # Safety
/// Handles must be null or live; `out_json` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_cone_completion(
    c1: *const RelconCone,
    c2: *const RelconCone,
    out_json: *mut *mut c_char,
) -> RelconStatus {
    guard(|| {
        require(out_json, "out_json")?;
        let f = common_cone_completion(&handle(c1, "c1")?.inner, &handle(c2, "c2")?.inner)?;
        *out_json = c_string(to_json(&f));
        Ok(())
    })
}

/// Looks for a Pareto improvement between two cone preferences. When one
/// exists and `out_json` is non-null, it receives
/// `{"delta", "strict_for_1", "strict_for_2"}`; otherwise it is set to null.
///
/// # Safety
/// Handles must be null or live; `out_found` must be null or writable;
/// `out_json` is optional.
#[no_mangle]
pub unsafe extern "C" fn relcon_pareto_improvement(
    c1: *const RelconCone,
    c2: *const RelconCone,
    out_found: *mut bool,
    out_json: *mut *mut c_char,
) -> RelconStatus {
    guard(|| {
        require(out_found, "out_found")?;
        let imp = pareto_improvement(&handle(c1, "c1")?.inner, &handle(c2, "c2")?.inner)?;
        *out_found = imp.is_some();
        put_json(out_json, imp.map(|i| json!(i)));
        Ok(())
    })
}

/// Builds and validates a market from a
/// `{"goods", "fair_exchange", "down_trades"}` document.
///
/// # Safety
/// `json` must be null or NUL-terminated; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn relcon_market_from_json(json: *const c_char, out: *mut *mut RelconMarket) -> RelconStatus {
    guard(|| {
        require(out, "out")?;
        let doc: MarketDoc = parse_document(text(json, "json")?)?;
        *out = boxed(RelconMarket { inner: doc.to_market()? });
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a market from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn relcon_market_free(m: *mut RelconMarket) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Looks for an arbitrage chain. When one exists and `out_chain_json` is
/// non-null, it receives `{"goods": [..], "links": [..]}`; otherwise it is
/// set to null.
///
/// # Safety
/// `m` must be null or live; `out_found` must be null or writable;
/// `out_chain_json` is optional.
#[no_mangle]
pub unsafe extern "C" fn relcon_market_detect_arbitrage(
    m: *const RelconMarket,
    out_found: *mut bool,
    out_chain_json: *mut *mut c_char,
) -> RelconStatus {
    guard(|| {
        require(out_found, "out_found")?;
        let chain = handle(m, "m")?.inner.detect_arbitrage();
        *out_found = chain.is_some();
        put_json(out_chain_json, chain.map(|c| json!(c)));
        Ok(())
    })
}

/// Total preference order consistent with an arbitrage-free market. Fails
/// with `RELCON_STATUS_INCONSISTENT` when the market admits arbitrage.
///
/// # Safety
/// `m` must be null or live; `out` must be null or writable; `out_unique`
/// is optional.
#[no_mangle]
pub unsafe extern "C" fn relcon_market_complete_preferences(
    m: *const RelconMarket,
    out: *mut *mut RelconRelation,
    out_unique: *mut bool,
) -> RelconStatus {
    guard(|| {
        require(out, "out")?;
        let prefs = handle(m, "m")?.inner.complete_preferences()?;
        put(out_unique, prefs.unique);
        *out = boxed(RelconRelation { inner: prefs.order });
        Ok(())
    })
}
