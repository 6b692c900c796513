//! C ABI over codekit.
//!
//! Objects cross the boundary as opaque `CkBundle` handles owned by the caller
//! and released with `ck_bundle_free`. Every fallible call returns a
//! `CkStatus`; the message of the most recent failure on the calling thread is
//! available from `ck_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use codekit::alphred::{diamond, gamma_exponent, DiamondInput};
use codekit::bundle::{Bundle, Object};
use codekit::certificate::{Certificate, ClaimKind, VerifyMode, DEFAULT_DET_LIMIT};
use codekit::gf::Field;
use codekit::multfriendly::{lift_classical, mf_rs, verify_mf};
use codekit::transversal::{rs_transversal, verify_ccz};
use codekit::Error;
use serde_json::json;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    /// The check ran and the property does not hold.
    VerifyFailed = 1,
    /// A parameter inequality of the construction is violated.
    Constraint = 2,
    /// Null pointer, invalid UTF-8 or wrong object kind.
    InvalidArgument = 3,
    Io = 4,
    /// Malformed or inconsistent bundle.
    Bundle = 5,
    /// Deterministic check over its size limit.
    Infeasible = 6,
    /// Enumeration budget exceeded.
    Budget = 7,
    Internal = 8,
}

/// Opaque handle to a code bundle.
pub struct CkBundle(Bundle);

/// Parameters of a transversal triple.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CkParams {
    pub q: u64,
    pub n: u64,
    pub k: u64,
    /// 0 when no distance is recorded.
    pub d: u64,
    /// Nonzero when `d` is a certified lower bound rather than exact.
    pub d_is_bound: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CkStatus {
    match e {
        Error::Constraint(_) => CkStatus::Constraint,
        Error::Io(_) => CkStatus::Io,
        Error::Bundle(_) | Error::Json(_) => CkStatus::Bundle,
        Error::Infeasible { .. } => CkStatus::Infeasible,
        Error::BudgetExceeded { .. } => CkStatus::Budget,
        Error::Level { source, .. } => status_of(source),
        _ => CkStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<CkStatus, (CkStatus, String)>) -> CkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            CkStatus::Internal
        }
    }
}

trait OrStatus<T> {
    fn st(self) -> Result<T, (CkStatus, String)>;
}

impl<T> OrStatus<T> for codekit::Result<T> {
    fn st(self) -> Result<T, (CkStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn bad(msg: &str) -> (CkStatus, String) {
    (CkStatus::InvalidArgument, msg.into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (CkStatus, String)> {
    if p.is_null() {
        return Err(bad("null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| bad("string is not UTF-8"))
}

unsafe fn handle<'a>(b: *const CkBundle) -> Result<&'a Bundle, (CkStatus, String)> {
    b.as_ref().map(|h| &h.0).ok_or_else(|| bad("null bundle"))
}

unsafe fn store(out: *mut *mut CkBundle, b: Bundle) -> Result<CkStatus, (CkStatus, String)> {
    if out.is_null() {
        return Err(bad("null output pointer"));
    }
    *out = Box::into_raw(Box::new(CkBundle(b)));
    Ok(CkStatus::Ok)
}

fn field(q: u64) -> Result<Field, (CkStatus, String)> {
    Field::with_order(q).st()
}

fn verdict(c: &Certificate) -> Result<CkStatus, (CkStatus, String)> {
    if c.passed {
        Ok(CkStatus::Ok)
    } else {
        Err((
            CkStatus::VerifyFailed,
            c.failure.clone().unwrap_or_else(|| c.summary()),
        ))
    }
}

fn mode(randomized: i32, samples: u64, seed: u64) -> VerifyMode {
    if randomized != 0 {
        VerifyMode::randomized(samples, seed)
    } else {
        VerifyMode::Deterministic {
            limit: DEFAULT_DET_LIMIT,
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ck_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread. Valid until the next call that fails.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a bundle. Null is ignored.
///
/// # Safety
/// `b` must be null or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_bundle_free(b: *mut CkBundle) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Releases a string returned by `ck_bundle_to_json`. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads and revalidates a bundle file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_bundle_load(path: *const c_char, out: *mut *mut CkBundle) -> CkStatus {
    guard(|| {
        let p = str_arg(path)?;
        store(out, Bundle::load(Path::new(p)).st()?)
    })
}

/// Parses and revalidates a bundle from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_bundle_from_json(
    json: *const c_char,
    out: *mut *mut CkBundle,
) -> CkStatus {
    guard(|| {
        let s = str_arg(json)?;
        store(out, Bundle::from_json(s).st()?)
    })
}

/// # Safety
/// `b` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ck_bundle_save(b: *const CkBundle, path: *const c_char) -> CkStatus {
    guard(|| {
        let b = handle(b)?;
        let p = str_arg(path)?;
        b.save(Path::new(p)).st()?;
        Ok(CkStatus::Ok)
    })
}

/// Canonical JSON of a bundle; free the result with `ck_string_free`.
///
/// # Safety
/// `b` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_bundle_to_json(b: *const CkBundle, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let b = handle(b)?;
        if out.is_null() {
            return Err(bad("null output pointer"));
        }
        let s = CString::new(b.to_json().st()?).map_err(|_| bad("interior NUL"))?;
        *out = s.into_raw();
        Ok(CkStatus::Ok)
    })
}

/// Reed-Solomon transversal triple `[[q−k, k, ℓ+1−k]]_q`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_build_rs(q: u64, k: usize, l: usize, out: *mut *mut CkBundle) -> CkStatus {
    guard(|| {
        let t = rs_transversal(&field(q)?, k, l).st()?;
        let prov = json!({"construction": "rs_transversal", "q": q, "k": k, "l": l});
        store(out, Bundle::new(Object::TransversalTriple(t), prov))
    })
}

/// Reed-Solomon multiplication-friendly collection, lifted to CSS members when `lift` is nonzero.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_build_mf_rs(
    q: u64,
    n: usize,
    k: usize,
    m: usize,
    lift: i32,
    out: *mut *mut CkBundle,
) -> CkStatus {
    guard(|| {
        let mut mf = mf_rs(&field(q)?, n, k, m).st()?;
        if lift != 0 {
            mf = lift_classical(&mf).st()?;
        }
        let prov = json!({
            "construction": "mf_rs",
            "q": q,
            "n": n,
            "k": k,
            "m": m,
            "lift": lift != 0,
        });
        store(out, Bundle::new(Object::MfCollection(mf), prov))
    })
}

/// Alphabet reduction of the triple in `triple` by the 4-MF collection in `mf`.
///
/// # Safety
/// `mf` and `triple` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_build_diamond(
    mf: *const CkBundle,
    triple: *const CkBundle,
    r: usize,
    out: *mut *mut CkBundle,
) -> CkStatus {
    guard(|| {
        let mb = handle(mf)?;
        let tb = handle(triple)?;
        let Object::MfCollection(m) = &mb.object else {
            return Err(bad("expected an mf_collection bundle"));
        };
        let t = tb.object.triple().ok_or_else(|| bad("expected a transversal triple"))?;
        let input = DiamondInput {
            mf: m.clone(),
            triple: t.clone(),
            r,
        };
        let out_t = diamond(&input).st()?;
        let prov = json!({
            "construction": "diamond",
            "r": r,
            "mf": mb.provenance,
            "triple": tb.provenance,
        });
        store(out, Bundle::new(Object::TransversalTriple(out_t), prov))
    })
}

/// Parameters of the triple held by `b`.
///
/// # Safety
/// `b` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_bundle_params(b: *const CkBundle, out: *mut CkParams) -> CkStatus {
    guard(|| {
        let t = handle(b)?
            .object
            .triple()
            .ok_or_else(|| bad("expected a transversal triple"))?;
        let out = out.as_mut().ok_or_else(|| bad("null output pointer"))?;
        *out = CkParams {
            q: t.field().order(),
            n: t.n() as u64,
            k: t.k() as u64,
            d: t.distance().map_or(0, |c| c.value),
            d_is_bound: t.distance().map_or(0, |c| (c.kind == ClaimKind::Bound) as i32),
        };
        Ok(CkStatus::Ok)
    })
}

/// Transversal CCZ check. Returns `Ok` on pass and `VerifyFailed` on failure.
/// `randomized = 0` selects the deterministic check.
///
/// # Safety
/// `b` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_verify_ccz(
    b: *const CkBundle,
    randomized: i32,
    samples: u64,
    seed: u64,
) -> CkStatus {
    guard(|| {
        let t = handle(b)?
            .object
            .triple()
            .ok_or_else(|| bad("expected a transversal triple"))?;
        verdict(&verify_ccz(t, mode(randomized, samples, seed)).st()?)
    })
}

/// Multiplication-friendly check, with the same conventions as `ck_verify_ccz`.
///
/// # Safety
/// `b` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_verify_mf(
    b: *const CkBundle,
    randomized: i32,
    samples: u64,
    seed: u64,
) -> CkStatus {
    guard(|| {
        let Object::MfCollection(m) = &handle(b)?.object else {
            return Err(bad("expected an mf_collection bundle"));
        };
        verdict(&verify_mf(m, mode(randomized, samples, seed)).st()?)
    })
}

/// `log(n/k) / log(d)`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_gamma_exponent(n: u64, k: u64, d: u64, out: *mut f64) -> CkStatus {
    guard(|| {
        let g = gamma_exponent(n, k, d).st()?;
        *out.as_mut().ok_or_else(|| bad("null output pointer"))? = g;
        Ok(CkStatus::Ok)
    })
}
