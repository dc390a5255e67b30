//! C ABI over `fmb-core`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free`. Every fallible call returns an [`FmbStatus`]; on
//! failure the thread-local last error holds a message, readable through
//! [`fmb_last_error_message`]. Strings returned through `char **` are owned
//! by the caller and released with [`fmb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use fmb_core::ffield::Field;
use fmb_core::fmb::{self, BasisFile};
use fmb_core::modalg::Structure;
use fmb_core::obstruct::search::{self, SearchOutcome};
use fmb_core::obstruct::{self, CertificateVerdict, ObstructionReport, Rules};
use fmb_core::pgroup::catalog;
use fmb_core::Error;

/// Result of every fallible call. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnsupportedField = 4,
    UnknownGroup = 5,
    InvalidPresentation = 6,
    OrderMismatch = 7,
    ParameterOutOfRange = 8,
    AlgebraMismatch = 9,
    NotApplicable = 10,
    BudgetExceeded = 11,
    MalformedInput = 12,
    Internal = 13,
    Panic = 14,
}

/// Nonexistence certificate verdict.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmbVerdict {
    Obstructed = 0,
    Inconclusive = 1,
}

/// Full search outcome.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmbSearchOutcome {
    Found = 0,
    Exhausted = 1,
    BudgetExhausted = 2,
}

/// Obstruction rule set, passed as `uint32_t`.
pub const FMB_RULES_SPAN: u32 = 0;
pub const FMB_RULES_INDEPENDENCE: u32 = 1;

/// Group algebra `K G` with its Jennings filtration.
pub struct FmbStructure(Arc<Structure>);

/// Obstruction report for one (group, field, degree, rules).
pub struct FmbCertificate(ObstructionReport);

struct LastError {
    status: FmbStatus,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn status_of(e: &Error) -> FmbStatus {
    match e {
        Error::NotPrime(_) | Error::UnsupportedField(_) => FmbStatus::UnsupportedField,
        Error::UnknownGroup(_) | Error::UnknownGenerator(_) => FmbStatus::UnknownGroup,
        Error::InvalidPresentation(_) | Error::EnumerationBudget(_) => FmbStatus::InvalidPresentation,
        Error::OrderMismatch { .. } => FmbStatus::OrderMismatch,
        Error::ParameterOutOfRange(_) => FmbStatus::ParameterOutOfRange,
        Error::AlgebraMismatch => FmbStatus::AlgebraMismatch,
        Error::NotApplicable(_) | Error::MuUnsuitable(_) | Error::EngineInapplicable(_) => FmbStatus::NotApplicable,
        Error::BudgetExceeded(_) => FmbStatus::BudgetExceeded,
        Error::Malformed(_) | Error::Json(_) | Error::WrongCardinality { .. } => FmbStatus::MalformedInput,
        _ => FmbStatus::Internal,
    }
}

struct Failure(FmbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), format!("{}: {e}", e.code()))
    }
}

fn set_error(status: FmbStatus, message: String) -> FmbStatus {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(LastError { status, message }));
    status
}

/// Runs `f`, converting errors and panics into a status and last error.
/// Success leaves the last error untouched.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FmbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FmbStatus::Ok,
        Ok(Err(Failure(status, message))) => set_error(status, message),
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(FmbStatus::Panic, format!("panic: {what}"))
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FmbStatus::NullPointer, format!("null pointer: {what}"))
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(FmbStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure(FmbStatus::Internal, "string contains NUL".into()))
}

/// # Safety
/// `h` is null or a live handle from this library.
unsafe fn structure<'a>(h: *const FmbStructure) -> Result<&'a Arc<Structure>, Failure> {
    h.as_ref().map(|s| &s.0).ok_or_else(|| null("structure"))
}

/// # Safety
/// `h` is null or a live handle from this library.
unsafe fn certificate<'a>(h: *const FmbCertificate) -> Result<&'a ObstructionReport, Failure> {
    h.as_ref().map(|c| &c.0).ok_or_else(|| null("certificate"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fmb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Status of the most recent failure on this thread, or `FMB_STATUS_OK`.
#[no_mangle]
pub extern "C" fn fmb_last_error_code() -> FmbStatus {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(FmbStatus::Ok, |e| e.status))
}

/// Message of the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fmb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// Clears the last error of this thread.
#[no_mangle]
pub extern "C" fn fmb_clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fmb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Realizes the catalog group `group` (for example `"G5(m=4)"` or
/// `"D8xC2"`) and builds its group algebra over GF(`p`^`k`).
///
/// # Safety
/// `group` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_structure_new(group: *const c_char, p: u32, k: u32, out: *mut *mut FmbStructure) -> FmbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = read_str(group, "group")?;
        let g = catalog::group(spec, &catalog::Params::new())?;
        let s = Structure::for_group(Arc::new(g), Field::new(p, k)?)?;
        write(out, Box::into_raw(Box::new(FmbStructure(s))), "out")
    })
}

/// Releases a structure. Null is ignored.
///
/// # Safety
/// `h` is null or a live handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fmb_structure_free(h: *mut FmbStructure) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Group order, equal to the algebra dimension.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_structure_order(h: *const FmbStructure, out: *mut usize) -> FmbStatus {
    guard(|| write(out, structure(h)?.group().order(), "out"))
}

/// Nilpotency index of the augmentation ideal: the least `t` with `I^t = 0`.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_structure_nilpotency(h: *const FmbStructure, out: *mut usize) -> FmbStatus {
    guard(|| write(out, structure(h)?.nilpotency_index(), "out"))
}

/// Human-readable group label; free with [`fmb_string_free`].
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_structure_label(h: *const FmbStructure, out: *mut *mut c_char) -> FmbStatus {
    guard(|| {
        let label = to_c_string(structure(h)?.group().label())?;
        write(out, label, "out").inspect_err(|_| fmb_string_free(label))
    })
}

/// Verifies a basis file (JSON text) against the structure. `pass` is set
/// to the overall verdict; a malformed or mismatched file is an error.
///
/// # Safety
/// `h` is a live handle; `basis_json` is a NUL-terminated string; `pass` is
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_verify_json(h: *const FmbStructure, basis_json: *const c_char, pass: *mut bool) -> FmbStatus {
    guard(|| {
        let s = structure(h)?;
        let text = read_str(basis_json, "basis_json")?;
        let b = BasisFile::from_json(text)?.to_candidate(s)?;
        write(pass, fmb::verify(s, &b)?.pass, "pass")
    })
}

/// Runs the obstruction engine at `degree` (2 or 3) with `rules`
/// (`FMB_RULES_SPAN` or `FMB_RULES_INDEPENDENCE`).
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_certify(h: *const FmbStructure, degree: u32, rules: u32, out: *mut *mut FmbCertificate) -> FmbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let rules = match rules {
            FMB_RULES_SPAN => Rules::Span,
            FMB_RULES_INDEPENDENCE => Rules::Independence,
            r => return Err(Failure(FmbStatus::InvalidArgument, format!("unknown rule set {r}"))),
        };
        let report = obstruct::certify(structure(h)?, degree as usize, rules)?;
        write(out, Box::into_raw(Box::new(FmbCertificate(report))), "out")
    })
}

/// Releases a certificate. Null is ignored.
///
/// # Safety
/// `h` is null or a live handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fmb_certificate_free(h: *mut FmbCertificate) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_certificate_verdict(h: *const FmbCertificate, out: *mut FmbVerdict) -> FmbStatus {
    guard(|| {
        let v = match certificate(h)?.verdict {
            CertificateVerdict::Obstructed => FmbVerdict::Obstructed,
            CertificateVerdict::Inconclusive => FmbVerdict::Inconclusive,
        };
        write(out, v, "out")
    })
}

/// Number of invertible leading matrices examined.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_certificate_matrices_examined(h: *const FmbCertificate, out: *mut u64) -> FmbStatus {
    guard(|| write(out, certificate(h)?.matrices_examined, "out"))
}

/// Number of leading matrices that pass every condition.
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_certificate_survivors(h: *const FmbCertificate, out: *mut usize) -> FmbStatus {
    guard(|| write(out, certificate(h)?.survivors.len(), "out"))
}

/// Full report as JSON; free with [`fmb_string_free`].
///
/// # Safety
/// `h` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_certificate_to_json(h: *const FmbCertificate, out: *mut *mut c_char) -> FmbStatus {
    guard(|| {
        let text = serde_json::to_string(certificate(h)?).map_err(Error::from)?;
        let text = to_c_string(text)?;
        write(out, text, "out").inspect_err(|_| fmb_string_free(text))
    })
}

/// Exhaustive search for a basis within `budget` nodes. On `Found`,
/// `basis_json` (if non-null) receives the basis file; otherwise it is set
/// to null.
///
/// # Safety
/// `h` is a live handle; `outcome` is valid for writes; `basis_json` is
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fmb_search(
    h: *const FmbStructure,
    budget: u64,
    outcome: *mut FmbSearchOutcome,
    basis_json: *mut *mut c_char,
) -> FmbStatus {
    guard(|| {
        if outcome.is_null() {
            return Err(null("outcome"));
        }
        let s = structure(h)?;
        let r = search::full_search(s, budget)?;
        let text = match (&r.basis, basis_json.is_null()) {
            (Some(b), false) => to_c_string(BasisFile::from_candidate(s, b).to_json()?)?,
            _ => ptr::null_mut(),
        };
        if !basis_json.is_null() {
            basis_json.write(text);
        }
        outcome.write(match r.report.outcome {
            SearchOutcome::Found => FmbSearchOutcome::Found,
            SearchOutcome::Exhausted => FmbSearchOutcome::Exhausted,
            SearchOutcome::BudgetExhausted => FmbSearchOutcome::BudgetExhausted,
        });
        Ok(())
    })
}
