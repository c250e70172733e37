//! C ABI over the nilalg engine.
//!
//! Every function returns a [`NilalgStatus`]. On failure the message is
//! kept per thread and read with [`nilalg_last_error`]. Towers are opaque
//! handles released with [`nilalg_tower_free`]; strings returned by the
//! library are released with [`nilalg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilalg::growth::{hilbert_csv, hilbert_rows, ideal_contains, nil_check, quotient_dim};
use nilalg::tower::TowerSpec;
use nilalg::{AlphaSpec, Error, FieldSpec, FreeVector, ProjectionTower};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilalgStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    NullOrInvalidArgument = 1,
    /// Text input did not parse.
    Parse = 2,
    /// Parameters were rejected.
    InvalidParams = 3,
    /// A computation exceeded a degree or word-length limit.
    Capacity = 4,
    /// The tower is too shallow for the request.
    Depth = 5,
    /// No exact value is available at this size.
    Unavailable = 6,
    Internal = 7,
    /// A panic was caught at the boundary.
    Panic = 8,
}

/// Opaque tower handle.
pub struct NilalgTower {
    tower: ProjectionTower,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> NilalgStatus {
    match e {
        Error::Parse(_) => NilalgStatus::Parse,
        Error::Capacity { .. } | Error::WordTooLong(_) => NilalgStatus::Capacity,
        Error::Depth { .. } => NilalgStatus::Depth,
        Error::Internal(_) => NilalgStatus::Internal,
        _ => NilalgStatus::InvalidParams,
    }
}

struct Fail(NilalgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NilalgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NilalgStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside nilalg");
            NilalgStatus::Panic
        }
    }
}

fn invalid(what: &str) -> Fail {
    Fail(NilalgStatus::NullOrInvalidArgument, what.to_string())
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(t: *const NilalgTower) -> Result<&'a NilalgTower, Fail> {
    t.as_ref().ok_or_else(|| invalid("tower is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| invalid("output pointer is null"))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn nilalg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn nilalg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a tower from a JSON tower description
/// (`{"f": ["2"], "g": ["1"], "slots": [{"words": ["xxxx"]}]}`) over GF(p)
/// up to `max_level`.
///
/// # Safety
/// `spec_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilalg_tower_build(spec_json: *const c_char, p: u64, max_level: u32, out: *mut *mut NilalgTower) -> NilalgStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let json = text(spec_json, "spec_json")?;
        let spec: TowerSpec = serde_json::from_str(json).map_err(|e| Fail(NilalgStatus::Parse, e.to_string()))?;
        let field = FieldSpec::new(p)?;
        let tower = ProjectionTower::build(&spec.to_params(max_level, field)?)?;
        *out = Box::into_raw(Box::new(NilalgTower { tower }));
        Ok(())
    })
}

/// Releases a tower. Null is ignored.
///
/// # Safety
/// `tower` must come from [`nilalg_tower_build`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nilalg_tower_free(tower: *mut NilalgTower) {
    if !tower.is_null() {
        drop(Box::from_raw(tower));
    }
}

/// Highest level of the tower.
///
/// # Safety
/// `tower` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilalg_tower_max_level(tower: *const NilalgTower, out: *mut u32) -> NilalgStatus {
    guard(|| {
        *out_ref(out)? = handle(tower)?.tower.max_level();
        Ok(())
    })
}

/// Dimension of the level-`level` quotient.
///
/// # Safety
/// `tower` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilalg_tower_level_dim(tower: *const NilalgTower, level: u32, out: *mut usize) -> NilalgStatus {
    guard(|| {
        let t = &handle(tower)?.tower;
        *out_ref(out)? = t.level(level)?.dim();
        Ok(())
    })
}

/// Whether the homogeneous element `element` (e.g. `"x + 2*y"`) lies in the
/// ideal.
///
/// # Safety
/// `tower` must be a live handle, `element` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilalg_ideal_contains(tower: *const NilalgTower, element: *const c_char, out: *mut bool) -> NilalgStatus {
    guard(|| {
        let t = &handle(tower)?.tower;
        let v = FreeVector::parse(text(element, "element")?, t.field(), None)?;
        *out_ref(out)? = ideal_contains(t, &v)?;
        Ok(())
    })
}

/// Whether `element^exponent` lies in the ideal.
///
/// # Safety
/// `tower` must be a live handle, `element` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilalg_nil_check(
    tower: *const NilalgTower,
    element: *const c_char,
    exponent: u32,
    out: *mut bool,
) -> NilalgStatus {
    guard(|| {
        let t = &handle(tower)?.tower;
        let v = FreeVector::parse(text(element, "element")?, t.field(), None)?;
        *out_ref(out)? = nil_check(t, &v, exponent)?.nil;
        Ok(())
    })
}

/// Exact dimension of the degree-`n` quotient by the ideal, or
/// `Unavailable` when `n` is beyond exact reach.
///
/// # Safety
/// `tower` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilalg_quotient_dim(tower: *const NilalgTower, n: u32, out: *mut usize) -> NilalgStatus {
    guard(|| {
        let t = &handle(tower)?.tower;
        let d = quotient_dim(t, n)?.ok_or_else(|| Fail(NilalgStatus::Unavailable, format!("no exact dimension at degree {n}")))?;
        *out_ref(out)? = d;
        Ok(())
    })
}

/// Hilbert series CSV for degrees `0..=n_max`. `alpha` is one of
/// `log2log2`, `log2`, `sqrt-log`, `table:...`. The string is released with
/// [`nilalg_string_free`].
///
/// # Safety
/// `tower` must be a live handle, `alpha` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilalg_hilbert_csv(
    tower: *const NilalgTower,
    n_max: u32,
    exact_max: u32,
    alpha: *const c_char,
    out: *mut *mut c_char,
) -> NilalgStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let t = &handle(tower)?.tower;
        let alpha: AlphaSpec = text(alpha, "alpha")?.parse()?;
        let csv = hilbert_csv(&hilbert_rows(t, n_max, exact_max, &alpha)?);
        *out = CString::new(csv).map_err(|e| Fail(NilalgStatus::Internal, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nilalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
