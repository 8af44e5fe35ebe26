//! C interface to orrkit. Handles are opaque; every fallible call returns an
//! `OrrStatus` and records a message for `orr_last_error_message`. Strings
//! handed out by the library are released with `orr_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use orrkit::catalog::Catalog;
use orrkit::cli;
use orrkit::elliptic::legendre_defect;
use orrkit::hyperseries::dirichlet_l;
use orrkit::numeric::{BigComplex, BigFloat, PrecisionContext};
use orrkit::rational::parse_rational;
use orrkit::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CatalogError = 3,
    Mismatch = 4,
    PrecisionExhausted = 5,
    ComputationError = 6,
    Panic = 7,
}

/// Precision settings shared by the calls that take it.
pub struct OrrContext {
    ctx: PrecisionContext,
}

pub struct OrrCatalog {
    catalog: Catalog,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> OrrStatus {
    match err {
        Error::PrecisionExhausted(_) => OrrStatus::PrecisionExhausted,
        Error::Catalog(_) | Error::Io(_) | Error::Json(_) => OrrStatus::CatalogError,
        Error::Parse(_) => OrrStatus::InvalidArgument,
        _ => OrrStatus::ComputationError,
    }
}

fn guarded<F: FnOnce() -> Result<(), (OrrStatus, String)>>(f: F) -> OrrStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrrStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OrrStatus::Panic
        }
    }
}

fn fail(err: Error) -> (OrrStatus, String) {
    (status_of(&err), err.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (OrrStatus, String)> {
    if p.is_null() {
        return Err((OrrStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (OrrStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (OrrStatus, String)> {
    if out.is_null() {
        return Err((OrrStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| (OrrStatus::ComputationError, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// New context with `target_digits` and the default guard digits; NULL if
/// `target_digits` is 0.
#[no_mangle]
pub extern "C" fn orr_context_new(target_digits: u32) -> *mut OrrContext {
    if target_digits == 0 {
        set_error("target_digits must be positive");
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(OrrContext {
        ctx: PrecisionContext::new(target_digits),
    }))
}

/// # Safety
/// `ctx` must come from `orr_context_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn orr_context_free(ctx: *mut OrrContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orr_catalog_builtin(out: *mut *mut OrrCatalog) -> OrrStatus {
    guarded(|| {
        if out.is_null() {
            return Err((OrrStatus::NullPointer, "output pointer is null".into()));
        }
        *out = Box::into_raw(Box::new(OrrCatalog {
            catalog: Catalog::builtin(),
        }));
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orr_catalog_load(path: *const c_char, out: *mut *mut OrrCatalog) -> OrrStatus {
    guarded(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err((OrrStatus::NullPointer, "output pointer is null".into()));
        }
        let catalog = Catalog::load(Path::new(path)).map_err(fail)?;
        *out = Box::into_raw(Box::new(OrrCatalog { catalog }));
        Ok(())
    })
}

/// # Safety
/// `cat` must come from a catalog constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn orr_catalog_free(cat: *mut OrrCatalog) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Number of entries; 0 for NULL.
///
/// # Safety
/// `cat` must be NULL or a live catalog handle.
#[no_mangle]
pub unsafe extern "C" fn orr_catalog_len(cat: *const OrrCatalog) -> usize {
    cat.as_ref().map_or(0, |c| c.catalog.entries.len())
}

unsafe fn handles<'a>(
    ctx: *const OrrContext,
    cat: *const OrrCatalog,
) -> Result<(&'a OrrContext, &'a OrrCatalog), (OrrStatus, String)> {
    match (ctx.as_ref(), cat.as_ref()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err((OrrStatus::NullPointer, "null handle".into())),
    }
}

fn outcome_status(code: i32) -> OrrStatus {
    match code {
        cli::EXIT_OK => OrrStatus::Ok,
        cli::EXIT_PRECISION => OrrStatus::PrecisionExhausted,
        cli::EXIT_USAGE => OrrStatus::CatalogError,
        _ => OrrStatus::Mismatch,
    }
}

unsafe fn report(out: *mut *mut c_char, o: cli::Outcome) -> Result<(), (OrrStatus, String)> {
    let json = serde_json::to_string(&o.report).expect("report serializes");
    put_string(out, json)?;
    match outcome_status(o.code) {
        OrrStatus::Ok => Ok(()),
        s => Err((s, o.summary)),
    }
}

/// Verify one entry at the context's target. The JSON report is written to
/// `json_out` whenever the computation ran, including on a mismatch.
///
/// # Safety
/// Handles must be live, `id` NUL-terminated, `json_out` valid.
#[no_mangle]
pub unsafe extern "C" fn orr_verify(
    ctx: *const OrrContext,
    cat: *const OrrCatalog,
    id: *const c_char,
    json_out: *mut *mut c_char,
) -> OrrStatus {
    guarded(|| {
        let (ctx, cat) = handles(ctx, cat)?;
        let id = str_arg(id, "id")?.to_owned();
        report(json_out, cli::cmd_verify(&cat.catalog, &[id], ctx.ctx.target_digits()))
    })
}

/// Prove one entry by translation or equivalence; report as for `orr_verify`.
///
/// # Safety
/// As `orr_verify`.
#[no_mangle]
pub unsafe extern "C" fn orr_prove(
    ctx: *const OrrContext,
    cat: *const OrrCatalog,
    id: *const c_char,
    json_out: *mut *mut c_char,
) -> OrrStatus {
    guarded(|| {
        let (ctx, cat) = handles(ctx, cat)?;
        let id = str_arg(id, "id")?;
        report(json_out, cli::cmd_prove(&cat.catalog, id, ctx.ctx.target_digits()))
    })
}

/// K(r)E(1-r) + E(r)K(1-r) - K(r)K(1-r) - pi/2 at r = re + i im, where re
/// and im are exact rationals such as "1/2". Writes |defect| as a decimal
/// string.
///
/// # Safety
/// Strings NUL-terminated, `abs_out` valid.
#[no_mangle]
pub unsafe extern "C" fn orr_legendre_defect(
    ctx: *const OrrContext,
    re: *const c_char,
    im: *const c_char,
    abs_out: *mut *mut c_char,
) -> OrrStatus {
    guarded(|| {
        let ctx = &ctx
            .as_ref()
            .ok_or((OrrStatus::NullPointer, "null context".to_string()))?
            .ctx;
        let p = ctx.working_bits();
        let part = |s: *const c_char, name: &str| -> Result<BigFloat, (OrrStatus, String)> {
            let r = parse_rational(str_arg(s, name)?).map_err(fail)?;
            Ok(BigFloat::from_ratio(r.numer(), r.denom(), p))
        };
        let r0 = BigComplex::new(part(re, "re")?, part(im, "im")?);
        let d = legendre_defect(&r0, ctx).map_err(fail)?;
        put_string(abs_out, d.abs().to_decimal(20))
    })
}

/// L_{-7}(2) to the context's target digits, as a decimal string.
///
/// # Safety
/// `ctx` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn orr_dirichlet_l_minus7(ctx: *const OrrContext, out: *mut *mut c_char) -> OrrStatus {
    guarded(|| {
        let ctx = &ctx
            .as_ref()
            .ok_or((OrrStatus::NullPointer, "null context".to_string()))?
            .ctx;
        let v = dirichlet_l(-7, 2, ctx).map_err(fail)?;
        put_string(out, v.to_decimal(ctx.target_digits() as usize))
    })
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn orr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn orr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
