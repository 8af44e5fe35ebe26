use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use orrkit_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { orr_string_free(s) };
    out
}

fn last_error() -> String {
    let p = orr_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn handles(digits: u32) -> (*mut OrrContext, *mut OrrCatalog) {
    let ctx = orr_context_new(digits);
    assert!(!ctx.is_null());
    let mut cat = ptr::null_mut();
    assert_eq!(unsafe { orr_catalog_builtin(&mut cat) }, OrrStatus::Ok);
    (ctx, cat)
}

#[test]
fn verify_and_prove_through_the_c_interface() {
    let (ctx, cat) = handles(60);
    assert_eq!(unsafe { orr_catalog_len(cat) }, 13);
    let id = CString::new("eq-4").unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { orr_verify(ctx, cat, id.as_ptr(), &mut json) }, OrrStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["entries"][0]["status"], "match");

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { orr_prove(ctx, cat, id.as_ptr(), &mut json) }, OrrStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["verdict"], "proven");
    assert_eq!(v["translation"]["surd_ratio"], "294");
    unsafe {
        orr_catalog_free(cat);
        orr_context_free(ctx);
    }
}

#[test]
fn errors_are_reported_with_messages() {
    let (ctx, cat) = handles(30);
    let id = CString::new("eq-ten").unwrap();
    let mut json = ptr::null_mut();
    let st = unsafe { orr_prove(ctx, cat, id.as_ptr(), &mut json) };
    assert_eq!(st, OrrStatus::Mismatch);
    assert!(last_error().contains("no factorization family"));
    take(json);

    let missing = CString::new("nope").unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { orr_verify(ctx, cat, missing.as_ptr(), &mut json) }, OrrStatus::CatalogError);
    take(json);

    assert_eq!(unsafe { orr_verify(ptr::null(), cat, id.as_ptr(), &mut json) }, OrrStatus::NullPointer);
    let path = CString::new("/nonexistent/catalog.json").unwrap();
    let mut c2 = ptr::null_mut();
    assert_eq!(unsafe { orr_catalog_load(path.as_ptr(), &mut c2) }, OrrStatus::CatalogError);
    assert!(orr_context_new(0).is_null());
    unsafe {
        orr_catalog_free(cat);
        orr_context_free(ctx);
        orr_catalog_free(ptr::null_mut());
        orr_string_free(ptr::null_mut());
    }
}

#[test]
fn numeric_entry_points() {
    let ctx = orr_context_new(50);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { orr_dirichlet_l_minus7(ctx, &mut out) }, OrrStatus::Ok);
    assert!(take(out).starts_with("1.15192547054449104710169239732054996"));

    let (re, im) = (CString::new("1/2").unwrap(), CString::new("0").unwrap());
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { orr_legendre_defect(ctx, re.as_ptr(), im.as_ptr(), &mut out) }, OrrStatus::Ok);
    let d: f64 = take(out).parse().unwrap();
    assert!(d < 1e-45, "{d}");

    let bad = CString::new("x").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { orr_legendre_defect(ctx, bad.as_ptr(), im.as_ptr(), &mut out) }, OrrStatus::InvalidArgument);
    unsafe { orr_context_free(ctx) };
}

#[test]
fn header_is_generated_and_valid_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = format!("{dir}/include/orrkit.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["orr_context_new", "orr_verify", "orr_prove", "orr_last_error_message", "ORR_STATUS_OK", "typedef struct OrrContext OrrContext"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let src = format!("#include \"{header}\"\nint main(void) {{ return ORR_STATUS_OK; }}\n");
    let tmp = std::env::temp_dir().join(format!("orrkit_header_{}.c", std::process::id()));
    std::fs::write(&tmp, src).unwrap();
    match std::process::Command::new("cc").arg("-fsyntax-only").arg(&tmp).status() {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler; syntax check skipped"),
    }
    let _ = std::fs::remove_file(tmp);
}
