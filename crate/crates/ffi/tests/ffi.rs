use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use nilalg_ffi::*;

const SPEC: &str = r#"{"f": ["2"], "g": ["1"], "slots": [{"words": ["xxxx"]}]}"#;

fn build(spec: &str, p: u64, k: u32) -> (NilalgStatus, *mut NilalgTower) {
    let spec = CString::new(spec).unwrap();
    let mut t = ptr::null_mut();
    let s = unsafe { nilalg_tower_build(spec.as_ptr(), p, k, &mut t) };
    (s, t)
}

fn last_error() -> String {
    let p = nilalg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn tower_queries() {
    let (s, t) = build(SPEC, 2, 5);
    assert_eq!(s, NilalgStatus::Ok);
    assert!(nilalg_last_error().is_null());
    unsafe {
        let mut k = 0;
        assert_eq!(nilalg_tower_max_level(t, &mut k), NilalgStatus::Ok);
        assert_eq!(k, 5);
        let mut d = 0;
        assert_eq!(nilalg_tower_level_dim(t, 0, &mut d), NilalgStatus::Ok);
        assert_eq!(d, 2);
        assert_eq!(nilalg_quotient_dim(t, 1, &mut d), NilalgStatus::Ok);
        assert_eq!(d, 2);
        assert_eq!(nilalg_quotient_dim(t, 100, &mut d), NilalgStatus::Unavailable);
        let x = CString::new("x").unwrap();
        let mut yes = false;
        assert_eq!(nilalg_nil_check(t, x.as_ptr(), 8, &mut yes), NilalgStatus::Ok);
        assert!(yes);
        assert_eq!(nilalg_nil_check(t, x.as_ptr(), 1, &mut yes), NilalgStatus::Ok);
        assert!(!yes);
        let x8 = CString::new("xxxxxxxx").unwrap();
        assert_eq!(nilalg_ideal_contains(t, x8.as_ptr(), &mut yes), NilalgStatus::Ok);
        assert!(yes);
        let alpha = CString::new("log2log2").unwrap();
        let mut csv = ptr::null_mut();
        assert_eq!(nilalg_hilbert_csv(t, 3, 3, alpha.as_ptr(), &mut csv), NilalgStatus::Ok);
        let text = CStr::from_ptr(csv).to_str().unwrap().to_string();
        nilalg_string_free(csv);
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("\n0,1,1,1,1\n"));
        nilalg_tower_free(t);
    }
}

#[test]
fn errors_map_to_status_codes() {
    assert_eq!(build("{", 2, 3).0, NilalgStatus::Parse);
    assert!(!last_error().is_empty());
    assert_eq!(build(SPEC, 4, 3).0, NilalgStatus::InvalidParams);
    assert!(last_error().contains("prime"));
    assert_eq!(build(r#"{"f": ["2"], "g": ["1"], "slots": [{"recipe": "x"}]}"#, 2, 3).0, NilalgStatus::InvalidParams);
    let (s, t) = build(SPEC, 2, 3);
    assert_eq!(s, NilalgStatus::Ok);
    unsafe {
        let mut d = 0;
        assert_eq!(nilalg_tower_level_dim(t, 9, &mut d), NilalgStatus::Depth);
        let bad = CString::new("x + xy").unwrap();
        let mut yes = false;
        assert_eq!(nilalg_nil_check(t, bad.as_ptr(), 2, &mut yes), NilalgStatus::Parse);
        let x = CString::new("x").unwrap();
        assert_eq!(nilalg_nil_check(t, x.as_ptr(), 200, &mut yes), NilalgStatus::Capacity);
        assert_eq!(nilalg_nil_check(t, ptr::null(), 2, &mut yes), NilalgStatus::NullOrInvalidArgument);
        assert_eq!(nilalg_tower_max_level(ptr::null(), ptr::null_mut()), NilalgStatus::NullOrInvalidArgument);
        nilalg_tower_free(t);
        nilalg_tower_free(ptr::null_mut());
        nilalg_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(nilalg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn c_program_links_against_static_library() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libnilalg_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = tempfile::tempdir().unwrap();
    let exe = out.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
