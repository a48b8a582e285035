use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use m0n_ffi::*;

fn last_error() -> String {
    let p = m0n_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { m0n_string_free(p) };
    s
}

#[test]
fn rep_table_round_trip() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { m0n_rep_table_new(6, 4, &mut t) }, M0nStatus::Ok);
    // P_{5,1} = s_(4,1)
    let mut m = -1i64;
    let parts = [4u32, 1];
    assert_eq!(unsafe { m0n_rep_table_mult(t, M0nSeries::P, parts.as_ptr(), 2, 1, &mut m) }, M0nStatus::Ok);
    assert_eq!(m, 1);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { m0n_rep_table_json(t, M0nSeries::Q, 4, &mut json) }, M0nStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["basis"], "H");
    assert!(!v["terms"].as_array().unwrap().is_empty());

    assert_eq!(unsafe { m0n_rep_table_json(t, M0nSeries::Q, 7, &mut json) }, M0nStatus::OutOfRange);
    assert!(last_error().contains("exceeds"));
    let bad = [1u32, 4];
    assert_eq!(unsafe { m0n_rep_table_mult(t, M0nSeries::P, bad.as_ptr(), 2, 1, &mut m) }, M0nStatus::InvalidArgument);
    unsafe { m0n_rep_table_free(t) };
    unsafe { m0n_rep_table_free(ptr::null_mut()) };
}

#[test]
fn inv_series_and_log_concavity() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { m0n_inv_series_new(7, 5, &mut s) }, M0nStatus::Ok);
    let mut c = ptr::null_mut();
    for (k, want) in [(0, "1"), (1, "2"), (2, "4"), (3, "2"), (4, "1")] {
        assert_eq!(unsafe { m0n_inv_series_coeff(s, M0nSeries::P, 7, k, &mut c) }, M0nStatus::Ok);
        assert_eq!(take_string(c), want);
    }
    assert_eq!(unsafe { m0n_inv_series_coeff(s, M0nSeries::Q, 8, 0, &mut c) }, M0nStatus::OutOfRange);
    unsafe { m0n_inv_series_free(s) };

    let mut holds = false;
    let seq = [1i64, 2, 4, 2, 1];
    assert_eq!(unsafe { m0n_log_concave(seq.as_ptr(), seq.len(), &mut holds) }, M0nStatus::Ok);
    assert!(holds);
    let seq = [1i64, 2, 5];
    assert_eq!(unsafe { m0n_log_concave(seq.as_ptr(), seq.len(), &mut holds) }, M0nStatus::Ok);
    assert!(!holds);
    assert_eq!(unsafe { m0n_log_concave(ptr::null(), 0, &mut holds) }, M0nStatus::Ok);
}

#[test]
fn null_pointers_are_rejected() {
    assert_eq!(unsafe { m0n_rep_table_new(3, 1, ptr::null_mut()) }, M0nStatus::NullPointer);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { m0n_rep_table_json(ptr::null(), M0nSeries::Q, 1, &mut out) }, M0nStatus::NullPointer);
    assert!(last_error().contains("null"));
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(m0n_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/m0n.h")).unwrap();
    for name in [
        "m0n_rep_table_new",
        "m0n_rep_table_free",
        "m0n_rep_table_json",
        "m0n_rep_table_mult",
        "m0n_inv_series_new",
        "m0n_inv_series_free",
        "m0n_inv_series_coeff",
        "m0n_log_concave",
        "m0n_string_free",
        "m0n_last_error_message",
        "m0n_version",
        "M0N_STATUS_INCONSISTENCY",
        "typedef struct M0nRepTable M0nRepTable",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles tests/c/smoke.c against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libm0n_ffi.a");
    if !lib.exists() {
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "m0n-ffi", "--lib"])
            .args(if profile_dir.ends_with("release") { vec!["--release"] } else { vec![] })
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert!(lib.exists(), "{} not built", lib.display());
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let bin = out_dir.join("m0n_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status);
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("mult=1\n"), "{stdout}");
    assert!(stdout.contains("p72=4\n"), "{stdout}");
    assert!(stdout.contains("error=n = 9 exceeds cap 6"), "{stdout}");
}
