use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use cws_cluster_ffi::*;

fn codes_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/codes")
}

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cws_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = cws_last_error_message();
    (!p.is_null()).then(|| take_string(p))
}

fn load(name: &str) -> *mut CwsCode {
    let path = CString::new(codes_dir().join(name).to_str().unwrap()).unwrap();
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { cws_code_load(path.as_ptr(), &mut code) }, CwsStatus::Ok);
    code
}

#[test]
fn decodes_every_single_qubit_error() {
    let code = load("five_cycle.cws");
    unsafe {
        assert_eq!(cws_code_num_qubits(code), 5);
        assert_eq!(cws_code_dimension(code), 2);
        assert_eq!(cws_code_distance(code), 3);
        let mut decoder = ptr::null_mut();
        assert_eq!(cws_decoder_new(code, 1, false, &mut decoder), CwsStatus::Ok);
        cws_code_free(code);
        for q in 1..=5 {
            for letter in ["X", "Y", "Z"] {
                let err = CString::new(format!("{letter}{q}")).unwrap();
                for (strategy, bound) in [(CwsStrategy::Clustered, 6), (CwsStrategy::Exhaustive, 16)] {
                    let mut report = ptr::null_mut();
                    let status = cws_decoder_run(decoder, strategy, CwsBackend::Dense, err.as_ptr(), 9, &mut report);
                    assert_eq!(status, CwsStatus::Ok, "{:?}", last_error());
                    assert!(cws_report_recovered(report));
                    assert!(cws_report_measurements(report) <= bound);
                    assert!(cws_report_gate_total(report) > 0);
                    assert!(take_string(cws_report_class(report)).len() == 5);
                    assert!(!take_string(cws_report_recovery(report)).is_empty());
                    cws_report_free(report);
                }
            }
        }
        cws_decoder_free(decoder);
    }
}

#[test]
fn report_json_round_trips() {
    let code = load("seven_qubit.cws");
    let err = CString::new("Z4").unwrap();
    unsafe {
        let mut decoder = ptr::null_mut();
        assert_eq!(cws_decoder_new(code, 1, true, &mut decoder), CwsStatus::Ok);
        let mut report = ptr::null_mut();
        let status = cws_decoder_run(
            decoder,
            CwsStrategy::Clustered,
            CwsBackend::GraphBasis,
            err.as_ptr(),
            3,
            &mut report,
        );
        assert_eq!(status, CwsStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take_string(cws_report_json(report))).unwrap();
        assert_eq!(json["fidelity_ok"], true);
        assert_eq!(json["report"]["strategy"], "clustered");
        assert!((json["fidelity"].as_f64().unwrap() - cws_report_fidelity(report)).abs() < 1e-15);
        cws_report_free(report);
        cws_decoder_free(decoder);
        cws_code_free(code);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut code = ptr::null_mut();
    let bad = CString::new("graph nonsense").unwrap();
    assert_ne!(unsafe { cws_code_parse(bad.as_ptr(), &mut code) }, CwsStatus::Ok);
    assert!(code.is_null());
    assert!(last_error().is_some());

    assert_eq!(
        unsafe { cws_code_parse(ptr::null(), &mut code) },
        CwsStatus::NullPointer
    );
    let missing = CString::new("/nonexistent/x.cws").unwrap();
    assert_eq!(unsafe { cws_code_load(missing.as_ptr(), &mut code) }, CwsStatus::Io);

    let five = load("five_cycle.cws");
    unsafe {
        let mut decoder = ptr::null_mut();
        assert_eq!(cws_decoder_new(five, 9, false, &mut decoder), CwsStatus::InvalidInput);
        assert_eq!(cws_decoder_new(five, 1, false, ptr::null_mut()), CwsStatus::NullPointer);
        assert_eq!(cws_decoder_new(five, 1, false, &mut decoder), CwsStatus::Ok);
        assert!(last_error().is_none());
        let mut report = ptr::null_mut();
        let wrong = CString::new("Q1").unwrap();
        let status = cws_decoder_run(
            decoder,
            CwsStrategy::Clustered,
            CwsBackend::Dense,
            wrong.as_ptr(),
            0,
            &mut report,
        );
        assert_eq!(status, CwsStatus::Parse);
        cws_decoder_free(decoder);
        cws_code_free(five);
    }

    // null handles are tolerated by accessors and destructors
    unsafe {
        assert_eq!(cws_code_num_qubits(ptr::null()), 0);
        assert_eq!(cws_report_fidelity(ptr::null()), -1.0);
        assert!(cws_report_json(ptr::null()).is_null());
        cws_code_free(ptr::null_mut());
        cws_decoder_free(ptr::null_mut());
        cws_report_free(ptr::null_mut());
        cws_string_free(ptr::null_mut());
    }
}

#[test]
fn uncorrectable_errors_report_status() {
    let code = load("six_qubit.cws");
    let mut seen = 0;
    unsafe {
        let mut decoder = ptr::null_mut();
        assert_eq!(cws_decoder_new(code, 1, false, &mut decoder), CwsStatus::Ok);
        for a in 1..=6 {
            for b in a + 1..=6 {
                let err = CString::new(format!("X{a} X{b}")).unwrap();
                let mut report = ptr::null_mut();
                let status = cws_decoder_run(
                    decoder,
                    CwsStrategy::Exhaustive,
                    CwsBackend::Dense,
                    err.as_ptr(),
                    1,
                    &mut report,
                );
                match status {
                    CwsStatus::Ok => cws_report_free(report),
                    CwsStatus::Uncorrectable => {
                        seen += 1;
                        assert!(report.is_null());
                        assert!(last_error().unwrap().contains("uncorrectable"));
                    }
                    other => panic!("{other:?}"),
                }
            }
        }
        cws_decoder_free(decoder);
        cws_code_free(code);
    }
    assert!(seen > 0);
}

#[test]
fn counts_and_overflow() {
    let mut out = 0u64;
    unsafe {
        assert_eq!(cws_sphere_count(5, 1, &mut out), CwsStatus::Ok);
        assert_eq!(out, 16);
        assert_eq!(cws_clustered_count(5, 1, &mut out), CwsStatus::Ok);
        assert_eq!(out, 6);
        assert_eq!(cws_sphere_count(200, 60, &mut out), CwsStatus::Overflow);
        assert_eq!(cws_sphere_count(5, 1, ptr::null_mut()), CwsStatus::NullPointer);
    }
    let version = unsafe { CStr::from_ptr(cws_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cws_cluster.h")).unwrap();
    let source = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for ty in [
        "typedef struct CwsCode CwsCode;",
        "CWS_STATUS_UNCORRECTABLE = 7",
        "CWS_BACKEND_GRAPH_BASIS = 1",
    ] {
        assert!(header.contains(ty), "{ty}");
    }
}

/// Compiles a small C program against the header and the shared library.
#[test]
fn c_program_links_and_decodes() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libcws_cluster_ffi.so");
    assert!(lib.exists(), "{} not built", lib.display());

    let tmp = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi_c_smoke");
    std::fs::create_dir_all(&tmp).unwrap();
    let exe = tmp.join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&profile_dir)
        .args(["-lcws_cluster_ffi", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler not runnable");
    assert!(status.success());

    let code = codes_dir().join("five_cycle.cws");
    let out = Command::new(&exe)
        .arg(&code)
        .env("LD_LIBRARY_PATH", &profile_dir)
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("recovered=1"), "{stdout}");
    assert!(stdout.contains("missing status=8"), "{stdout}");
}
