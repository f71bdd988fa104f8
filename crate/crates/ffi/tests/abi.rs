use std::ffi::{CStr, CString};
use std::ptr;

use tfi_ffi::*;

const SATURATING: &str = r#"
[[scenario]]
id = "xx"
kind = "open_quantum"
tau = 0.7853981633974483
dt = 1e-3
model = { preset = "two_qubit_xx", g = 1.0 }

[[scenario]]
id = "decay"
kind = "non_hermitian"
tau = 1.0
dt = 1e-3
model = { preset = "diag_decay", g = 1.0 }
"#;

fn last_error() -> String {
    let p = tfi_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn config_run_and_outputs() {
    let text = CString::new(SATURATING).unwrap();
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(tfi_config_parse(text.as_ptr(), TfiFormat::Toml, &mut cfg), TfiStatus::Ok);
        let mut n = 0;
        assert_eq!(tfi_config_scenario_count(cfg, &mut n), TfiStatus::Ok);
        assert_eq!(n, 2);

        let mut run = ptr::null_mut();
        assert_eq!(tfi_run(cfg, 1, 0, 0, &mut run), TfiStatus::Ok);
        let mut status = -1;
        assert_eq!(tfi_run_exit_status(run, &mut status), TfiStatus::Ok);
        assert_eq!(status, 0);
        let mut passed = 0;
        assert_eq!(tfi_run_scenario_passed(run, 1, &mut passed), TfiStatus::Ok);
        assert_eq!(passed, 1);

        let mut json = ptr::null_mut();
        assert_eq!(tfi_run_summary_json(run, &mut json), TfiStatus::Ok);
        let s = CStr::from_ptr(json).to_str().unwrap().to_owned();
        tfi_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["scenarios"].as_array().unwrap().len(), 2);

        let mut csv = ptr::null_mut();
        assert_eq!(tfi_run_scenario_csv(run, 0, &mut csv), TfiStatus::Ok);
        assert!(CStr::from_ptr(csv).to_str().unwrap().starts_with("t,p_0,p_1,fisher,lambda_oq"));
        tfi_string_free(csv);

        assert_eq!(tfi_run_scenario_csv(run, 9, &mut csv), TfiStatus::OutOfRange);
        assert!(last_error().contains("out of range"));

        tfi_run_free(run);
        tfi_config_free(cfg);
    }
}

#[test]
fn config_errors_are_reported() {
    let text = CString::new("[[scenario]]\nid = \"x\"\nkind = \"markov\"\ntau = 0.0\ndt = 1.0\nmodel = {}\n").unwrap();
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(tfi_config_parse(text.as_ptr(), TfiFormat::Toml, &mut cfg), TfiStatus::Config);
        assert!(cfg.is_null());
        assert!(last_error().contains("tau"));
        assert_eq!(tfi_config_parse(ptr::null(), TfiFormat::Json, &mut cfg), TfiStatus::NullPointer);
    }
}

#[test]
fn classical_quantities() {
    let p = [0.25, 0.75];
    let dp = [0.5, -0.5];
    let mut out = 0.0;
    unsafe {
        assert_eq!(tfi_temporal_fisher(p.as_ptr(), dp.as_ptr(), 2, &mut out), TfiStatus::Ok);
        assert!((out - (0.25 / 0.25 + 0.25 / 0.75)).abs() < 1e-14);
        let q = [0.75, 0.25];
        assert_eq!(tfi_bhattacharyya_arccos(p.as_ptr(), q.as_ptr(), 2, &mut out), TfiStatus::Ok);
        let bc: f64 = 2.0 * (0.25f64 * 0.75).sqrt();
        assert!((out - bc.acos()).abs() < 1e-14);
        let bad = [0.5, 0.6];
        assert_eq!(tfi_bhattacharyya_arccos(bad.as_ptr(), q.as_ptr(), 2, &mut out), TfiStatus::InvalidArgument);
    }
}

#[test]
fn markov_rates_of_two_state_model() {
    // rates 1→2 = 2, 2→1 = 1
    let w = [-2.0, 1.0, 2.0, -1.0];
    let p = [0.5, 0.5];
    let mut m = ptr::null_mut();
    let (mut s, mut ps, mut a) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(tfi_markov_new(w.as_ptr(), 2, &mut m), TfiStatus::Ok);
        assert_eq!(tfi_markov_rates(m, p.as_ptr(), 2, &mut s, &mut ps, &mut a), TfiStatus::Ok);
        let (x, y) = (1.0_f64, 0.5_f64); // flows 1→2 and 2→1
        assert!((s - (x - y) * (x / y).ln()).abs() < 1e-14);
        assert!((ps - 2.0 * (x - y) * (x - y) / (x + y)).abs() < 1e-14);
        assert!((a - (x + y)).abs() < 1e-14);
        assert_eq!(tfi_markov_rates(m, p.as_ptr(), 3, &mut s, &mut ps, &mut a), TfiStatus::InvalidArgument);
        tfi_markov_free(m);
    }
}

#[test]
fn density_operators() {
    let mixed = [0.5, 0.0, 0.0, 0.5];
    let pure = [1.0, 0.0, 0.0, 0.0];
    let plus = [0.5, 0.5, 0.5, 0.5];
    let (mut a, mut b, mut c) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    let mut out = 0.0;
    unsafe {
        assert_eq!(tfi_density_new(mixed.as_ptr(), ptr::null(), 2, &mut a), TfiStatus::Ok);
        assert_eq!(tfi_density_new(pure.as_ptr(), ptr::null(), 2, &mut b), TfiStatus::Ok);
        assert_eq!(tfi_density_new(plus.as_ptr(), ptr::null(), 2, &mut c), TfiStatus::Ok);
        assert_eq!(tfi_density_purity(a, &mut out), TfiStatus::Ok);
        assert!((out - 0.5).abs() < 1e-14);
        assert_eq!(tfi_bures_angle(b, c, &mut out), TfiStatus::Ok);
        assert!((out - std::f64::consts::FRAC_PI_4).abs() < 1e-7);
        // |0⟩ and |+⟩ share a spectrum
        assert_eq!(tfi_residual_bures(b, c, &mut out), TfiStatus::Ok);
        assert!(out.abs() < 1e-7);
        let not_psd = [1.5, 0.0, 0.0, -0.5];
        let mut d = ptr::null_mut();
        assert_eq!(tfi_density_new(not_psd.as_ptr(), ptr::null(), 2, &mut d), TfiStatus::InvalidArgument);
        assert!(d.is_null());
        tfi_density_free(a);
        tfi_density_free(b);
        tfi_density_free(c);
        tfi_density_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tfi.h")).unwrap();
    for name in [
        "tfi_config_parse",
        "tfi_run_summary_json",
        "tfi_residual_bures",
        "TFI_STATUS_OK",
        "typedef struct TfiRun TfiRun",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/tfi.h");
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99", header]).status()
    else {
        eprintln!("no C compiler available; skipped");
        return;
    };
    assert!(status.success());
}
