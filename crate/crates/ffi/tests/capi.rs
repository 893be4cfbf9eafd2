use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gcsim::Scenario;
use gcsim_ffi::*;

fn small_scenario() -> CString {
    let mut s = Scenario::reference();
    s.sim_duration = 600.0;
    s.warmup = 100.0;
    s.replications = 3;
    CString::new(s.to_json_pretty()).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe {
        gcsim_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn run(json: &CString, scheme: Option<&str>) -> *mut GcsimReport {
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(gcsim_scenario_from_json(json.as_ptr(), &mut sc), GcsimStatus::Ok);
        if let Some(name) = scheme {
            let name = CString::new(name).unwrap();
            assert_eq!(gcsim_scenario_set_scheme(sc, name.as_ptr()), GcsimStatus::Ok);
        }
        let mut report = ptr::null_mut();
        assert_eq!(gcsim_run(sc, &mut report), GcsimStatus::Ok, "{}", last_error());
        gcsim_scenario_free(sc);
        report
    }
}

fn csv(report: *const GcsimReport) -> String {
    unsafe {
        let id = CString::new("ref").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(gcsim_report_to_csv(report, id.as_ptr(), &mut out), GcsimStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        gcsim_string_free(out);
        text
    }
}

#[test]
fn run_and_read_metrics() {
    let json = small_scenario();
    let report = run(&json, None);
    unsafe {
        let name = CString::new("handoff_blocking").unwrap();
        let mut s = GcsimSummary {
            mean: -1.0,
            std_error: -1.0,
            ci95_half: -1.0,
            replications: 0,
        };
        assert_eq!(gcsim_report_metric(report, name.as_ptr(), &mut s), GcsimStatus::Ok);
        assert_eq!(s.replications, 3);
        assert!((0.0..=1.0).contains(&s.mean));
        assert!(s.std_error >= 0.0 && s.ci95_half >= s.std_error);

        let bogus = CString::new("throughput").unwrap();
        assert_eq!(
            gcsim_report_metric(report, bogus.as_ptr(), &mut s),
            GcsimStatus::InvalidArgument
        );
        assert!(last_error().contains("throughput"));
        gcsim_report_free(report);
    }
}

#[test]
fn same_scenario_same_csv() {
    let json = small_scenario();
    let a = run(&json, Some("StaticGC"));
    let b = run(&json, Some("StaticGC"));
    let (ca, cb) = (csv(a), csv(b));
    assert_eq!(ca, cb);
    assert!(ca.starts_with("scenario_id,scheme,"));
    assert!(ca.lines().skip(1).all(|l| l.starts_with("ref,StaticGC,")));
    unsafe {
        gcsim_report_free(a);
        gcsim_report_free(b);
    }
}

#[test]
fn invalid_scenarios_are_reported() {
    unsafe {
        let mut sc = ptr::null_mut();
        let junk = CString::new("{ not json").unwrap();
        assert_eq!(gcsim_scenario_from_json(junk.as_ptr(), &mut sc), GcsimStatus::Validation);
        assert!(sc.is_null());

        let mut s = Scenario::reference();
        s.policy.initial_guard = 99;
        let bad = CString::new(s.to_json_pretty()).unwrap();
        assert_eq!(gcsim_scenario_from_json(bad.as_ptr(), &mut sc), GcsimStatus::Ok);
        assert_eq!(gcsim_scenario_validate(sc), GcsimStatus::Validation);
        let mut report = ptr::null_mut();
        assert_eq!(gcsim_run(sc, &mut report), GcsimStatus::Validation);
        assert!(report.is_null());
        assert!(last_error().contains("initial_guard"));

        let scheme = CString::new("LIFO").unwrap();
        assert_eq!(gcsim_scenario_set_scheme(sc, scheme.as_ptr()), GcsimStatus::InvalidArgument);
        gcsim_scenario_free(sc);
    }
}

#[test]
fn null_pointers_are_rejected() {
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(gcsim_scenario_from_json(ptr::null(), &mut sc), GcsimStatus::NullPointer);
        let mut report = ptr::null_mut();
        assert_eq!(gcsim_run(ptr::null(), &mut report), GcsimStatus::NullPointer);
        assert_eq!(gcsim_erlang_b(2, 1.0, ptr::null_mut()), GcsimStatus::NullPointer);
        gcsim_scenario_free(ptr::null_mut());
        gcsim_report_free(ptr::null_mut());
        gcsim_string_free(ptr::null_mut());
    }
}

#[test]
fn oracle_values() {
    unsafe {
        let mut b = GcsimBlocking {
            new_call: 0.0,
            handoff: 0.0,
        };
        assert_eq!(gcsim_oracle_blocking(2, 1, 1.0, 1.0, 1.0, &mut b), GcsimStatus::Ok);
        assert!((b.new_call - 0.75).abs() < 1e-12);
        assert!((b.handoff - 0.25).abs() < 1e-12);

        let mut eb = 0.0;
        assert_eq!(gcsim_erlang_b(2, 1.0, &mut eb), GcsimStatus::Ok);
        assert!((eb - 0.2).abs() < 1e-12);
        assert_eq!(gcsim_erlang_b(2, -1.0, &mut eb), GcsimStatus::Domain);
        assert_eq!(
            gcsim_oracle_blocking(2, 3, 1.0, 1.0, 1.0, &mut b),
            GcsimStatus::Domain
        );
    }
}

#[test]
fn last_error_truncates() {
    unsafe {
        let mut eb = 0.0;
        gcsim_erlang_b(2, -1.0, &mut eb);
        let full = gcsim_last_error(ptr::null_mut(), 0);
        assert!(full > 4);
        let mut buf = [0x7f as c_char; 4];
        assert_eq!(gcsim_last_error(buf.as_mut_ptr(), buf.len()), full);
        assert_eq!(buf[3], 0);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gcsim.h")).unwrap();
    for f in [
        "gcsim_scenario_from_json",
        "gcsim_scenario_set_scheme",
        "gcsim_scenario_validate",
        "gcsim_scenario_free",
        "gcsim_run",
        "gcsim_report_metric",
        "gcsim_report_to_csv",
        "gcsim_report_free",
        "gcsim_string_free",
        "gcsim_oracle_blocking",
        "gcsim_erlang_b",
        "gcsim_last_error",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}
