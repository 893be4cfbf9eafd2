//! C interface to the gcsim simulator.
//!
//! Scenarios and reports are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns a [`GcsimStatus`];
//! the message of the most recent failure on the calling thread is available
//! through [`gcsim_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gcsim::cli::output::{report_rows, to_csv};
use gcsim::cli::{simulate, threads_from_env};
use gcsim::oracle::{cutoff_blocking, erlang_b, ChainSpec};
use gcsim::stats::{BlockingReport, Metric};
use gcsim::{validate_scenario, Error, Scenario, SchemeKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcsimStatus {
    Ok = 0,
    Io = 1,
    Validation = 2,
    Logic = 3,
    NullPointer = 4,
    InvalidArgument = 5,
    Domain = 6,
    Panic = 7,
}

/// A parsed, not yet validated scenario.
pub struct GcsimScenario {
    inner: Scenario,
}

/// Aggregated results of one scenario run.
pub struct GcsimReport {
    inner: BlockingReport,
}

/// One metric of a report. `std_error` and `ci95_half` are NaN when fewer than
/// two replications were run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GcsimSummary {
    pub mean: f64,
    pub std_error: f64,
    pub ci95_half: f64,
    pub replications: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GcsimBlocking {
    pub new_call: f64,
    pub handoff: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: GcsimStatus, msg: impl Into<String>) -> GcsimStatus {
    set_error(msg);
    status
}

fn status_of(err: &Error) -> GcsimStatus {
    match err {
        Error::Io { .. } => GcsimStatus::Io,
        Error::Validation(_) | Error::Config(_) | Error::Index { .. } => GcsimStatus::Validation,
        Error::Domain(_) => GcsimStatus::Domain,
        Error::Logic(_) => GcsimStatus::Logic,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), GcsimStatus>) -> GcsimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GcsimStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(GcsimStatus::Panic, "internal panic"),
    }
}

fn check(r: gcsim::Result<()>) -> Result<(), GcsimStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, GcsimStatus> {
    if s.is_null() {
        return Err(fail(GcsimStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(GcsimStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn null(what: &str) -> GcsimStatus {
    fail(GcsimStatus::NullPointer, format!("{what} is null"))
}

/// Parse a scenario from a JSON document. On success `*out` receives a new
/// handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsim_scenario_from_json(
    json: *const c_char,
    out: *mut *mut GcsimScenario,
) -> GcsimStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let inner = Scenario::from_json_str(text).map_err(|e| fail(status_of(&e), e.to_string()))?;
        *out = Box::into_raw(Box::new(GcsimScenario { inner }));
        Ok(())
    })
}

/// Replace the scheme, given by name (`FCA`, `StaticGC`, `DynamicGC`,
/// `DGCA_CBS`).
///
/// # Safety
/// `scenario` must come from [`gcsim_scenario_from_json`]; `scheme` must be
/// NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gcsim_scenario_set_scheme(
    scenario: *mut GcsimScenario,
    scheme: *const c_char,
) -> GcsimStatus {
    guarded(|| {
        let s = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        let name = read_str(scheme, "scheme")?;
        s.inner.scheme = name
            .parse::<SchemeKind>()
            .map_err(|_| fail(GcsimStatus::InvalidArgument, format!("unknown scheme {name:?}")))?;
        Ok(())
    })
}

/// Check a scenario without running it.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcsim_scenario_validate(scenario: *const GcsimScenario) -> GcsimStatus {
    guarded(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        check(validate_scenario(s.inner.clone()).map(|_| ()).map_err(Error::Validation))
    })
}

/// # Safety
/// `scenario` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcsim_scenario_free(scenario: *mut GcsimScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Run every replication and aggregate. Worker threads follow
/// `GCSIM_THREADS`; results do not depend on it.
///
/// # Safety
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsim_run(
    scenario: *const GcsimScenario,
    out: *mut *mut GcsimReport,
) -> GcsimStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        let mut report = None;
        check((|| {
            let threads = threads_from_env()?;
            let v = validate_scenario(s.inner.clone()).map_err(Error::Validation)?;
            report = Some(simulate(&v, threads)?);
            Ok(())
        })())?;
        let inner = report.expect("set on success");
        *out = Box::into_raw(Box::new(GcsimReport { inner }));
        Ok(())
    })
}

/// Look up a metric by name: `new_call_blocking`, `handoff_blocking`,
/// `forced_termination`, `carried_load` or `mean_guard_count`.
///
/// # Safety
/// `report` must be a live handle, `metric` NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gcsim_report_metric(
    report: *const GcsimReport,
    metric: *const c_char,
    out: *mut GcsimSummary,
) -> GcsimStatus {
    guarded(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let name = read_str(metric, "metric")?;
        let m = Metric::from_name(name)
            .ok_or_else(|| fail(GcsimStatus::InvalidArgument, format!("unknown metric {name:?}")))?;
        let s = r.inner.get(m);
        *out = GcsimSummary {
            mean: s.mean,
            std_error: s.stderr.unwrap_or(f64::NAN),
            ci95_half: s.ci95_half.unwrap_or(f64::NAN),
            replications: s.replications,
        };
        Ok(())
    })
}

/// Render the report as CSV. The returned string is released with
/// [`gcsim_string_free`].
///
/// # Safety
/// `report` must be a live handle and `scenario_id` NUL-terminated; `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn gcsim_report_to_csv(
    report: *const GcsimReport,
    scenario_id: *const c_char,
    out: *mut *mut c_char,
) -> GcsimStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let id = read_str(scenario_id, "scenario_id")?;
        let csv = to_csv(&report_rows(id, None, &r.inner));
        let c = CString::new(csv)
            .map_err(|_| fail(GcsimStatus::InvalidArgument, "scenario_id contains NUL"))?;
        *out = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcsim_report_free(report: *mut GcsimReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact blocking of a single cell with `guard` of `channels` channels
/// reserved for handoffs.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsim_oracle_blocking(
    channels: u32,
    guard: u32,
    new_rate: f64,
    handoff_rate: f64,
    service_rate: f64,
    out: *mut GcsimBlocking,
) -> GcsimStatus {
    guarded(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let spec = ChainSpec {
            channels,
            guard,
            new_rate,
            handoff_rate,
            service_rate,
        };
        let b = cutoff_blocking(&spec).map_err(|e| fail(status_of(&e), e.to_string()))?;
        *out = GcsimBlocking {
            new_call: b.new_call,
            handoff: b.handoff,
        };
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcsim_erlang_b(channels: u32, load: f64, out: *mut f64) -> GcsimStatus {
    guarded(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = erlang_b(channels, load).map_err(|e| fail(status_of(&e), e.to_string()))?;
        Ok(())
    })
}

/// Copy the last error message of this thread into `buf`, truncated and
/// NUL-terminated. Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn gcsim_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}
