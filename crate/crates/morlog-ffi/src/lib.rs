//! C ABI for the morlog library.
//!
//! Every computation the `morlog` CLI exposes is reachable here through a
//! single JSON request entry point, `morlog_run_json`, plus a direct
//! `morlog_selftest`. Successful calls hand back an opaque report handle;
//! accessors expose the rendered JSON, the overall pass flag, and the
//! individual checks. All strings returned by accessors are owned by the
//! handle and stay valid until `morlog_report_free`.
//!
//! Requests are JSON objects naming a command and its parameters, with the
//! same names and defaults as the CLI flags:
//!
//! ```json
//! {"command": "gauss", "prime": 3, "rank": 2}
//! {"command": "k1-log", "prime": 2, "ring": "zp", "value": [3], "precision": 16}
//! ```
//!
//! List-valued parameters (`value`, `ghosts`, `ranks`) accept either a JSON
//! array of integers or a comma-separated string. Unknown fields are
//! ignored. Errors are reported through the returned status code; the
//! matching message is available from `morlog_last_error_message` until the
//! next call on the same thread.
//!
//! The header `include/morlog.h` is generated from this file by cbindgen
//! during the build.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use morlog::report::Report;
use morlog::{runner, Error};
use serde_json::{Map, Value};

/// Result of a C ABI call. `Ok` is zero; everything else is a failure and
/// leaves a message in `morlog_last_error_message`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MorlogStatus {
    Ok = 0,
    /// Input outside the mathematical domain of the operation.
    Domain = 1,
    /// Result not representable at the requested precision.
    Precision = 2,
    /// A configured work bound was exceeded.
    Resource = 3,
    /// An internal consistency check failed.
    Verification = 4,
    /// Malformed request: bad JSON, unknown command, missing parameter.
    Usage = 5,
    /// Invariant violation inside the library, or a caught panic.
    Internal = 6,
    /// A required pointer argument was null.
    NullArgument = 7,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 8,
}

fn status_of(e: &Error) -> MorlogStatus {
    match e {
        Error::Domain(_) => MorlogStatus::Domain,
        Error::Precision(_) => MorlogStatus::Precision,
        Error::Resource(_) => MorlogStatus::Resource,
        Error::Verification(_) => MorlogStatus::Verification,
        Error::Usage(_) => MorlogStatus::Usage,
        Error::Internal(_) => MorlogStatus::Internal,
    }
}

/// Opaque handle to a finished computation report.
pub struct MorlogReport {
    json: CString,
    text: CString,
    pass: bool,
    checks: Vec<ReportCheck>,
}

struct ReportCheck {
    anchor: CString,
    pass: bool,
    detail: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = cstring_lossy(msg);
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
}

fn cstring_lossy(s: &str) -> CString {
    CString::new(s).unwrap_or_else(|_| CString::new(s.replace('\0', "?")).unwrap())
}

fn make_handle(rep: Report) -> MorlogReport {
    let checks = rep
        .checks
        .iter()
        .map(|c| ReportCheck {
            anchor: cstring_lossy(&c.anchor),
            pass: c.pass,
            detail: cstring_lossy(&c.detail),
        })
        .collect();
    MorlogReport {
        pass: rep.pass(),
        json: cstring_lossy(&rep.to_json()),
        text: cstring_lossy(&rep.to_text()),
        checks,
    }
}

fn run_to_out(
    out: *mut *mut MorlogReport,
    f: impl FnOnce() -> morlog::Result<Report>,
) -> MorlogStatus {
    if out.is_null() {
        set_last_error("output pointer is null");
        return MorlogStatus::NullArgument;
    }
    unsafe { *out = ptr::null_mut() };
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(rep)) => {
            unsafe { *out = Box::into_raw(Box::new(make_handle(rep))) };
            clear_last_error();
            MorlogStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            MorlogStatus::Internal
        }
    }
}

// ---- JSON request dispatch ------------------------------------------------

type Obj = Map<String, Value>;

fn need<'a>(obj: &'a Obj, key: &str) -> morlog::Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::usage(format!("request is missing the {key:?} parameter")))
}

fn get_u64(obj: &Obj, key: &str) -> morlog::Result<u64> {
    need(obj, key)?
        .as_u64()
        .ok_or_else(|| Error::usage(format!("parameter {key:?} must be a nonnegative integer")))
}

fn get_u64_or(obj: &Obj, key: &str, default: u64) -> morlog::Result<u64> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v
            .as_u64()
            .ok_or_else(|| Error::usage(format!("parameter {key:?} must be a nonnegative integer"))),
    }
}

fn get_u32(obj: &Obj, key: &str) -> morlog::Result<u32> {
    let v = get_u64(obj, key)?;
    u32::try_from(v).map_err(|_| Error::usage(format!("parameter {key:?} is too large")))
}

fn get_u32_or(obj: &Obj, key: &str, default: u32) -> morlog::Result<u32> {
    let v = get_u64_or(obj, key, default as u64)?;
    u32::try_from(v).map_err(|_| Error::usage(format!("parameter {key:?} is too large")))
}

fn get_usize(obj: &Obj, key: &str) -> morlog::Result<usize> {
    let v = get_u64(obj, key)?;
    usize::try_from(v).map_err(|_| Error::usage(format!("parameter {key:?} is too large")))
}

fn get_usize_opt(obj: &Obj, key: &str) -> morlog::Result<Option<usize>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => Ok(Some(get_usize(obj, key)?)),
    }
}

fn get_usize_or(obj: &Obj, key: &str, default: usize) -> morlog::Result<usize> {
    Ok(get_usize_opt(obj, key)?.unwrap_or(default))
}

fn get_i64_or(obj: &Obj, key: &str, default: i64) -> morlog::Result<i64> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v
            .as_i64()
            .ok_or_else(|| Error::usage(format!("parameter {key:?} must be an integer"))),
    }
}

fn get_str_or<'a>(obj: &'a Obj, key: &str, default: &'a str) -> morlog::Result<&'a str> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v
            .as_str()
            .ok_or_else(|| Error::usage(format!("parameter {key:?} must be a string"))),
    }
}

fn get_i64_list(obj: &Obj, key: &str) -> morlog::Result<Vec<i64>> {
    match need(obj, key)? {
        Value::Array(items) => items
            .iter()
            .map(|v| {
                v.as_i64()
                    .ok_or_else(|| Error::usage(format!("parameter {key:?} must hold integers")))
            })
            .collect(),
        Value::String(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::usage(format!("{t:?} in {key:?} is not an integer")))
            })
            .collect(),
        _ => Err(Error::usage(format!(
            "parameter {key:?} must be an integer array or a comma-separated string"
        ))),
    }
}

fn get_ranks(obj: &Obj, key: &str) -> morlog::Result<Vec<u32>> {
    get_i64_list(obj, key)?
        .into_iter()
        .map(|x| {
            if (1..=64).contains(&x) {
                Ok(x as u32)
            } else {
                Err(Error::usage(format!("rank exponent {x} out of range")))
            }
        })
        .collect()
}

fn dispatch(request: &str) -> morlog::Result<Report> {
    let value: Value = serde_json::from_str(request)
        .map_err(|e| Error::usage(format!("request is not valid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::usage("request must be a JSON object"))?;
    let command = need(obj, "command")?
        .as_str()
        .ok_or_else(|| Error::usage("parameter \"command\" must be a string"))?;
    let burnside_work = get_u64_or(obj, "max_work", morlog::burnside::DEFAULT_MAX_WORK)?;
    match command {
        "pseries" => runner::pseries(
            get_u64(obj, "prime")?,
            get_str_or(obj, "law", "multiplicative")?,
            get_u32_or(obj, "height", 1)?,
            get_usize_opt(obj, "degree")?,
        ),
        "level-check" => runner::level_check(get_u64(obj, "prime")?, get_usize_opt(obj, "degree")?),
        "subgroups" => runner::subgroups(
            get_u64(obj, "prime")?,
            &get_ranks(obj, "ranks")?,
            burnside_work,
        ),
        "gauss" => runner::gauss(get_u64(obj, "prime")?, get_u32(obj, "rank")?),
        "moebius" => runner::moebius(
            get_u64(obj, "prime")?,
            &get_ranks(obj, "ranks")?,
            burnside_work,
        ),
        "burnside-e" => runner::burnside_e(
            get_u64(obj, "prime")?,
            get_usize(obj, "rank")?,
            burnside_work,
        ),
        "hecke-verify" => runner::hecke_verify(
            get_u64(obj, "prime")?,
            get_usize(obj, "rank")?,
            get_u32_or(obj, "degree", 3)?,
            get_u64_or(obj, "max_work", morlog::hecke::DEFAULT_MAX_WORK)?,
        ),
        "k1-log" => runner::k1_log_run(
            get_u64(obj, "prime")?,
            get_str_or(obj, "ring", "zp")?,
            &get_i64_list(obj, "value")?,
            get_u32_or(obj, "precision", 20)?,
            get_i64_or(obj, "scale", 0)?,
            get_usize_or(obj, "modulus_degree", 8)?,
        ),
        "k1-exp" => runner::k1_exp_run(
            get_u64(obj, "prime")?,
            get_str_or(obj, "ring", "poly")?,
            &get_i64_list(obj, "value")?,
            get_u32_or(obj, "precision", 16)?,
            get_i64_or(obj, "scale", 0)?,
            get_usize_or(obj, "modulus_degree", 8)?,
        ),
        "artin-hasse" => {
            runner::artin_hasse_run(get_u64(obj, "prime")?, get_usize_or(obj, "degree", 20)?)
        }
        "witt" => runner::witt_run(get_u64(obj, "prime")?, &get_i64_list(obj, "ghosts")?),
        "hecke-form" => runner::hecke_form_run(
            get_u64(obj, "prime")?,
            get_u32_or(obj, "height", 1)?,
            get_u32_or(obj, "trials", 20)?,
            get_u64_or(obj, "seed", 17)?,
            burnside_work,
        ),
        "selftest" => {
            let only = match get_u64_or(obj, "only", 0)? {
                0 => None,
                i => Some(u32::try_from(i).unwrap_or(u32::MAX)),
            };
            runner::selftest_run(only, false)
        }
        other => Err(Error::usage(format!("unknown command {other:?}"))),
    }
}

// ---- extern "C" surface ---------------------------------------------------

/// ABI revision of this header. Bump on any breaking change.
#[no_mangle]
pub extern "C" fn morlog_abi_version() -> u32 {
    1
}

/// Run a computation described by a JSON request object.
///
/// On `Ok` the handle written to `out` must be released with
/// `morlog_report_free`. On any other status `*out` is set to null and the
/// failure message is available from `morlog_last_error_message`. Note that
/// a report whose checks fail is still a successful call; inspect
/// `morlog_report_pass`.
///
/// # Safety
///
/// `request` must be a non-null pointer to a NUL-terminated string, valid
/// for reads up to and including its terminator. `out` must be non-null and
/// valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn morlog_run_json(
    request: *const c_char,
    out: *mut *mut MorlogReport,
) -> MorlogStatus {
    if request.is_null() {
        set_last_error("request pointer is null");
        return MorlogStatus::NullArgument;
    }
    let bytes = unsafe { CStr::from_ptr(request) };
    let text = match bytes.to_str() {
        Ok(t) => t.to_owned(),
        Err(_) => {
            set_last_error("request is not valid UTF-8");
            return MorlogStatus::InvalidUtf8;
        }
    };
    run_to_out(out, move || dispatch(&text))
}

/// Run acceptance criteria: a single criterion by index, or all of them
/// when `criterion` is zero.
///
/// The returned report carries one check per criterion. Release the handle
/// with `morlog_report_free`.
///
/// # Safety
///
/// `out` must be non-null and valid for a single pointer write.
#[no_mangle]
pub unsafe extern "C" fn morlog_selftest(
    criterion: u32,
    out: *mut *mut MorlogReport,
) -> MorlogStatus {
    let only = if criterion == 0 { None } else { Some(criterion) };
    run_to_out(out, move || runner::selftest_run(only, false))
}

/// The report rendered as pretty-printed JSON, owned by the handle.
/// Returns null if `report` is null.
///
/// # Safety
///
/// `report` must be null or a handle obtained from this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn morlog_report_json(report: *const MorlogReport) -> *const c_char {
    match unsafe { report.as_ref() } {
        Some(r) => r.json.as_ptr(),
        None => ptr::null(),
    }
}

/// The report rendered as plain text, owned by the handle. Returns null if
/// `report` is null.
///
/// # Safety
///
/// `report` must be null or a handle obtained from this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn morlog_report_text(report: *const MorlogReport) -> *const c_char {
    match unsafe { report.as_ref() } {
        Some(r) => r.text.as_ptr(),
        None => ptr::null(),
    }
}

/// 1 when every check in the report passed, 0 when any failed, -1 if
/// `report` is null.
///
/// # Safety
///
/// `report` must be null or a handle obtained from this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn morlog_report_pass(report: *const MorlogReport) -> i32 {
    match unsafe { report.as_ref() } {
        Some(r) => r.pass as i32,
        None => -1,
    }
}

/// Number of checks in the report; 0 if `report` is null.
///
/// # Safety
///
/// `report` must be null or a handle obtained from this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn morlog_report_num_checks(report: *const MorlogReport) -> usize {
    match unsafe { report.as_ref() } {
        Some(r) => r.checks.len(),
        None => 0,
    }
}

/// Stable anchor name of check `index`, owned by the handle. Returns null
/// if `report` is null or `index` is out of range.
///
/// # Safety
///
/// `report` must be null or a handle obtained from this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn morlog_report_check_anchor(
    report: *const MorlogReport,
    index: usize,
) -> *const c_char {
    match unsafe { report.as_ref() }.and_then(|r| r.checks.get(index)) {
        Some(c) => c.anchor.as_ptr(),
        None => ptr::null(),
    }
}

/// 1 when check `index` passed, 0 when it failed, -1 if `report` is null
/// or `index` is out of range.
///
/// # Safety
///
/// `report` must be null or a handle obtained from this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn morlog_report_check_pass(
    report: *const MorlogReport,
    index: usize,
) -> i32 {
    match unsafe { report.as_ref() }.and_then(|r| r.checks.get(index)) {
        Some(c) => c.pass as i32,
        None => -1,
    }
}

/// Human-readable detail of check `index`, owned by the handle. Returns
/// null if `report` is null or `index` is out of range.
///
/// # Safety
///
/// `report` must be null or a handle obtained from this library that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn morlog_report_check_detail(
    report: *const MorlogReport,
    index: usize,
) -> *const c_char {
    match unsafe { report.as_ref() }.and_then(|r| r.checks.get(index)) {
        Some(c) => c.detail.as_ptr(),
        None => ptr::null(),
    }
}

/// Release a report handle. Passing null is a no-op. After this call every
/// pointer previously returned by the handle's accessors is dangling.
///
/// # Safety
///
/// `report` must be null or a handle obtained from this library, and must
/// not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn morlog_report_free(report: *mut MorlogReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Static name of a status code, e.g. `"usage"`. Never null.
#[no_mangle]
pub extern "C" fn morlog_status_name(status: MorlogStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        MorlogStatus::Ok => b"ok\0",
        MorlogStatus::Domain => b"domain\0",
        MorlogStatus::Precision => b"precision\0",
        MorlogStatus::Resource => b"resource\0",
        MorlogStatus::Verification => b"verification\0",
        MorlogStatus::Usage => b"usage\0",
        MorlogStatus::Internal => b"internal\0",
        MorlogStatus::NullArgument => b"null-argument\0",
        MorlogStatus::InvalidUtf8 => b"invalid-utf8\0",
    };
    name.as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or an empty string
/// after a success. The pointer stays valid until the next call into this
/// library on the same thread.
#[no_mangle]
pub extern "C" fn morlog_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
