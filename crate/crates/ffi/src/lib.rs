//! C ABI over `ddguide`.
//!
//! Instances and solutions are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns a
//! [`DdgError`]; on failure a message is available from
//! [`ddg_last_error_message`] on the same thread. Strings returned through
//! out-parameters are freed with [`ddg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::time::Duration;

use ddguide::encoder::{build_model, export_lp};
use ddguide::instance::{Instance, Setting};
use ddguide::io::{parse_assignment, to_json, InstanceFile, Report};
use ddguide::solver::{solve, Limits, Solution, Status};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DdgError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or a document of the wrong shape.
    Parse = 3,
    /// Well-formed input that does not describe a valid instance.
    InvalidInstance = 4,
    InvalidSetting = 5,
    InvalidAssignment = 6,
    /// The solution carries no assignment (infeasible, or stopped before one was found).
    NoSolution = 7,
    Io = 8,
    /// A Rust panic was caught at the boundary.
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DdgSolveStatus {
    Optimal = 0,
    Infeasible = 1,
    LimitReached = 2,
}

/// Cost and the three objective counts of an assignment.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DdgMetrics {
    pub cost: u64,
    pub obj1: u64,
    pub obj2: u64,
    pub obj3: u64,
}

/// Search limits; zero means unlimited.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DdgLimits {
    pub node_limit: u64,
    pub time_limit_ms: u64,
}

/// A resolved instance.
pub struct DdgInstance {
    inner: Instance,
}

/// A solve result together with its JSON report.
pub struct DdgSolution {
    inner: Solution,
    report: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(DdgError, String);

impl From<ddguide::Error> for Failure {
    fn from(e: ddguide::Error) -> Self {
        use ddguide::Error as E;
        let code = match &e {
            E::Json(_) | E::Format(_) => DdgError::Parse,
            E::Io(_) => DdgError::Io,
            E::InvalidSetting(_) => DdgError::InvalidSetting,
            E::IncompleteAssignment(_) | E::InfeasibleAssignment { .. } | E::Decode(_) => DdgError::InvalidAssignment,
            _ => DdgError::InvalidInstance,
        };
        Failure(code, e.to_string())
    }
}

/// Runs `f`, records any failure for [`ddg_last_error_message`], and maps panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DdgError {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DdgError::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside ddguide");
            DdgError::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(DdgError::NullPointer, format!("`{what}` is null"))
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(DdgError::InvalidUtf8, format!("`{what}`: {e}")))
}

/// # Safety
/// `p` is null or points to a live `T`.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn setting(id: u8) -> Result<Setting, Failure> {
    Ok(Setting::try_from(id)?)
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|e| Failure(DdgError::Parse, e.to_string()))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn ddg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ddg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an instance document. Relative population paths are resolved
/// against `base_dir`, which may be null for the current directory.
///
/// # Safety
/// `json` and a non-null `base_dir` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ddg_instance_from_json(
    json: *const c_char,
    base_dir: *const c_char,
    out: *mut *mut DdgInstance,
) -> DdgError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = str_arg(json, "json")?;
        let dir = if base_dir.is_null() { "." } else { str_arg(base_dir, "base_dir")? };
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Failure(DdgError::Parse, e.to_string()))?;
        let inner = file.resolve(Path::new(dir))?;
        *out = Box::into_raw(Box::new(DdgInstance { inner }));
        Ok(())
    })
}

/// # Safety
/// `inst` is null or a handle from [`ddg_instance_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ddg_instance_free(inst: *mut DdgInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of examinee types in the instance's population.
///
/// # Safety
/// `inst` is a live instance handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ddg_instance_type_count(inst: *const DdgInstance, out: *mut u64) -> DdgError {
    guard(|| {
        let inst = handle(inst, "inst")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = inst.inner.population.len() as u64;
        Ok(())
    })
}

/// Solves `setting` (1, 2 or 3) with the native search. `limits` may be null.
/// An infeasible or limited result is still `DDG_ERROR_OK`; read its status.
///
/// # Safety
/// `inst` is a live instance handle; `limits` is null or readable; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ddg_solve(
    inst: *const DdgInstance,
    setting_id: u8,
    limits: *const DdgLimits,
    out: *mut *mut DdgSolution,
) -> DdgError {
    guard(|| {
        let inst = &handle(inst, "inst")?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let l = limits.as_ref().copied().unwrap_or_default();
        let limits = Limits {
            nodes: (l.node_limit > 0).then_some(l.node_limit),
            time: (l.time_limit_ms > 0).then(|| Duration::from_millis(l.time_limit_ms)),
        };
        let inner = solve(inst, setting(setting_id)?, limits)?;
        let report = to_json(&Report::new(inst, &inner, "native")?)?;
        *out = Box::into_raw(Box::new(DdgSolution { inner, report }));
        Ok(())
    })
}

/// # Safety
/// `sol` is null or a handle from [`ddg_solve`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ddg_solution_free(sol: *mut DdgSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// # Safety
/// `sol` is a live solution handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ddg_solution_status(sol: *const DdgSolution, out: *mut DdgSolveStatus) -> DdgError {
    guard(|| {
        let sol = handle(sol, "sol")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = match sol.inner.status {
            Status::Optimal => DdgSolveStatus::Optimal,
            Status::Infeasible => DdgSolveStatus::Infeasible,
            Status::LimitReached => DdgSolveStatus::LimitReached,
        };
        Ok(())
    })
}

/// Metrics of the returned assignment; `DDG_ERROR_NO_SOLUTION` when there is none.
///
/// # Safety
/// `sol` is a live solution handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ddg_solution_metrics(sol: *const DdgSolution, out: *mut DdgMetrics) -> DdgError {
    guard(|| {
        let sol = handle(sol, "sol")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = sol.inner.metrics.ok_or_else(|| Failure(DdgError::NoSolution, "no assignment found".into()))?;
        *out = DdgMetrics { cost: m.cost, obj1: m.obj1, obj2: m.obj2, obj3: m.obj3 };
        Ok(())
    })
}

/// Objective value as a double (the exact fraction is in the JSON report).
///
/// # Safety
/// `sol` is a live solution handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ddg_solution_objective(sol: *const DdgSolution, out: *mut f64) -> DdgError {
    guard(|| {
        let sol = handle(sol, "sol")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let o = sol.inner.objective.ok_or_else(|| Failure(DdgError::NoSolution, "no assignment found".into()))?;
        *out = o.value();
        Ok(())
    })
}

/// The solve report as JSON, the same document the CLI writes.
///
/// # Safety
/// `sol` is a live solution handle; `out` is writable. Free the string with [`ddg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ddg_solution_to_json(sol: *const DdgSolution, out: *mut *mut c_char) -> DdgError {
    guard(|| {
        let sol = handle(sol, "sol")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c_string(sol.report.clone())?;
        Ok(())
    })
}

/// Evaluates a vertex-name → label map, or a report with an `assignment` key.
///
/// # Safety
/// `inst` is a live instance handle; `json` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ddg_evaluate_json(inst: *const DdgInstance, json: *const c_char, out: *mut DdgMetrics) -> DdgError {
    guard(|| {
        let inst = &handle(inst, "inst")?.inner;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let value: serde_json::Value =
            serde_json::from_str(str_arg(json, "json")?).map_err(|e| Failure(DdgError::Parse, e.to_string()))?;
        let phi = parse_assignment(value, &inst.diagram)?;
        inst.check_feasible(&phi)?;
        let m = inst.evaluate(&phi)?;
        *out = DdgMetrics { cost: m.cost, obj1: m.obj1, obj2: m.obj2, obj3: m.obj3 };
        Ok(())
    })
}

/// The integer program of `setting` in LP format.
///
/// # Safety
/// `inst` is a live instance handle; `out` is writable. Free the string with [`ddg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ddg_export_lp(inst: *const DdgInstance, setting_id: u8, out: *mut *mut c_char) -> DdgError {
    guard(|| {
        let inst = &handle(inst, "inst")?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let model = build_model(inst, setting(setting_id)?)?;
        *out = c_string(export_lp(&model))?;
        Ok(())
    })
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ddg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
