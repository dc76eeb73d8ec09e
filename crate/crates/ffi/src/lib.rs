//! C ABI over the invround library.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns an
//! [`InvStatus`] and records a message readable through [`inv_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use invround::model::Problem;
use invround::pipeline::{self, Algorithm, LpChoice, SolutionFile, SolveOptions};
use invround::{num, verify, Error};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvStatus {
    Ok = 0,
    VerificationFailed = 1,
    Usage = 2,
    Capacity = 3,
    Malformed = 4,
    Infeasible = 5,
    NonTermination = 6,
    NullPointer = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvAlgorithm {
    Auto = 0,
    Sjrp = 1,
    Irp = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvLp {
    Auto = 0,
    Config = 1,
    Lovasz = 2,
}

/// Solver options. `k_constant == 0` and `alpha_den == 0` select defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct InvSolveOptions {
    pub algorithm: InvAlgorithm,
    pub lp: InvLp,
    pub seed: u64,
    pub k_constant: u32,
    pub alpha_num: i64,
    pub alpha_den: i64,
}

/// A parsed cover or inventory instance.
pub struct InvInstance {
    problem: Problem,
}

/// A solved schedule with its cost breakdown.
pub struct InvSolution {
    file: SolutionFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> InvStatus {
    match e {
        Error::Malformed(_) | Error::Json(_) => InvStatus::Malformed,
        Error::Infeasible(_) => InvStatus::Infeasible,
        Error::Capacity(_) => InvStatus::Capacity,
        Error::UnsupportedOracle(_) | Error::Usage(_) | Error::Io(_) => InvStatus::Usage,
        Error::NonTermination { .. } => InvStatus::NonTermination,
        Error::Solver(_) => InvStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<InvStatus, (InvStatus, String)>) -> InvStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            InvStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (InvStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (InvStatus, String)> {
    if p.is_null() {
        return Err((InvStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (InvStatus::Malformed, format!("{what} is not UTF-8")))
}

fn null(what: &str) -> (InvStatus, String) {
    (InvStatus::NullPointer, format!("{what} is null"))
}

/// Default options: automatic algorithm and relaxation, seed 0.
#[no_mangle]
pub extern "C" fn inv_default_options() -> InvSolveOptions {
    InvSolveOptions { algorithm: InvAlgorithm::Auto, lp: InvLp::Auto, seed: 0, k_constant: 0, alpha_num: 0, alpha_den: 0 }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn inv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses an instance from a NUL-terminated JSON document.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn inv_instance_from_json(json: *const c_char, out: *mut *mut InvInstance) -> InvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let problem = Problem::from_json(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(InvInstance { problem }));
        Ok(InvStatus::Ok)
    })
}

/// # Safety
/// `inst` must come from [`inv_instance_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn inv_instance_free(inst: *mut InvInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

fn options(o: &InvSolveOptions) -> Result<SolveOptions, (InvStatus, String)> {
    let alpha = match (o.alpha_num, o.alpha_den) {
        (_, 0) => None,
        (p, q) if p > 0 && q > 0 => Some(num::ratio(p, q)),
        _ => return Err((InvStatus::Usage, "alpha must be positive".into())),
    };
    Ok(SolveOptions {
        algorithm: match o.algorithm {
            InvAlgorithm::Auto => Algorithm::Auto,
            InvAlgorithm::Sjrp => Algorithm::Sjrp,
            InvAlgorithm::Irp => Algorithm::Irp,
        },
        lp: match o.lp {
            InvLp::Auto => LpChoice::Auto,
            InvLp::Config => LpChoice::Config,
            InvLp::Lovasz => LpChoice::Lovasz,
        },
        seed: o.seed,
        k: (o.k_constant > 0).then_some(o.k_constant),
        alpha,
        ..Default::default()
    })
}

/// Solves an instance. `opts` may be null for defaults.
///
/// # Safety
/// `inst` must be a live instance handle; `opts` null or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn inv_solve(
    inst: *const InvInstance,
    opts: *const InvSolveOptions,
    out: *mut *mut InvSolution,
) -> InvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        let o = if opts.is_null() { inv_default_options() } else { *opts };
        let so = options(&o)?;
        let res = pipeline::solve(&inst.problem, &so).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(InvSolution { file: res.solution }));
        Ok(InvStatus::Ok)
    })
}

/// # Safety
/// `sol` must come from [`inv_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn inv_solution_free(sol: *mut InvSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Total cost as a double (the JSON form carries the exact value).
///
/// # Safety
/// `sol` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn inv_solution_cost(sol: *const InvSolution, out: *mut f64) -> InvStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = num::to_f64(&sol.file.cost);
        Ok(InvStatus::Ok)
    })
}

/// Number of days with a nonempty order.
///
/// # Safety
/// `sol` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn inv_solution_order_days(sol: *const InvSolution, out: *mut usize) -> InvStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = sol.file.schedule.sets.values().filter(|s| !s.is_empty()).count();
        Ok(InvStatus::Ok)
    })
}

/// Serializes a solution. Release the string with [`inv_string_free`].
///
/// # Safety
/// `sol` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn inv_solution_to_json(sol: *const InvSolution, out: *mut *mut c_char) -> InvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let sol = sol.as_ref().ok_or_else(|| null("solution"))?;
        let c = CString::new(sol.file.to_json()).map_err(|e| (InvStatus::Internal, e.to_string()))?;
        *out = c.into_raw();
        Ok(InvStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn inv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks a solution document against an instance document. Returns
/// `Ok` when clean and `VerificationFailed` otherwise, with the violations
/// in [`inv_last_error`].
///
/// # Safety
/// Both arguments must be valid C strings.
#[no_mangle]
pub unsafe extern "C" fn inv_verify_json(instance_json: *const c_char, solution_json: *const c_char) -> InvStatus {
    guard(|| {
        let problem = Problem::from_json(read_str(instance_json, "instance")?).map_err(lib_err)?;
        let sol = SolutionFile::from_json(read_str(solution_json, "solution")?).map_err(lib_err)?;
        let report = verify::verify(&problem, &sol).map_err(lib_err)?;
        if report.is_clean() {
            Ok(InvStatus::Ok)
        } else {
            Err((InvStatus::VerificationFailed, report.violations.join("\n")))
        }
    })
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn inv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
