//! C interface to mixlab.
//!
//! Every fallible function returns a [`MixlabStatus`]. On failure the message
//! is kept per thread and read with [`mixlab_last_error`]. Strings handed out
//! through `char **` belong to the caller and go back via
//! [`mixlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Instant;

use mixlab::certs::{decide, Condition};
use mixlab::cli;
use mixlab::report::{verify, Payload, Report, ReportBody, Timing, SCHEMA_VERSION};
use mixlab::{Budget, Error, Triple};

/// Result codes. `Ok` is zero.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MixlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownInstance = 3,
    InputError = 4,
    InternalConsistency = 5,
    Schema = 6,
    Panic = 7,
}

pub const MIXLAB_CONDITION_SS: u32 = 0;
pub const MIXLAB_CONDITION_ST: u32 = 1;
pub const MIXLAB_CONDITION_MALNORMAL: u32 = 2;
pub const MIXLAB_CONDITION_NORMALIZER: u32 = 3;

/// A built-in instance. Opaque to C.
pub struct MixlabInstance {
    triple: Triple,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> MixlabStatus {
    match e {
        Error::UnknownInstance(_) => MixlabStatus::UnknownInstance,
        Error::InternalConsistency(_) => MixlabStatus::InternalConsistency,
        Error::Schema(_) => MixlabStatus::Schema,
        _ => MixlabStatus::InputError,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (MixlabStatus, String)>) -> MixlabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MixlabStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside mixlab");
            MixlabStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (MixlabStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (MixlabStatus, String)> {
    if p.is_null() {
        return Err((MixlabStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MixlabStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (MixlabStatus, String)> {
    let c = CString::new(s).map_err(|_| {
        (
            MixlabStatus::InternalConsistency,
            "nul byte in output".to_string(),
        )
    })?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T, what: &str) -> Result<(), (MixlabStatus, String)> {
    if out.is_null() {
        Err((MixlabStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Message for the last failing call on this thread, or null. Valid until
/// the next mixlab call on the same thread.
#[no_mangle]
pub extern "C" fn mixlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds the built-in instance named `id`, e.g. "rotation4".
///
/// # Safety
/// `id` must be null or a nul-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mixlab_instance_new(
    id: *const c_char,
    out: *mut *mut MixlabInstance,
) -> MixlabStatus {
    guard(|| {
        check_out(out, "out")?;
        let id = read_str(id, "id")?;
        let triple = mixlab::instances::instance(id).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(MixlabInstance { triple }));
        Ok(())
    })
}

/// # Safety
/// `inst` must be null or come from [`mixlab_instance_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn mixlab_instance_free(inst: *mut MixlabInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Decides one of the `MIXLAB_CONDITION_*` conditions and writes the JSON
/// report to `out_json`. A `max_elements` of zero means the default cap.
///
/// # Safety
/// `inst` must come from [`mixlab_instance_new`]; `out_json` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mixlab_check(
    inst: *const MixlabInstance,
    condition: u32,
    radius: u32,
    max_elements: usize,
    out_json: *mut *mut c_char,
) -> MixlabStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        let inst = inst
            .as_ref()
            .ok_or((MixlabStatus::NullPointer, "inst is null".to_string()))?;
        let (which, name) = match condition {
            MIXLAB_CONDITION_SS => (Condition::Ss, "check ss"),
            MIXLAB_CONDITION_ST => (Condition::St, "check st"),
            MIXLAB_CONDITION_MALNORMAL => (Condition::Malnormal, "check malnormal"),
            MIXLAB_CONDITION_NORMALIZER => (Condition::NormalizerEqualsK, "check normalizer"),
            c => return Err((MixlabStatus::InputError, format!("unknown condition {c}"))),
        };
        let cap = if max_elements == 0 {
            mixlab::group::DEFAULT_ELEMENT_CAP
        } else {
            max_elements
        };
        let start = Instant::now();
        let budget = Budget::new(radius, cap).map_err(lib_err)?;
        let verdict = decide(&inst.triple, which, &budget).map_err(lib_err)?;
        let report = Report {
            body: ReportBody {
                schema_version: SCHEMA_VERSION,
                instance: Some(inst.triple.id.clone()),
                command: name.to_string(),
                budget: Some(budget),
                payload: Payload::Verdict { verdict },
            },
            timing: Timing {
                elapsed_ms: start.elapsed().as_millis() as u64,
            },
        };
        write_string(out_json, report.to_json())
    })
}

/// Runs a CLI command line (without the program name) and writes its JSON
/// report to `out_json`.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings; `out_json` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mixlab_run(
    argc: usize,
    argv: *const *const c_char,
    out_json: *mut *mut c_char,
) -> MixlabStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        if argc > 0 && argv.is_null() {
            return Err((MixlabStatus::NullPointer, "argv is null".to_string()));
        }
        let mut args = vec!["mixlab".to_string()];
        for i in 0..argc {
            args.push(read_str(*argv.add(i), "argument")?.to_string());
        }
        let report = cli::run_args(args).map_err(lib_err)?;
        write_string(out_json, report.to_json())
    })
}

/// Replays the certificates in a JSON report.
///
/// # Safety
/// `report_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mixlab_verify(report_json: *const c_char, out: *mut bool) -> MixlabStatus {
    guard(|| {
        check_out(out, "out")?;
        let text = read_str(report_json, "report_json")?;
        let report = Report::from_json(text).map_err(lib_err)?;
        *out = verify(&report).map_err(lib_err)?;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string handed out by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn mixlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
