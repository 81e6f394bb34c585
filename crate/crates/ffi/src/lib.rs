//! C ABI over `cws-cluster`.
//!
//! Every fallible call returns a [`CwsStatus`] and writes results through out
//! pointers. On failure the message is kept per thread and can be fetched with
//! [`cws_last_error_message`]. Strings handed to the caller are owned by the
//! caller and released with [`cws_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cws_cluster::counts;
use cws_cluster::oracle::OracleConfig;
use cws_cluster::sim::{random_logical_state, run_trial, seeded_rng, Backend, Trial};
use cws_cluster::{DecodeOptions, Error, PauliOperator, Strategy};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    InvalidCode = 5,
    SizeCap = 6,
    Uncorrectable = 7,
    Io = 8,
    Overflow = 9,
    Internal = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwsStrategy {
    Clustered = 0,
    Exhaustive = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwsBackend {
    /// Dense state vector, at most 12 qubits.
    Dense = 0,
    /// Sparse graph-basis simulation.
    GraphBasis = 1,
}

/// A loaded code.
pub struct CwsCode(cws_cluster::CwsCode);

/// A decoder bound to one code and error weight.
pub struct CwsDecoder(cws_cluster::Decoder);

/// The outcome of one encode, corrupt, decode, recover trial.
pub struct CwsReport(Trial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn status_of(err: &Error) -> CwsStatus {
    match err {
        Error::Parse { .. } => CwsStatus::Parse,
        Error::InvalidCode(_) => CwsStatus::InvalidCode,
        Error::SizeCap { .. } => CwsStatus::SizeCap,
        Error::Uncorrectable(_) => CwsStatus::Uncorrectable,
        Error::Io(_) => CwsStatus::Io,
        Error::InvalidInput(_) | Error::DimensionMismatch { .. } => CwsStatus::InvalidInput,
        _ => CwsStatus::Internal,
    }
}

struct Failure(CwsStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CwsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any failure or panic, and maps it to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CwsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            CwsStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            CwsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(CwsStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Copy of the calling thread's last error message, or null if the last call
/// succeeded. Free with [`cws_string_free`].
#[no_mangle]
pub extern "C" fn cws_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cws_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cws_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a code from the text of a code file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cws_code_parse(text: *const c_char, out: *mut *mut CwsCode) -> CwsStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let code = cws_cluster::CwsCode::parse(text)?;
        write_handle(out, CwsCode(code))
    })
}

/// Loads a code file from disk.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cws_code_load(path: *const c_char, out: *mut *mut CwsCode) -> CwsStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        let code = cws_cluster::CwsCode::load(path)?;
        write_handle(out, CwsCode(code))
    })
}

/// # Safety
/// `code` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cws_code_free(code: *mut CwsCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Number of physical qubits; 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_code_num_qubits(code: *const CwsCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.num_qubits())
}

/// Number of codewords `K`; 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_code_dimension(code: *const CwsCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.dimension())
}

/// Declared minimum distance, or 0 when the code file does not declare one.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_code_distance(code: *const CwsCode) -> usize {
    code.as_ref().and_then(|c| c.0.declared_distance()).unwrap_or(0)
}

/// Builds a decoder for errors of weight `<= t`. The code is copied, so the
/// code handle may be freed afterwards.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cws_decoder_new(
    code: *const CwsCode,
    t: usize,
    ust_acceleration: bool,
    out: *mut *mut CwsDecoder,
) -> CwsStatus {
    guard(|| {
        let code = borrow(code, "code")?;
        let decoder = cws_cluster::Decoder::new(&code.0, t, DecodeOptions { ust_acceleration })?;
        write_handle(out, CwsDecoder(decoder))
    })
}

/// # Safety
/// `decoder` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cws_decoder_free(decoder: *mut CwsDecoder) {
    if !decoder.is_null() {
        drop(Box::from_raw(decoder));
    }
}

/// Encodes a random logical state drawn from `seed`, applies `error` (for
/// example `"X1 Z3"`, qubits numbered from 1), decodes and applies the
/// recovery. An error outside the correctable set may yield
/// [`CwsStatus::Uncorrectable`].
///
/// # Safety
/// `decoder` must be a live handle, `error` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cws_decoder_run(
    decoder: *const CwsDecoder,
    strategy: CwsStrategy,
    backend: CwsBackend,
    error: *const c_char,
    seed: u64,
    out: *mut *mut CwsReport,
) -> CwsStatus {
    guard(|| {
        let decoder = &borrow(decoder, "decoder")?.0;
        let code = decoder.code();
        let error = PauliOperator::parse(read_str(error, "error")?, code.num_qubits())?;
        let strategy = match strategy {
            CwsStrategy::Clustered => Strategy::Clustered,
            CwsStrategy::Exhaustive => Strategy::Exhaustive,
        };
        let backend = match backend {
            CwsBackend::Dense => Backend::Dense,
            CwsBackend::GraphBasis => Backend::GraphBasis,
        };
        let logical = random_logical_state(code.dimension(), &mut seeded_rng(seed));
        let trial = run_trial(
            decoder,
            strategy,
            &error,
            &logical,
            seed,
            backend,
            &OracleConfig::default(),
        )?;
        write_handle(out, CwsReport(trial))
    })
}

/// # Safety
/// `report` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cws_report_free(report: *mut CwsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Syndrome measurements performed; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_report_measurements(report: *const CwsReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.report.measurements_used)
}

/// Two-qubit gates over all measurements performed; 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_report_gate_total(report: *const CwsReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.report.gate_total)
}

/// Overlap between the recovered and the original state; -1 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_report_fidelity(report: *const CwsReport) -> f64 {
    report.as_ref().map_or(-1.0, |r| r.0.fidelity)
}

/// Whether the recovered state matches the original within tolerance.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_report_recovered(report: *const CwsReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.fidelity_ok())
}

/// Identified error class as a bit string. Free with [`cws_string_free`].
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_report_class(report: *const CwsReport) -> *mut c_char {
    report.as_ref().map_or(ptr::null_mut(), |r| {
        into_c_string(r.0.report.identified_class.to_string())
    })
}

/// Applied recovery operator. Free with [`cws_string_free`].
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_report_recovery(report: *const CwsReport) -> *mut c_char {
    report
        .as_ref()
        .map_or(ptr::null_mut(), |r| into_c_string(r.0.report.recovery.to_string()))
}

/// Full decoding report, transcript included, as JSON. Free with
/// [`cws_string_free`].
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cws_report_json(report: *const CwsReport) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        return ptr::null_mut();
    };
    let value = serde_json::json!({
        "report": r.0.report,
        "error": r.0.error,
        "fidelity": r.0.fidelity,
        "fidelity_ok": r.0.fidelity_ok(),
    });
    into_c_string(value.to_string())
}

unsafe fn write_count(value: Option<u128>, out: *mut u64) -> Result<(), Failure> {
    let value = value
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| Failure(CwsStatus::Overflow, "count exceeds 64 bits".into()))?;
    write_out(out, value, "out")
}

/// Number of Paulis of weight `<= t` on `n` qubits, identity included.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cws_sphere_count(n: usize, t: usize, out: *mut u64) -> CwsStatus {
    guard(|| write_count(counts::checked_sphere_count(n, t), out))
}

/// Worst-case number of measurements of the clustered decoder.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cws_clustered_count(n: usize, t: usize, out: *mut u64) -> CwsStatus {
    guard(|| write_count(counts::checked_clustered_count(n, t), out))
}
