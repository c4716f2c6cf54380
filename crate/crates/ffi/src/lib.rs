//! C ABI over the `uavpoc` simulator.
//!
//! Every fallible function returns a [`UavpocStatus`] and writes its result
//! through an out-pointer. On failure a message is available from
//! [`uavpoc_last_error`] on the same thread until the next failing call.
//! Handles are opaque and must be released with their `_free` function;
//! strings returned by the library are released with [`uavpoc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use uavpoc::config::{ScenarioConfig, Scheme};
use uavpoc::experiment::{run_experiment, Experiment};
use uavpoc::fuzzy::{satisfaction, Direction, Tfn};
use uavpoc::output::{summary_json, write_experiment};
use uavpoc::preference::{build_fpr, least_deviation, PreferenceParams, PriorityVector};
use uavpoc::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UavpocStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    Parse = 4,
    Io = 5,
    NotConverged = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// Allocation scheme of a run record.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UavpocScheme {
    Fuzzy = 0,
    Crisp = 1,
    Random = 2,
}

impl From<Scheme> for UavpocScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Fuzzy => UavpocScheme::Fuzzy,
            Scheme::Crisp => UavpocScheme::Crisp,
            Scheme::Random => UavpocScheme::Random,
        }
    }
}

/// Triangular fuzzy number `(center, left, right)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavpocTfn {
    pub center: f64,
    pub left: f64,
    pub right: f64,
}

/// One run of one scheme on one (topology, trial) cell.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UavpocRunRecord {
    pub scheme: UavpocScheme,
    pub n: usize,
    pub topo: usize,
    pub trial: usize,
    pub iters: usize,
    pub converged: bool,
    pub rate: f64,
    pub throughput: f64,
    pub active_links: usize,
    pub qos_pass: f64,
}

/// Opaque scenario configuration.
pub struct UavpocConfig(ScenarioConfig);

/// Opaque experiment result.
pub struct UavpocExperiment(Experiment);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(UavpocStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => UavpocStatus::Io,
            Error::Json(_) | Error::Csv(_) => UavpocStatus::Parse,
            Error::NotConverged { .. } => UavpocStatus::NotConverged,
            _ => UavpocStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: UavpocStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, converting errors and panics into a status plus the thread's last error.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> UavpocStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UavpocStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UavpocStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(UavpocStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(UavpocStatus::NullPointer, format!("{what} is null")))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(UavpocStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(UavpocStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(UavpocStatus::InvalidArgument, "string contains a NUL byte"))
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn uavpoc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default scenario.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_config_default(out_config: *mut *mut UavpocConfig) -> UavpocStatus {
    guard(|| {
        *out(out_config, "out_config")? = Box::into_raw(Box::new(UavpocConfig(ScenarioConfig::default())));
        Ok(())
    })
}

/// Scenario from a JSON document; missing keys take defaults, unknown keys are rejected.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_config` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_config_from_json(json: *const c_char, out_config: *mut *mut UavpocConfig) -> UavpocStatus {
    guard(|| {
        let slot = out(out_config, "out_config")?;
        let cfg = ScenarioConfig::from_json_str(str_arg(json, "json")?)?;
        *slot = Box::into_raw(Box::new(UavpocConfig(cfg)));
        Ok(())
    })
}

/// Scenario as JSON; free the result with [`uavpoc_string_free`].
///
/// # Safety
/// `config` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_config_to_json(config: *const UavpocConfig, out_json: *mut *mut c_char) -> UavpocStatus {
    guard(|| {
        let cfg = deref(config, "config")?;
        let slot = out(out_json, "out_json")?;
        let s = serde_json::to_string_pretty(&cfg.0).map_err(|e| fail(UavpocStatus::Parse, e.to_string()))?;
        *slot = to_c_string(s)?;
        Ok(())
    })
}

/// Sets network size, topology count, trials per topology and master seed.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_config_set_scale(
    config: *mut UavpocConfig,
    n_nodes: usize,
    topologies: usize,
    trials: usize,
    master_seed: u64,
) -> UavpocStatus {
    guard(|| {
        let cfg = out(config, "config")?;
        let next = ScenarioConfig {
            n_nodes,
            topologies,
            trials,
            master_seed,
            ..cfg.0.clone()
        };
        next.validate()?;
        cfg.0 = next;
        Ok(())
    })
}

/// Releases a configuration. Null is ignored.
///
/// # Safety
/// `config` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_config_free(config: *mut UavpocConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs every configured scheme over all (topology, trial) cells.
///
/// # Safety
/// `config` must be a live handle and `out_experiment` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_experiment_run(config: *const UavpocConfig, out_experiment: *mut *mut UavpocExperiment) -> UavpocStatus {
    guard(|| {
        let cfg = deref(config, "config")?;
        let slot = out(out_experiment, "out_experiment")?;
        let exp = run_experiment(&cfg.0)?;
        *slot = Box::into_raw(Box::new(UavpocExperiment(exp)));
        Ok(())
    })
}

/// Number of completed runs.
///
/// # Safety
/// `experiment` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_experiment_record_count(experiment: *const UavpocExperiment, out_count: *mut usize) -> UavpocStatus {
    guard(|| {
        let exp = deref(experiment, "experiment")?;
        *out(out_count, "out_count")? = exp.0.records.len();
        Ok(())
    })
}

/// Number of runs that returned an error.
///
/// # Safety
/// `experiment` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_experiment_failure_count(experiment: *const UavpocExperiment, out_count: *mut usize) -> UavpocStatus {
    guard(|| {
        let exp = deref(experiment, "experiment")?;
        *out(out_count, "out_count")? = exp.0.failures.len();
        Ok(())
    })
}

/// Copies record `index` in canonical order (topology, trial, scheme).
///
/// # Safety
/// `experiment` must be a live handle and `out_record` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_experiment_record(
    experiment: *const UavpocExperiment,
    index: usize,
    out_record: *mut UavpocRunRecord,
) -> UavpocStatus {
    guard(|| {
        let exp = deref(experiment, "experiment")?;
        let slot = out(out_record, "out_record")?;
        let r = exp
            .0
            .records
            .get(index)
            .ok_or_else(|| fail(UavpocStatus::OutOfRange, format!("record {index} of {}", exp.0.records.len())))?;
        *slot = UavpocRunRecord {
            scheme: r.scheme.into(),
            n: r.n,
            topo: r.topo,
            trial: r.trial,
            iters: r.iters,
            converged: r.converged,
            rate: r.rate,
            throughput: r.throughput,
            active_links: r.active_links,
            qos_pass: r.qos_pass,
        };
        Ok(())
    })
}

/// Per-scheme, per-N summary with the configuration, as JSON.
/// Free the result with [`uavpoc_string_free`].
///
/// # Safety
/// Both handles must be live and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_experiment_summary_json(
    experiment: *const UavpocExperiment,
    config: *const UavpocConfig,
    out_json: *mut *mut c_char,
) -> UavpocStatus {
    guard(|| {
        let exp = deref(experiment, "experiment")?;
        let cfg = deref(config, "config")?;
        let slot = out(out_json, "out_json")?;
        *slot = to_c_string(summary_json(&cfg.0, &exp.0)?)?;
        Ok(())
    })
}

/// Writes `runs.csv` and `summary.json` into `dir`, creating it if needed.
///
/// # Safety
/// Both handles must be live and `dir` a NUL-terminated path.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_experiment_write(
    experiment: *const UavpocExperiment,
    config: *const UavpocConfig,
    dir: *const c_char,
) -> UavpocStatus {
    guard(|| {
        let exp = deref(experiment, "experiment")?;
        let cfg = deref(config, "config")?;
        write_experiment(Path::new(str_arg(dir, "dir")?), &cfg.0, &exp.0)?;
        Ok(())
    })
}

/// Releases an experiment. Null is ignored.
///
/// # Safety
/// `experiment` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_experiment_free(experiment: *mut UavpocExperiment) {
    if !experiment.is_null() {
        drop(Box::from_raw(experiment));
    }
}

fn tfn(t: UavpocTfn) -> Result<Tfn, Failure> {
    Ok(Tfn::new(t.center, t.left, t.right)?)
}

/// Satisfaction degree `SF(a < b)` when `greater` is false, `SF(a > b)` otherwise.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_satisfaction(a: UavpocTfn, b: UavpocTfn, greater: bool, out_value: *mut f64) -> UavpocStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        let dir = if greater { Direction::Greater } else { Direction::Less };
        *slot = satisfaction(&tfn(a)?, &tfn(b)?, dir)?;
        Ok(())
    })
}

/// Priority weights from relative indices (largest equal to 1): builds the
/// preference relation with `zeta` and runs least deviation to `eta` from
/// uniform weights. Writes `len` weights to `out_weights`.
///
/// # Safety
/// `indices` must point to `len` readable values and `out_weights` to `len` writable ones.
#[no_mangle]
pub unsafe extern "C" fn uavpoc_priority_vector(
    indices: *const f64,
    len: usize,
    zeta: f64,
    eta: f64,
    out_weights: *mut f64,
) -> UavpocStatus {
    guard(|| {
        if indices.is_null() || out_weights.is_null() {
            return Err(fail(UavpocStatus::NullPointer, "indices or out_weights is null"));
        }
        let v = std::slice::from_raw_parts(indices, len);
        let q = build_fpr(v, zeta)?;
        let params = PreferenceParams {
            zeta,
            eta,
            ..PreferenceParams::default()
        };
        let w = least_deviation(&q, &params, &PriorityVector::uniform(len))?;
        std::slice::from_raw_parts_mut(out_weights, len).copy_from_slice(w.weights());
        Ok(())
    })
}

/// Interference factor for channel separation `delta` at `distance` metres:
/// 0 when orthogonal or out of range, infinite when co-located.
#[no_mangle]
pub extern "C" fn uavpoc_interference_factor(delta: usize, distance: f64) -> f64 {
    uavpoc::interference::interference_factor(delta, distance)
}
