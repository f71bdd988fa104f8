//! C ABI for the `tfi` toolkit.
//!
//! Conventions:
//! - Every function returns a [`TfiStatus`]; results come back through out
//!   pointers, which are left untouched on failure.
//! - Objects are opaque handles created by `*_new`/`*_parse`/`tfi_run` and
//!   released with the matching `*_free`. Passing NULL to a `*_free` is a
//!   no-op.
//! - Strings returned to the caller are NUL-terminated, owned by the caller
//!   and must be released with [`tfi_string_free`].
//! - After a non-OK status, [`tfi_last_error`] describes the failure on the
//!   calling thread.
//! - Panics never cross the boundary; they are reported as
//!   [`TfiStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tfi::cli::{parse_config, run_all, summary_json, ConfigFile, Format, RunOptions, ScenarioOutcome, Status};
use tfi::info_geometry::{bhattacharyya_arccos, temporal_fisher_discrete, DiscreteDistribution};
use tfi::linalg::{c, CMatrix};
use tfi::markov::{dynamical_activity_rate, entropy_production_rate, pseudo_entropy_production_rate, MarkovModel};
use tfi::quantum::{bures_angle, purity, residual_bures, DensityOperator};
use tfi::Error;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Config = 4,
    Numerical = 5,
    Io = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// Input format for [`tfi_config_parse`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfiFormat {
    Toml = 0,
    Json = 1,
}

/// Parsed and validated scenario file.
pub struct TfiConfig {
    inner: ConfigFile,
}

/// Outcome of running a config: per-scenario summaries and CSV series.
pub struct TfiRun {
    outcomes: Vec<ScenarioOutcome>,
    exit_status: i32,
}

/// Validated density operator.
pub struct TfiDensity {
    inner: DensityOperator,
}

/// Markov jump process generator.
pub struct TfiMarkov {
    inner: MarkovModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> TfiStatus {
    match e {
        Error::Config(_) => TfiStatus::Config,
        Error::Io(_) => TfiStatus::Io,
        Error::InvalidArgument(_)
        | Error::InvalidModel(_)
        | Error::DimensionMismatch { .. }
        | Error::GridMismatch(_)
        | Error::NotNormalized { .. }
        | Error::NegativeEntry { .. }
        | Error::NotHermitian(_)
        | Error::NotSquare(..)
        | Error::NotPsd(_)
        | Error::UnnormalizedFlow { .. }
        | Error::NonMonotoneTime { .. } => TfiStatus::InvalidArgument,
        Error::StabilityViolation { .. } | Error::NegativeDensity { .. } | Error::TraceCollapse(_) => {
            TfiStatus::Numerical
        }
    }
}

struct Fail(TfiStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> TfiStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TfiStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TfiStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(TfiStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn owned_string(bytes: Vec<u8>) -> Result<*mut c_char, Fail> {
    CString::new(bytes).map(CString::into_raw).map_err(|_| Fail(TfiStatus::InvalidUtf8, "string contains NUL".into()))
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn tfi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tfi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- configs and runs

/// Parses and validates a scenario document.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_config_parse(
    text: *const c_char,
    format: TfiFormat,
    out: *mut *mut TfiConfig,
) -> TfiStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| Fail(TfiStatus::InvalidUtf8, e.to_string()))?;
        let format = match format {
            TfiFormat::Toml => Format::Toml,
            TfiFormat::Json => Format::Json,
        };
        let inner = parse_config(text, format)?;
        write_out(out, Box::into_raw(Box::new(TfiConfig { inner })))
    })
}

/// # Safety
/// `config` must be NULL or a handle from [`tfi_config_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn tfi_config_free(config: *mut TfiConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_config_scenario_count(config: *const TfiConfig, out: *mut usize) -> TfiStatus {
    guard(|| write_out(out, handle(config, "config")?.inner.scenarios.len()))
}

/// Runs every scenario of `config` on `jobs` worker threads (0 = one per
/// core). `seed` replaces every scenario seed when `override_seed` is
/// non-zero. Scenario failures are recorded in the run, not returned here.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_run(
    config: *const TfiConfig,
    jobs: usize,
    override_seed: i32,
    seed: u64,
    out: *mut *mut TfiRun,
) -> TfiStatus {
    guard(|| {
        let cfg = handle(config, "config")?;
        let opts = RunOptions { jobs, seed_override: (override_seed != 0).then_some(seed), bound_scale: None };
        let outcomes = run_all(&cfg.inner.scenarios, &opts)?;
        let summaries: Vec<_> = outcomes.iter().map(|o| o.summary.clone()).collect();
        let exit_status = tfi::cli::exit_status(&summaries);
        write_out(out, Box::into_raw(Box::new(TfiRun { outcomes, exit_status })))
    })
}

/// # Safety
/// `run` must be NULL or a handle from [`tfi_run`], freed once.
#[no_mangle]
pub unsafe extern "C" fn tfi_run_free(run: *mut TfiRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// 0 when every check passed, 1 on a bound violation, 2 on a scenario error.
///
/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_run_exit_status(run: *const TfiRun, out: *mut i32) -> TfiStatus {
    guard(|| write_out(out, handle(run, "run")?.exit_status))
}

/// Number of scenarios in the run.
///
/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_run_scenario_count(run: *const TfiRun, out: *mut usize) -> TfiStatus {
    guard(|| write_out(out, handle(run, "run")?.outcomes.len()))
}

/// Whether scenario `index` passed every check (1) or not (0).
///
/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_run_scenario_passed(run: *const TfiRun, index: usize, out: *mut i32) -> TfiStatus {
    guard(|| {
        let o = scenario(handle(run, "run")?, index)?;
        write_out(out, i32::from(o.summary.status == Status::Pass))
    })
}

fn scenario(run: &TfiRun, index: usize) -> Result<&ScenarioOutcome, Fail> {
    run.outcomes.get(index).ok_or_else(|| {
        Fail(TfiStatus::OutOfRange, format!("scenario index {index} out of range ({})", run.outcomes.len()))
    })
}

/// The summary JSON document (same schema as `summary.json`).
///
/// # Safety
/// `run` must be a live handle; `out` must be writable. Free the result
/// with [`tfi_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tfi_run_summary_json(run: *const TfiRun, out: *mut *mut c_char) -> TfiStatus {
    guard(|| {
        let json = summary_json(&handle(run, "run")?.outcomes)?;
        write_out(out, owned_string(json)?)
    })
}

/// The CSV time series of scenario `index`.
///
/// # Safety
/// `run` must be a live handle; `out` must be writable. Free the result
/// with [`tfi_string_free`].
#[no_mangle]
pub unsafe extern "C" fn tfi_run_scenario_csv(run: *const TfiRun, index: usize, out: *mut *mut c_char) -> TfiStatus {
    guard(|| {
        let o = scenario(handle(run, "run")?, index)?;
        let csv = o.csv.clone().ok_or_else(|| {
            Fail(TfiStatus::Numerical, o.summary.error.clone().unwrap_or_else(|| "scenario has no series".into()))
        })?;
        write_out(out, owned_string(csv)?)
    })
}

// ---------------------------------------------------------------- classical quantities

/// Temporal Fisher information `Σᵢ ṗᵢ²/pᵢ` of a probability vector.
///
/// # Safety
/// `p` and `dp_dt` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_temporal_fisher(p: *const f64, dp_dt: *const f64, n: usize, out: *mut f64) -> TfiStatus {
    guard(|| {
        let dist = DiscreteDistribution::new(slice(p, n, "p")?.to_vec())?;
        write_out(out, temporal_fisher_discrete(&dist, slice(dp_dt, n, "dp_dt")?)?)
    })
}

/// Bhattacharyya arccos distance `arccos Σ √(pᵢqᵢ)`.
///
/// # Safety
/// `p` and `q` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_bhattacharyya_arccos(p: *const f64, q: *const f64, n: usize, out: *mut f64) -> TfiStatus {
    guard(|| {
        let a = DiscreteDistribution::new(slice(p, n, "p")?.to_vec())?;
        let b = DiscreteDistribution::new(slice(q, n, "q")?.to_vec())?;
        write_out(out, bhattacharyya_arccos(&a, &b)?)
    })
}

/// Creates a Markov model from an `n×n` row-major generator (`W[i][j]` is
/// the rate `j → i`; columns sum to zero).
///
/// # Safety
/// `generator` must point to `n*n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_markov_new(generator: *const f64, n: usize, out: *mut *mut TfiMarkov) -> TfiStatus {
    guard(|| {
        let flat = slice(
            generator,
            n.checked_mul(n).ok_or_else(|| Fail(TfiStatus::InvalidArgument, "n too large".into()))?,
            "generator",
        )?;
        let rows: Vec<Vec<f64>> = flat.chunks(n.max(1)).map(<[f64]>::to_vec).collect();
        let inner = MarkovModel::from_generator(&rows)?;
        write_out(out, Box::into_raw(Box::new(TfiMarkov { inner })))
    })
}

/// # Safety
/// `model` must be NULL or a handle from [`tfi_markov_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn tfi_markov_free(model: *mut TfiMarkov) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Entropy production, pseudo-entropy production and dynamical activity
/// rates of `model` at distribution `p`.
///
/// # Safety
/// `model` must be a live handle, `p` must point to `n` readable doubles
/// and the three output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_markov_rates(
    model: *const TfiMarkov,
    p: *const f64,
    n: usize,
    entropy: *mut f64,
    pseudo_entropy: *mut f64,
    activity: *mut f64,
) -> TfiStatus {
    guard(|| {
        let m = &handle(model, "model")?.inner;
        if n != m.n() {
            return Err(Error::DimensionMismatch { expected: m.n(), got: n }.into());
        }
        if entropy.is_null() || pseudo_entropy.is_null() || activity.is_null() {
            return Err(null("output pointer"));
        }
        let dist = DiscreteDistribution::new(slice(p, n, "p")?.to_vec())?;
        let p = dist.probs();
        write_out(entropy, entropy_production_rate(m, p).value)?;
        write_out(pseudo_entropy, pseudo_entropy_production_rate(m, p))?;
        write_out(activity, dynamical_activity_rate(m, p))
    })
}

// ---------------------------------------------------------------- density operators

/// Creates a density operator from `dim×dim` row-major real and imaginary
/// parts. `imag` may be NULL for a real matrix.
///
/// # Safety
/// `real` (and `imag` if non-NULL) must point to `dim*dim` readable
/// doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_density_new(
    real: *const f64,
    imag: *const f64,
    dim: usize,
    out: *mut *mut TfiDensity,
) -> TfiStatus {
    guard(|| {
        let len = dim.checked_mul(dim).ok_or_else(|| Fail(TfiStatus::InvalidArgument, "dim too large".into()))?;
        let re = slice(real, len, "real")?;
        let im = if imag.is_null() { None } else { Some(slice(imag, len, "imag")?) };
        let m = CMatrix::from_fn(dim, dim, |i, j| c(re[i * dim + j], im.map_or(0.0, |v| v[i * dim + j])));
        let inner = DensityOperator::new(m)?;
        write_out(out, Box::into_raw(Box::new(TfiDensity { inner })))
    })
}

/// # Safety
/// `rho` must be NULL or a handle from [`tfi_density_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn tfi_density_free(rho: *mut TfiDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// `Tr ρ²`.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_density_purity(rho: *const TfiDensity, out: *mut f64) -> TfiStatus {
    guard(|| write_out(out, purity(&handle(rho, "rho")?.inner)))
}

/// Bures angle `arccos √F(ρ, σ)`.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_bures_angle(rho: *const TfiDensity, sigma: *const TfiDensity, out: *mut f64) -> TfiStatus {
    guard(|| write_out(out, bures_angle(&handle(rho, "rho")?.inner, &handle(sigma, "sigma")?.inner)?))
}

/// Distance between the sorted spectra of `ρ` and `σ`, invariant under
/// unitary conjugation of either argument.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tfi_residual_bures(
    rho: *const TfiDensity,
    sigma: *const TfiDensity,
    out: *mut f64,
) -> TfiStatus {
    guard(|| write_out(out, residual_bures(&handle(rho, "rho")?.inner, &handle(sigma, "sigma")?.inner)?))
}
