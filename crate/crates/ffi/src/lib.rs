//! C ABI for the canvar engine.
//!
//! Every function returns a [`CanvarStatus`]; results go through out
//! pointers. Charts and reports are opaque handles released with their
//! `_free` function. After a non-zero status, [`canvar_last_error`] gives a
//! message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use canvar::catalog::get_entry;
use canvar::error::Error;
use canvar::geodesics::{curve_length, integrate_geodesic, IntegratorConfig, Line, Termination};
use canvar::geometry::{curvature_bundle, Chart, DiffMode, DifferentiationConfig};
use canvar::identities::run_suite;
use canvar::nullsurf::{analyze, get_null_example};
use canvar::report::{sweep_json, to_json};
use canvar::sampling::SampleSpec;
use canvar::variation::{Variation, VariationConfig};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanvarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownManifold = 4,
    UnknownIdentity = 5,
    UnknownField = 6,
    UnknownExample = 7,
    OutsideDomain = 8,
    DimensionMismatch = 9,
    ForbiddenParameter = 10,
    Degenerate = 11,
    NotLightlike = 12,
    Numerical = 13,
    Panic = 99,
}

/// How a geodesic integration ended.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanvarTermination {
    ReachedT = 0,
    LeftDomain = 1,
    StepUnderflow = 2,
}

/// Differentiation mode for calls that take one.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanvarMode {
    ForwardExact = 0,
    FiniteDifference = 1,
}

/// A coordinate chart: a catalog metric or one of its variations.
pub struct CanvarChart {
    chart: Chart,
}

/// A finished report, held as canonical JSON.
pub struct CanvarReport {
    json: CString,
    cells: usize,
    failed: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CanvarStatus {
    use CanvarStatus as S;
    match e {
        Error::UnknownManifold(_) => S::UnknownManifold,
        Error::UnknownIdentity(_) => S::UnknownIdentity,
        Error::UnknownField { .. } => S::UnknownField,
        Error::UnknownExample(_) => S::UnknownExample,
        Error::PointOutsideDomain { .. } => S::OutsideDomain,
        Error::DimensionMismatch { .. } => S::DimensionMismatch,
        Error::ForbiddenParameter { .. } => S::ForbiddenParameter,
        Error::DegenerateMetric { .. }
        | Error::DegeneratePlane { .. }
        | Error::DegenerateSpan
        | Error::DegenerateHypersurface
        | Error::NullField { .. }
        | Error::NullSeedField { .. }
        | Error::SignatureMismatch { .. } => S::Degenerate,
        Error::NotLightlike(_) | Error::WrongRank(_) => S::NotLightlike,
        Error::NegativeSpeedSquared { .. } | Error::NonUnitField { .. } => S::Numerical,
        Error::InvalidConfig(_) | Error::SinkUnwritable(_) => S::InvalidArgument,
    }
}

struct Failure(CanvarStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> CanvarStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CanvarStatus::Ok
        }
        Ok(Err(Failure(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            CanvarStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CanvarStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CanvarStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn chart_ref<'a>(c: *const CanvarChart) -> Result<&'a Chart, Failure> {
    c.as_ref().map(|c| &c.chart).ok_or_else(|| null("chart"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(CanvarStatus::InvalidArgument, msg.into())
}

fn list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

fn config(mode: CanvarMode) -> DifferentiationConfig {
    DifferentiationConfig {
        mode: match mode {
            CanvarMode::ForwardExact => DiffMode::ForwardExact,
            CanvarMode::FiniteDifference => DiffMode::FiniteDifference,
        },
        ..DifferentiationConfig::default()
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn canvar_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message describing the last failure on this thread; empty after success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn canvar_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opens the base chart of catalog manifold `id`.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn canvar_chart_open(
    id: *const c_char,
    out: *mut *mut CanvarChart,
) -> CanvarStatus {
    guarded(|| {
        let id = text(id, "id")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let chart = get_entry(id)?.chart;
        *out = Box::into_raw(Box::new(CanvarChart { chart }));
        Ok(())
    })
}

/// Opens the variation `g + t ω⊗ω` of catalog manifold `id` along its field
/// named `field`.
///
/// # Safety
/// `id` and `field` must be NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn canvar_chart_open_varied(
    id: *const c_char,
    field: *const c_char,
    t: f64,
    out: *mut *mut CanvarChart,
) -> CanvarStatus {
    guarded(|| {
        let id = text(id, "id")?;
        let field = text(field, "field")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = get_entry(id)?;
        let var = Variation::new(&VariationConfig {
            t,
            base: e.chart.clone(),
            e: e.field(field)?.clone(),
        })?;
        *out = Box::into_raw(Box::new(CanvarChart { chart: var.varied }));
        Ok(())
    })
}

/// Releases a chart. Null is accepted.
///
/// # Safety
/// `chart` must come from a `canvar_chart_open*` call and not be used again.
#[no_mangle]
pub unsafe extern "C" fn canvar_chart_free(chart: *mut CanvarChart) {
    if !chart.is_null() {
        drop(Box::from_raw(chart));
    }
}

/// Chart dimension, or 0 for a null handle.
///
/// # Safety
/// `chart` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn canvar_chart_dim(chart: *const CanvarChart) -> usize {
    chart.as_ref().map_or(0, |c| c.chart.dim())
}

/// Curvature at `point` (length `n`). Writes the scalar curvature, and,
/// where the pointers are non-null, the metric and Ricci tensor (`n*n`,
/// row-major) and the Christoffel symbols `Γ^k_ij` (`n*n*n`, index
/// `(k*n + i)*n + j`).
///
/// # Safety
/// `point` must hold `n` doubles; non-null outputs must have room as above.
#[no_mangle]
pub unsafe extern "C" fn canvar_curvature(
    chart: *const CanvarChart,
    point: *const f64,
    n: usize,
    mode: CanvarMode,
    scalar: *mut f64,
    metric: *mut f64,
    ricci: *mut f64,
    christoffel: *mut f64,
) -> CanvarStatus {
    guarded(|| {
        let chart = chart_ref(chart)?;
        let p = slice(point, n, "point")?;
        if n != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                got: n,
            }
            .into());
        }
        if scalar.is_null() {
            return Err(null("scalar"));
        }
        let b = curvature_bundle(chart, p, None, &config(mode))?;
        *scalar = b.scalar;
        for i in 0..n {
            for j in 0..n {
                if !metric.is_null() {
                    *metric.add(i * n + j) = b.g[(i, j)];
                }
                if !ricci.is_null() {
                    *ricci.add(i * n + j) = b.ricci[(i, j)];
                }
            }
        }
        if !christoffel.is_null() {
            ptr::copy_nonoverlapping(b.gamma.data.as_ptr(), christoffel, n * n * n);
        }
        Ok(())
    })
}

/// Integrates the geodesic from `(p0, v0)` over `[0, span]` and writes the
/// termination, the parameter reached, the endpoint (`n` doubles) and the
/// drift of `g(γ', γ')`.
///
/// # Safety
/// `p0`, `v0` and `endpoint` must hold `n` doubles; the scalar outputs must
/// be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn canvar_geodesic(
    chart: *const CanvarChart,
    p0: *const f64,
    v0: *const f64,
    n: usize,
    span: f64,
    termination: *mut CanvarTermination,
    final_parameter: *mut f64,
    endpoint: *mut f64,
    norm_drift: *mut f64,
) -> CanvarStatus {
    guarded(|| {
        let chart = chart_ref(chart)?;
        let p = slice(p0, n, "p0")?;
        let v = slice(v0, n, "v0")?;
        if termination.is_null()
            || final_parameter.is_null()
            || endpoint.is_null()
            || norm_drift.is_null()
        {
            return Err(null("output"));
        }
        let tr = integrate_geodesic(
            chart,
            p,
            v,
            span,
            &IntegratorConfig::default(),
            &DifferentiationConfig::default(),
        )?;
        *termination = match tr.termination {
            Termination::ReachedT => CanvarTermination::ReachedT,
            Termination::LeftDomain => CanvarTermination::LeftDomain,
            Termination::StepUnderflow => CanvarTermination::StepUnderflow,
        };
        *final_parameter = tr.final_parameter();
        *norm_drift = tr.norm_drift;
        let last = tr.samples.last().ok_or_else(|| invalid("empty trace"))?;
        ptr::copy_nonoverlapping(last.point.as_ptr(), endpoint, n);
        Ok(())
    })
}

/// Length of the coordinate line `origin + s direction` for `s ∈ [a, b]`.
///
/// # Safety
/// `origin` and `direction` must hold `n` doubles; `length` must be valid.
#[no_mangle]
pub unsafe extern "C" fn canvar_line_length(
    chart: *const CanvarChart,
    origin: *const f64,
    direction: *const f64,
    n: usize,
    a: f64,
    b: f64,
    length: *mut f64,
) -> CanvarStatus {
    guarded(|| {
        let chart = chart_ref(chart)?;
        let line = Line {
            origin: slice(origin, n, "origin")?.to_vec(),
            direction: slice(direction, n, "direction")?.to_vec(),
        };
        if length.is_null() {
            return Err(null("length"));
        }
        *length = curve_length(chart, &line, (a, b))?.value;
        Ok(())
    })
}

/// Runs the identity sweep. `manifolds` and `identities` are comma-separated
/// ids; `ts` holds `nt` variation parameters.
///
/// # Safety
/// Strings must be NUL-terminated, `ts` must hold `nt` doubles and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn canvar_verify(
    manifolds: *const c_char,
    identities: *const c_char,
    ts: *const f64,
    nt: usize,
    seed: u64,
    samples: usize,
    mode: CanvarMode,
    out: *mut *mut CanvarReport,
) -> CanvarStatus {
    guarded(|| {
        let ms = list(text(manifolds, "manifolds")?);
        let ids = list(text(identities, "identities")?);
        let ts = slice(ts, nt, "ts")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if samples == 0 {
            return Err(invalid("samples must be positive"));
        }
        let cfg = config(mode);
        let r = run_suite(&ms, &ids, ts, &SampleSpec::new(seed, samples), &cfg)?;
        let json = sweep_json(&r, seed, cfg.mode)?;
        let report = CanvarReport {
            json: CString::new(json).map_err(|e| invalid(e.to_string()))?,
            cells: r.len(),
            failed: r.iter().filter(|c| c.failed()).count(),
        };
        *out = Box::into_raw(Box::new(report));
        Ok(())
    })
}

/// Analyzes a lightlike hypersurface example at `points` seeded points.
///
/// # Safety
/// `example` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn canvar_nullsurf(
    example: *const c_char,
    points: usize,
    seed: u64,
    out: *mut *mut CanvarReport,
) -> CanvarStatus {
    guarded(|| {
        let ex = get_null_example(text(example, "example")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if points == 0 {
            return Err(invalid("points must be positive"));
        }
        let r = analyze(
            &ex,
            &SampleSpec::new(seed, points),
            &DifferentiationConfig::default(),
        )?;
        let failed = r
            .max_residuals
            .values()
            .filter(|v| v.is_nan() || **v > 1e-8)
            .count();
        let report = CanvarReport {
            json: CString::new(to_json(&r)?).map_err(|e| invalid(e.to_string()))?,
            cells: r.max_residuals.len(),
            failed,
        };
        *out = Box::into_raw(Box::new(report));
        Ok(())
    })
}

/// The report as canonical JSON, owned by the report.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn canvar_report_json(report: *const CanvarReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Number of cells (identity sweeps) or residual checks (hypersurfaces).
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn canvar_report_cells(report: *const CanvarReport) -> usize {
    report.as_ref().map_or(0, |r| r.cells)
}

/// Number of failed cells or checks.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn canvar_report_failed(report: *const CanvarReport) -> usize {
    report.as_ref().map_or(0, |r| r.failed)
}

/// Releases a report. Null is accepted.
///
/// # Safety
/// `report` must come from `canvar_verify` or `canvar_nullsurf` and not be
/// used again.
#[no_mangle]
pub unsafe extern "C" fn canvar_report_free(report: *mut CanvarReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
