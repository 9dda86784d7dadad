//! C interface to `ionjc`.
//!
//! Every fallible function returns an [`IonjcStatus`]; on failure the message
//! is available from [`ionjc_last_error`] on the same thread. Objects are
//! handed out as opaque pointers and must be released with the matching
//! `*_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ionjc::cli_io::{self, RunConfig};
use ionjc::quantized_pump::{self, DensityMatrixVib};
use ionjc::quasiprob::{FilterSpec, GridSpec, PElementTable};
use ionjc::{semiclassical, Error, ModelParams, TruncationPolicy};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IonjcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    UnknownPreset = 5,
    TruncationTooSmall = 6,
    StepFailure = 7,
    DegenerateBlock = 8,
    QuadratureNotConverged = 9,
    CacheError = 10,
    IoError = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

impl From<&Error> for IonjcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } => IonjcStatus::ParseError,
            Error::Validation { .. } => IonjcStatus::ValidationError,
            Error::UnknownPreset(_) => IonjcStatus::UnknownPreset,
            Error::TruncationTooSmall { .. } => IonjcStatus::TruncationTooSmall,
            Error::StepFailure { .. } => IonjcStatus::StepFailure,
            Error::DegenerateBlock { .. } => IonjcStatus::DegenerateBlock,
            Error::QuadratureNotConverged { .. } => IonjcStatus::QuadratureNotConverged,
            Error::Cache(_) => IonjcStatus::CacheError,
            Error::Io(_) => IonjcStatus::IoError,
        }
    }
}

/// Model parameters passed by value. `arg_kappa` is fixed to zero.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IonjcModelParams {
    pub k: u32,
    pub eta: f64,
    pub delta_phi: f64,
    pub delta_omega_tilde: f64,
    pub nu_tilde: f64,
    pub omega21_tilde: f64,
}

impl From<&IonjcModelParams> for ModelParams {
    fn from(p: &IonjcModelParams) -> Self {
        ModelParams::new(p.k as usize, p.eta, p.delta_phi)
            .with_detuning(p.delta_omega_tilde)
            .with_frequencies(p.nu_tilde, p.omega21_tilde)
    }
}

/// Rectangular phase-space grid, row-major in `re` then `im`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IonjcGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub n_re: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub n_im: usize,
}

impl From<&IonjcGrid> for GridSpec {
    fn from(g: &IonjcGrid) -> Self {
        GridSpec {
            re_min: g.re_min,
            re_max: g.re_max,
            n_re: g.n_re,
            im_min: g.im_min,
            im_max: g.im_max,
            n_im: g.n_im,
        }
    }
}

/// Opaque run configuration.
pub struct IonjcConfig(RunConfig);

/// Opaque motional density matrix.
pub struct IonjcDensityMatrix(DensityMatrixVib);

/// Opaque P-function element table.
pub struct IonjcElementTable(PElementTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(status: IonjcStatus, message: impl Into<String>) -> IonjcStatus {
    set_last_error(message.into());
    status
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard<F>(f: F) -> IonjcStatus
where
    F: FnOnce() -> Result<(), IonjcStatus>,
{
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IonjcStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(IonjcStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: ionjc::Result<T>) -> Result<T, IonjcStatus> {
    r.map_err(|e| fail(IonjcStatus::from(&e), e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, IonjcStatus> {
    if p.is_null() {
        return Err(fail(IonjcStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(IonjcStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, IonjcStatus> {
    p.as_ref()
        .ok_or_else(|| fail(IonjcStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], IonjcStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(IonjcStatus::NullPointer, format!("`{name}` is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a, T>(p: *mut T, len: usize, name: &str) -> Result<&'a mut [T], IonjcStatus> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(fail(IonjcStatus::NullPointer, format!("`{name}` is null")));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), IonjcStatus> {
    if out.is_null() {
        return Err(fail(IonjcStatus::NullPointer, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn ionjc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ionjc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `key=value` config text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ionjc_config_parse(text: *const c_char, out: *mut *mut IonjcConfig) -> IonjcStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let config = lift(cli_io::parse_config(text))?;
        put(out, IonjcConfig(config))
    })
}

/// Loads a figure preset by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ionjc_config_preset(name: *const c_char, out: *mut *mut IonjcConfig) -> IonjcStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let config = lift(cli_io::preset(name))?;
        put(out, IonjcConfig(config))
    })
}

/// Canonical config text. Free the result with [`ionjc_string_free`].
///
/// # Safety
/// `config` must come from this library; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ionjc_config_to_string(config: *const IonjcConfig, out: *mut *mut c_char) -> IonjcStatus {
    guard(|| {
        let config = ref_arg(config, "config")?;
        if out.is_null() {
            return Err(fail(IonjcStatus::NullPointer, "`out` is null"));
        }
        let text = CString::new(config.0.to_config_string()).unwrap_or_default();
        *out = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `config` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ionjc_config_free(config: *mut IonjcConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ionjc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the config and writes its CSV and JSON files into `out_dir`.
///
/// # Safety
/// `config` must come from this library; `out_dir` must be a NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn ionjc_run(config: *const IonjcConfig, out_dir: *const c_char) -> IonjcStatus {
    guard(|| {
        let config = ref_arg(config, "config")?;
        let dir = str_arg(out_dir, "out_dir")?;
        lift(cli_io::run(&config.0, Path::new(dir))).map(|_| ())
    })
}

/// Sideband matrix element `|κ| f_k(n)` connecting `|1, n+k>` and `|2, n>`.
///
/// # Safety
/// `params` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ionjc_sideband_element(
    params: *const IonjcModelParams,
    n: usize,
    out: *mut f64,
) -> IonjcStatus {
    guard(|| {
        let p = ModelParams::from(ref_arg(params, "params")?);
        lift(p.validate())?;
        let out = slice_out(out, 1, "out")?;
        out[0] = ionjc::fock_core::sideband_element(n, &p);
        Ok(())
    })
}

/// Time-ordered `σ22(τ)` with a classical pump, from `|1, α0>`.
///
/// # Safety
/// `taus` and `out` must each hold `len` doubles; `params` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ionjc_sigma22_time_ordered(
    params: *const IonjcModelParams,
    alpha0_re: f64,
    alpha0_im: f64,
    r: f64,
    tail_epsilon: f64,
    tol: f64,
    taus: *const f64,
    out: *mut f64,
    len: usize,
) -> IonjcStatus {
    guard(|| {
        let p = ModelParams::from(ref_arg(params, "params")?);
        lift(p.validate())?;
        let taus = slice_arg(taus, len, "taus")?;
        let out = slice_out(out, len, "out")?;
        let alpha0 = Complex64::new(alpha0_re, alpha0_im);
        let policy = TruncationPolicy::for_amplitudes(alpha0.norm(), 0.0, tail_epsilon);
        let values = lift(semiclassical::sigma22_time_ordered(alpha0, r, taus, &p, &policy, tol))?;
        out.copy_from_slice(&values);
        Ok(())
    })
}

/// Quantized-pump `σ22(t̃)` from `|level, β0, α0>`.
///
/// # Safety
/// `times` and `out` must each hold `len` doubles; `params` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ionjc_sigma22_quantized(
    params: *const IonjcModelParams,
    level: u8,
    alpha0_re: f64,
    alpha0_im: f64,
    beta0_re: f64,
    beta0_im: f64,
    tail_epsilon: f64,
    times: *const f64,
    out: *mut f64,
    len: usize,
) -> IonjcStatus {
    guard(|| {
        let p = ModelParams::from(ref_arg(params, "params")?);
        let times = slice_arg(times, len, "times")?;
        let out = slice_out(out, len, "out")?;
        let alpha0 = Complex64::new(alpha0_re, alpha0_im);
        let beta0 = Complex64::new(beta0_re, beta0_im);
        let policy = TruncationPolicy::for_amplitudes(alpha0.norm(), beta0.norm(), tail_epsilon);
        let values =
            lift(quantized_pump::sigma22_quantized_series(level, times, alpha0, beta0, &p, &policy))?;
        out.copy_from_slice(&values);
        Ok(())
    })
}

/// Reduced motional density matrix at `t̃` for `|level, β0, α0>`.
///
/// # Safety
/// `params` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ionjc_rho_vib(
    params: *const IonjcModelParams,
    t: f64,
    level: u8,
    alpha0_re: f64,
    alpha0_im: f64,
    beta0_re: f64,
    beta0_im: f64,
    tail_epsilon: f64,
    out: *mut *mut IonjcDensityMatrix,
) -> IonjcStatus {
    guard(|| {
        let p = ModelParams::from(ref_arg(params, "params")?);
        let alpha0 = Complex64::new(alpha0_re, alpha0_im);
        let beta0 = Complex64::new(beta0_re, beta0_im);
        let policy = TruncationPolicy::for_amplitudes(alpha0.norm(), beta0.norm(), tail_epsilon);
        let rho = lift(quantized_pump::rho_vib(t, level, alpha0, beta0, &p, &policy))?;
        put(out, IonjcDensityMatrix(rho))
    })
}

/// Side length of the density matrix.
///
/// # Safety
/// `rho` must come from this library or be null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn ionjc_rho_dim(rho: *const IonjcDensityMatrix) -> usize {
    rho.as_ref().map_or(0, |r| r.0.dim())
}

/// Copies the matrix into `re` and `im`, row-major, `dim * dim` each.
///
/// # Safety
/// `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ionjc_rho_copy(
    rho: *const IonjcDensityMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> IonjcStatus {
    guard(|| {
        let rho = ref_arg(rho, "rho")?;
        let dim = rho.0.dim();
        if len < dim * dim {
            return Err(fail(IonjcStatus::BufferTooSmall, format!("need {} entries", dim * dim)));
        }
        let re = slice_out(re, len, "re")?;
        let im = slice_out(im, len, "im")?;
        for i in 0..dim {
            for j in 0..dim {
                let z = rho.0.matrix[(i, j)];
                re[i * dim + j] = z.re;
                im[i * dim + j] = z.im;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `rho` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ionjc_rho_free(rho: *mut IonjcDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Builds (or loads from `cache_dir`, when non-null) the element table for
/// density matrices of side `n_max + 1`.
///
/// # Safety
/// `grid` and `out` must be valid; `cache_dir` is null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ionjc_element_table_new(
    n_max: usize,
    w: f64,
    quadrature_order: usize,
    grid: *const IonjcGrid,
    cache_dir: *const c_char,
    out: *mut *mut IonjcElementTable,
) -> IonjcStatus {
    guard(|| {
        let grid = GridSpec::from(ref_arg(grid, "grid")?);
        let filter = FilterSpec { w, quadrature_order };
        lift(filter.validate())?;
        lift(grid.validate())?;
        let table = if cache_dir.is_null() {
            lift(PElementTable::build(n_max, &filter, &grid))?
        } else {
            let dir = str_arg(cache_dir, "cache_dir")?;
            lift(PElementTable::load_or_build(Path::new(dir), n_max, &filter, &grid))?.0
        };
        put(out, IonjcElementTable(table))
    })
}

/// Evaluates `P_Ω` on the table's grid. `out` receives `n_re * n_im` values;
/// `certified_error` (may be null) the quadrature error bound.
///
/// # Safety
/// Handles must come from this library; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ionjc_element_table_apply(
    table: *const IonjcElementTable,
    rho: *const IonjcDensityMatrix,
    out: *mut f64,
    len: usize,
    certified_error: *mut f64,
) -> IonjcStatus {
    guard(|| {
        let table = ref_arg(table, "table")?;
        let rho = ref_arg(rho, "rho")?;
        if rho.0.dim() != table.0.n_max + 1 {
            return Err(fail(
                IonjcStatus::ValidationError,
                format!("density matrix side {} does not match table n_max {}", rho.0.dim(), table.0.n_max),
            ));
        }
        let points = table.0.grid.len();
        if len < points {
            return Err(fail(IonjcStatus::BufferTooSmall, format!("need {points} entries")));
        }
        let field = lift(table.0.apply(&rho.0.matrix))?;
        slice_out(out, points, "out")?.copy_from_slice(&field.values);
        if let Some(e) = certified_error.as_mut() {
            *e = field.certified_error;
        }
        Ok(())
    })
}

/// # Safety
/// `table` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ionjc_element_table_free(table: *mut IonjcElementTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}
