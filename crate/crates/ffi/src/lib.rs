//! C ABI over `sagnac-core`.
//!
//! Conventions:
//! - every fallible function returns a [`SagnacStatus`] and writes results
//!   through out-pointers, which are left untouched on failure;
//! - states and datasets are opaque handles, released with their `_free`
//!   function (passing NULL is a no-op);
//! - the message of the last failure on the calling thread is available from
//!   [`sagnac_last_error`];
//! - panics never cross the boundary; they surface as `SAGNAC_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use sagnac_core::detection::{DetectionScheme, SchemeKind};
use sagnac_core::network::{evolve_network, sagnac_elements};
use sagnac_core::sagnac::{rotation_phase, RotationParameters};
use sagnac_core::sources::{entanglement_entropy, squeezed_state, SqueezedSourceParams};
use sagnac_core::sweep::{emit, run_sweep, FringeDataset, OutputFormat, SweepConfig};
use sagnac_core::{Error, FockBasis, OccupationVector, PureState};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SagnacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Basis = 4,
    Truncation = 5,
    NotUnitary = 6,
    Unsupported = 7,
    Io = 8,
    OutOfRange = 9,
    Panic = 10,
}

impl From<&Error> for SagnacStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => SagnacStatus::Domain,
            Error::Basis(_) | Error::DimensionMismatch { .. } => SagnacStatus::Basis,
            Error::ModeIndex { .. } => SagnacStatus::OutOfRange,
            Error::Unsupported(_) => SagnacStatus::Unsupported,
            Error::NotUnitary { .. } => SagnacStatus::NotUnitary,
            Error::Truncation { .. } => SagnacStatus::Truncation,
            Error::InvalidConfig(_) | Error::Serialization(_) => SagnacStatus::InvalidArgument,
            Error::Io { .. } => SagnacStatus::Io,
        }
    }
}

/// A Fock-space pure state.
pub struct SagnacState(PureState);

/// A fringe dataset produced by a sweep.
pub struct SagnacDataset(FringeDataset);

/// One row of a dataset.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SagnacPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    pub closed_form: f64,
    pub abs_error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(status: SagnacStatus, msg: impl Into<String>) -> SagnacStatus {
    set_last_error(msg.into());
    status
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard<F>(f: F) -> SagnacStatus
where
    F: FnOnce() -> Result<(), SagnacStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SagnacStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(SagnacStatus::Panic, format!("panic: {msg}"))
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, SagnacStatus>;
}

impl<T> OrStatus<T> for Result<T, Error> {
    fn or_status(self) -> Result<T, SagnacStatus> {
        self.map_err(|e| fail(SagnacStatus::from(&e), e.to_string()))
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, SagnacStatus> {
    p.as_mut()
        .ok_or_else(|| fail(SagnacStatus::NullPointer, format!("`{name}` is NULL")))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &str) -> Result<&'a T, SagnacStatus> {
    p.as_ref()
        .ok_or_else(|| fail(SagnacStatus::NullPointer, format!("`{name}` is NULL")))
}

unsafe fn in_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, SagnacStatus> {
    if p.is_null() {
        return Err(fail(SagnacStatus::NullPointer, format!("`{name}` is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SagnacStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

unsafe fn in_counts<'a>(p: *const u32, len: usize) -> Result<&'a [u32], SagnacStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(SagnacStatus::NullPointer, "`counts` is NULL"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message of the last failure on this thread, or NULL if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sagnac_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sagnac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Rotation phase in radians. `fiber_length == 0` selects a single loop of
/// area `π radius²`.
#[no_mangle]
pub unsafe extern "C" fn sagnac_rotation_phase(
    radius: f64,
    angular_velocity: f64,
    wavelength: f64,
    fiber_length: f64,
    out_phi: *mut f64,
) -> SagnacStatus {
    guard(|| {
        let out = out_ref(out_phi, "out_phi")?;
        let params = RotationParameters::new(radius, angular_velocity, wavelength).with_fiber_length(fiber_length);
        *out = rotation_phase(&params).or_status()?;
        Ok(())
    })
}

/// Entropy of entanglement of the two-mode squeezed vacuum, in bits.
#[no_mangle]
pub unsafe extern "C" fn sagnac_entanglement_entropy(r: f64, out_bits: *mut f64) -> SagnacStatus {
    guard(|| {
        let out = out_ref(out_bits, "out_bits")?;
        *out = entanglement_entropy(r).or_status()?;
        Ok(())
    })
}

/// Number state `|counts[0], ..., counts[modes-1]>` in a basis of `modes`
/// modes truncated at `cutoff` total photons.
#[no_mangle]
pub unsafe extern "C" fn sagnac_state_fock(
    counts: *const u32,
    modes: usize,
    cutoff: usize,
    out_state: *mut *mut SagnacState,
) -> SagnacStatus {
    guard(|| {
        let out = out_ref(out_state, "out_state")?;
        let counts = in_counts(counts, modes)?;
        let basis = FockBasis::new(modes, cutoff).or_status()?;
        let state = PureState::fock(basis, OccupationVector::new(counts)).or_status()?;
        *out = Box::into_raw(Box::new(SagnacState(state)));
        Ok(())
    })
}

/// Truncated two-mode squeezed vacuum on modes 0 and 1 of `modes` modes. The
/// pair cutoff is the smallest whose discarded tail is within `tail_eps`;
/// pass `pair_cutoff >= 0` to fix it instead.
#[no_mangle]
pub unsafe extern "C" fn sagnac_state_squeezed(
    r: f64,
    theta: f64,
    tail_eps: f64,
    pair_cutoff: i64,
    modes: usize,
    out_state: *mut *mut SagnacState,
) -> SagnacStatus {
    guard(|| {
        let out = out_ref(out_state, "out_state")?;
        let params = if pair_cutoff >= 0 {
            SqueezedSourceParams::new(r, theta, pair_cutoff as usize, tail_eps)
        } else {
            SqueezedSourceParams::auto(r, theta, tail_eps)
        }
        .or_status()?;
        let state = squeezed_state(&params, modes).or_status()?;
        *out = Box::into_raw(Box::new(SagnacState(state)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sagnac_state_free(state: *mut SagnacState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

#[no_mangle]
pub unsafe extern "C" fn sagnac_state_modes(state: *const SagnacState, out_modes: *mut usize) -> SagnacStatus {
    guard(|| {
        let s = in_ref(state, "state")?;
        *out_ref(out_modes, "out_modes")? = s.0.modes();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sagnac_state_norm_sqr(state: *const SagnacState, out_norm_sqr: *mut f64) -> SagnacStatus {
    guard(|| {
        let s = in_ref(state, "state")?;
        *out_ref(out_norm_sqr, "out_norm_sqr")? = s.0.norm_sqr();
        Ok(())
    })
}

/// `<n_mode>`.
#[no_mangle]
pub unsafe extern "C" fn sagnac_state_number(
    state: *const SagnacState,
    mode: usize,
    out_mean: *mut f64,
) -> SagnacStatus {
    guard(|| {
        let s = in_ref(state, "state")?;
        let out = out_ref(out_mean, "out_mean")?;
        *out = s.0.number_expectation(mode).or_status()?;
        Ok(())
    })
}

/// Amplitude of the occupation `counts` (length = number of modes).
#[no_mangle]
pub unsafe extern "C" fn sagnac_state_amplitude(
    state: *const SagnacState,
    counts: *const u32,
    modes: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SagnacStatus {
    guard(|| {
        let s = in_ref(state, "state")?;
        let counts = in_counts(counts, modes)?;
        if modes != s.0.modes() {
            return Err(fail(
                SagnacStatus::InvalidArgument,
                format!("occupation has {modes} modes, state has {}", s.0.modes()),
            ));
        }
        let re = out_ref(out_re, "out_re")?;
        let im = out_ref(out_im, "out_im")?;
        let a = s.0.amplitude(&OccupationVector::new(counts));
        *re = a.re;
        *im = a.im;
        Ok(())
    })
}

/// Propagates `state` through the Sagnac loop at phase `phi` (modes 0 and 1),
/// returning a new handle.
#[no_mangle]
pub unsafe extern "C" fn sagnac_state_evolve_sagnac(
    state: *const SagnacState,
    phi: f64,
    out_state: *mut *mut SagnacState,
) -> SagnacStatus {
    guard(|| {
        let s = in_ref(state, "state")?;
        let out = out_ref(out_state, "out_state")?;
        let evolved = evolve_network(&s.0, &sagnac_elements(phi)).or_status()?;
        *out = Box::into_raw(Box::new(SagnacState(evolved)));
        Ok(())
    })
}

/// Evaluates a detection scheme (by name, e.g. `"g2_normalized"`, `"p4_2x2"`)
/// on the input state at phase `phi`. Four-photon schemes use balanced
/// detector splitters.
#[no_mangle]
pub unsafe extern "C" fn sagnac_detect(
    state: *const SagnacState,
    scheme: *const c_char,
    phi: f64,
    out_value: *mut f64,
) -> SagnacStatus {
    guard(|| {
        let s = in_ref(state, "state")?;
        let kind: SchemeKind = in_str(scheme, "scheme")?.parse().or_status()?;
        let out = out_ref(out_value, "out_value")?;
        *out = DetectionScheme::new(kind).evaluate(&s.0, phi).or_status()?;
        Ok(())
    })
}

/// Runs a sweep described by a JSON object with the fields of the sweep
/// configuration (`scheme`, `r`, `theta`, `phi_min`, `phi_max`, `steps`,
/// `tail_eps`, `pair_cutoff`, `splitter_t2`, `normalize`, ...); missing
/// fields take their defaults.
#[no_mangle]
pub unsafe extern "C" fn sagnac_sweep_run(
    config_json: *const c_char,
    out_dataset: *mut *mut SagnacDataset,
) -> SagnacStatus {
    guard(|| {
        let json = in_str(config_json, "config_json")?;
        let out = out_ref(out_dataset, "out_dataset")?;
        let config: SweepConfig = serde_json::from_str(json).map_err(Error::from).or_status()?;
        let data = run_sweep(&config).or_status()?;
        *out = Box::into_raw(Box::new(SagnacDataset(data)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sagnac_dataset_free(dataset: *mut SagnacDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

#[no_mangle]
pub unsafe extern "C" fn sagnac_dataset_len(dataset: *const SagnacDataset, out_len: *mut usize) -> SagnacStatus {
    guard(|| {
        let d = in_ref(dataset, "dataset")?;
        *out_ref(out_len, "out_len")? = d.0.points.len();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn sagnac_dataset_point(
    dataset: *const SagnacDataset,
    index: usize,
    out_point: *mut SagnacPoint,
) -> SagnacStatus {
    guard(|| {
        let d = in_ref(dataset, "dataset")?;
        let out = out_ref(out_point, "out_point")?;
        let p = d.0.points.get(index).ok_or_else(|| {
            fail(
                SagnacStatus::OutOfRange,
                format!("index {index} out of range for {} points", d.0.points.len()),
            )
        })?;
        *out = SagnacPoint {
            r: p.r,
            theta: p.theta,
            phi: p.phi,
            value: p.value,
            closed_form: p.closed_form,
            abs_error: p.abs_error,
        };
        Ok(())
    })
}

/// Pair cutoff used by the sweep's squeezed source, or -1 without one.
#[no_mangle]
pub unsafe extern "C" fn sagnac_dataset_pair_cutoff(
    dataset: *const SagnacDataset,
    out_cutoff: *mut i64,
) -> SagnacStatus {
    guard(|| {
        let d = in_ref(dataset, "dataset")?;
        *out_ref(out_cutoff, "out_cutoff")? = d.0.config.n_cut.map_or(-1, |n| n as i64);
        Ok(())
    })
}

/// Writes the dataset to `path` as `"csv"` or `"json"`.
#[no_mangle]
pub unsafe extern "C" fn sagnac_dataset_write(
    dataset: *const SagnacDataset,
    path: *const c_char,
    format: *const c_char,
) -> SagnacStatus {
    guard(|| {
        let d = in_ref(dataset, "dataset")?;
        let path = in_str(path, "path")?;
        let format: OutputFormat = in_str(format, "format")?.parse().or_status()?;
        emit(&d.0, format, Some(Path::new(path))).or_status()
    })
}
