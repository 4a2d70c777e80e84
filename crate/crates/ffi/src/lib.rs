//! C ABI for the `hypercnot` simulator.
//!
//! Conventions:
//! - every fallible function returns an [`HcStatus`]; on failure a message
//!   is available from [`hc_last_error`] on the same thread;
//! - results are written through out-pointers;
//! - [`HcState`] and [`HcGateRun`] are opaque heap handles released with
//!   their `_free` function;
//! - a null `*const HcCavityParams` selects the ideal interaction.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hypercnot::analysis;
use hypercnot::cavity::{CavityParams, Interaction, ReflectionPair};
use hypercnot::hilbert::{fidelity_up_to_global_phase, StateVector};
use hypercnot::protocols::{
    self, BellState, BranchMode, GateRun, HyperBellState, PhotonQubits, SpinOutcome,
};
use hypercnot::{Error, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotNormalized = 3,
    DimensionMismatch = 4,
    UnknownLabel = 5,
    ZeroNorm = 6,
    MalformedInput = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HcComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for HcComplex {
    fn from(z: C64) -> Self {
        HcComplex { re: z.re, im: z.im }
    }
}

impl From<HcComplex> for C64 {
    fn from(z: HcComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Cavity parameters in units of κ (κ itself is fixed to 1).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HcCavityParams {
    pub g: f64,
    pub kappa_s: f64,
    pub gamma: f64,
    /// ω − ω_c.
    pub probe_detuning: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HcReflection {
    pub r_cold: HcComplex,
    pub r_hot: HcComplex,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HcPerformance {
    pub fidelity: f64,
    pub efficiency: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HcPhoton {
    pub polarization: [HcComplex; 2],
    pub spatial: [HcComplex; 2],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HcBellDecoding {
    /// Detected [a.pol, a.spatial, b.pol, b.spatial].
    pub pattern: [u32; 4],
    pub confidence: f64,
    pub deterministic: bool,
    /// Decoded Bell index 0..3 (Φ+, Φ−, Ψ+, Ψ−) per degree of freedom.
    pub polarization: u32,
    pub spatial: u32,
}

/// Four-register two-photon state (a.pol, a.spatial, b.pol, b.spatial).
pub struct HcState(StateVector);

/// One spin branch of a gate run.
pub struct HcGateRun(GateRun);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(HcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::NotNormalized { .. } => HcStatus::NotNormalized,
            Error::DimensionMismatch { .. } | Error::LayoutMismatch => HcStatus::DimensionMismatch,
            Error::UnknownLabel(_) | Error::DuplicateLabel(_) => HcStatus::UnknownLabel,
            Error::ZeroNorm => HcStatus::ZeroNorm,
            Error::MalformedInput(_) => HcStatus::MalformedInput,
            _ => HcStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: HcStatus, msg: &str) -> Result<T, Failure> {
    Err(Failure(status, msg.to_string()))
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(HcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return fail(HcStatus::NullPointer, &format!("{what} is null"));
    }
    p.write(value);
    Ok(())
}

fn to_params(p: &HcCavityParams) -> Result<CavityParams, Failure> {
    Ok(CavityParams::new(p.g, p.kappa_s, p.gamma)?.with_detuning(p.probe_detuning)?)
}

unsafe fn interaction(params: *const HcCavityParams) -> Result<Interaction, Failure> {
    match params.as_ref() {
        None => Ok(Interaction::Ideal),
        Some(p) => Ok(Interaction::physical(&to_params(p)?)),
    }
}

fn outcome(v: u32) -> Result<SpinOutcome, Failure> {
    match v {
        0 => Ok(SpinOutcome::Up),
        1 => Ok(SpinOutcome::Down),
        _ => fail(
            HcStatus::InvalidArgument,
            "spin outcome must be 0 (up) or 1 (down)",
        ),
    }
}

fn bell(v: u32) -> Result<BellState, Failure> {
    BellState::from_index(v as usize)
        .ok_or_else(|| Failure(HcStatus::InvalidArgument, "Bell index must be 0..3".into()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Standard operating point: g = 0, κ_s = 0, γ = 0.1, ω − ω_c = 0.5.
#[no_mangle]
pub extern "C" fn hc_cavity_params_default() -> HcCavityParams {
    let d = CavityParams::default();
    HcCavityParams {
        g: d.g,
        kappa_s: d.kappa_s,
        gamma: d.gamma,
        probe_detuning: d.probe_detuning,
    }
}

/// Cold and hot cavity reflection coefficients.
///
/// # Safety
/// `params` and `out` must be null or valid for reads and writes.
#[no_mangle]
pub unsafe extern "C" fn hc_reflection(
    params: *const HcCavityParams,
    out: *mut HcReflection,
) -> HcStatus {
    guard(|| {
        let p = to_params(deref(params, "params")?)?;
        let pair = ReflectionPair::from_params(&p);
        write(
            out,
            HcReflection {
                r_cold: pair.r_cold.into(),
                r_hot: pair.r_hot.into(),
            },
            "out",
        )
    })
}

/// Closed-form fidelity and efficiency.
///
/// # Safety
/// `params` and `out` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hc_formula_performance(
    params: *const HcCavityParams,
    out: *mut HcPerformance,
) -> HcStatus {
    guard(|| {
        let p = analysis::formula_performance(&to_params(deref(params, "params")?)?);
        write(
            out,
            HcPerformance {
                fidelity: p.fidelity,
                efficiency: p.efficiency,
            },
            "out",
        )
    })
}

/// Builds `|a⟩ ⊗ |b⟩`; each factor must be normalized.
///
/// # Safety
/// Pointers must be null or valid; `*out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn hc_state_two_photon(
    control: *const HcPhoton,
    target: *const HcPhoton,
    out: *mut *mut HcState,
) -> HcStatus {
    guard(|| {
        let conv = |p: &HcPhoton| {
            PhotonQubits::new(
                [p.polarization[0].into(), p.polarization[1].into()],
                [p.spatial[0].into(), p.spatial[1].into()],
            )
        };
        let a = conv(deref(control, "control")?);
        let b = conv(deref(target, "target")?);
        let state = protocols::two_photon_product(a, b)?;
        write(out, Box::into_raw(Box::new(HcState(state))), "out")
    })
}

/// Builds a two-photon state from 16 amplitudes, index `8·a.pol +
/// 4·a.spatial + 2·b.pol + b.spatial`.
///
/// # Safety
/// `amplitudes` must point to `len` readable values.
#[no_mangle]
pub unsafe extern "C" fn hc_state_from_amplitudes(
    amplitudes: *const HcComplex,
    len: usize,
    out: *mut *mut HcState,
) -> HcStatus {
    guard(|| {
        if amplitudes.is_null() {
            return fail(HcStatus::NullPointer, "amplitudes is null");
        }
        let amps = std::slice::from_raw_parts(amplitudes, len)
            .iter()
            .map(|&z| z.into())
            .collect();
        let state = StateVector::from_amplitudes(protocols::two_photon_registers(), amps)?;
        write(out, Box::into_raw(Box::new(HcState(state))), "out")
    })
}

/// # Safety
/// `state` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_state_free(state: *mut HcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of amplitudes, 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_state_len(state: *const HcState) -> usize {
    state.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the amplitudes into `buffer` (capacity `len`).
///
/// # Safety
/// `buffer` must be writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn hc_state_amplitudes(
    state: *const HcState,
    buffer: *mut HcComplex,
    len: usize,
) -> HcStatus {
    guard(|| {
        let s = &deref(state, "state")?.0;
        if buffer.is_null() {
            return fail(HcStatus::NullPointer, "buffer is null");
        }
        if len < s.len() {
            return fail(
                HcStatus::BufferTooSmall,
                &format!("need {} amplitudes", s.len()),
            );
        }
        for (k, z) in s.amplitudes().iter().enumerate() {
            buffer.add(k).write((*z).into());
        }
        Ok(())
    })
}

/// |⟨x|y⟩|² of the normalized states.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hc_state_fidelity(
    x: *const HcState,
    y: *const HcState,
    out: *mut f64,
) -> HcStatus {
    guard(|| {
        let f = fidelity_up_to_global_phase(&deref(x, "x")?.0, &deref(y, "y")?.0)?;
        write(out, f, "out")
    })
}

/// Runs the gate and keeps the branch with spin outcomes `(e1, e2)`, each 0
/// for ↑ or 1 for ↓.
///
/// # Safety
/// Pointers must be null or valid; `*out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn hc_hyper_cnot_branch(
    input: *const HcState,
    params: *const HcCavityParams,
    e1: u32,
    e2: u32,
    out: *mut *mut HcGateRun,
) -> HcStatus {
    guard(|| {
        let wanted = [outcome(e1)?, outcome(e2)?];
        let runs = protocols::hyper_cnot(
            &deref(input, "input")?.0,
            interaction(params)?,
            BranchMode::Enumerate,
        )?;
        match runs.into_iter().find(|r| r.spin_outcomes == wanted) {
            Some(run) => write(out, Box::into_raw(Box::new(HcGateRun(run))), "out"),
            None => fail(HcStatus::ZeroNorm, "spin branch has zero probability"),
        }
    })
}

/// Runs the gate with spin outcomes drawn from a seeded generator.
///
/// # Safety
/// Pointers must be null or valid; `*out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn hc_hyper_cnot_sampled(
    input: *const HcState,
    params: *const HcCavityParams,
    seed: u64,
    out: *mut *mut HcGateRun,
) -> HcStatus {
    guard(|| {
        let mut runs = protocols::hyper_cnot(
            &deref(input, "input")?.0,
            interaction(params)?,
            BranchMode::Sample(seed),
        )?;
        let run = runs
            .pop()
            .ok_or_else(|| Failure(HcStatus::ZeroNorm, "no branch".into()))?;
        write(out, Box::into_raw(Box::new(HcGateRun(run))), "out")
    })
}

/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_gate_run_free(run: *mut HcGateRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Normalized output state after feed-forward, as a new handle.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hc_gate_run_state(
    run: *const HcGateRun,
    out: *mut *mut HcState,
) -> HcStatus {
    guard(|| {
        let state = deref(run, "run")?.0.final_state.clone();
        write(out, Box::into_raw(Box::new(HcState(state))), "out")
    })
}

/// Spin outcomes (0 ↑, 1 ↓), branch probability given survival, and
/// survival probability. Any out-pointer may be null.
///
/// # Safety
/// Non-null pointers must be valid; `outcomes` must hold two values.
#[no_mangle]
pub unsafe extern "C" fn hc_gate_run_info(
    run: *const HcGateRun,
    outcomes: *mut u32,
    branch_probability: *mut f64,
    survival_probability: *mut f64,
) -> HcStatus {
    guard(|| {
        let r = &deref(run, "run")?.0;
        if !outcomes.is_null() {
            outcomes.write(r.spin_outcomes[0].index() as u32);
            outcomes.add(1).write(r.spin_outcomes[1].index() as u32);
        }
        if !branch_probability.is_null() {
            branch_probability.write(r.branch_probability);
        }
        if !survival_probability.is_null() {
            survival_probability.write(r.survival_probability);
        }
        Ok(())
    })
}

/// Cluster state for spin branch (↑, ↑).
///
/// # Safety
/// Pointers must be null or valid; `*out` receives a new handle.
#[no_mangle]
pub unsafe extern "C" fn hc_prepare_cluster(
    params: *const HcCavityParams,
    out: *mut *mut HcState,
) -> HcStatus {
    guard(|| {
        let preps = protocols::prepare_cluster(interaction(params)?)?;
        let first = preps
            .into_iter()
            .next()
            .ok_or_else(|| Failure(HcStatus::ZeroNorm, "no branch".into()))?;
        write(out, Box::into_raw(Box::new(HcState(first.cluster))), "out")
    })
}

/// Decodes the hyperentangled Bell state with polarization index
/// `polarization` and spatial index `spatial` (0..3: Φ+, Φ−, Ψ+, Ψ−).
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn hc_analyze_hyper_bell(
    polarization: u32,
    spatial: u32,
    params: *const HcCavityParams,
    out: *mut HcBellDecoding,
) -> HcStatus {
    guard(|| {
        let h = HyperBellState::new(bell(polarization)?, bell(spatial)?);
        let d = protocols::analyze_hyper_bell(h, interaction(params)?)?;
        write(
            out,
            HcBellDecoding {
                pattern: d.pattern.map(|b| b as u32),
                confidence: d.confidence,
                deterministic: d.deterministic,
                polarization: d.polarization as u32,
                spatial: d.spatial as u32,
            },
            "out",
        )
    })
}
