//! Deterministic state-vector simulation of a photonic spatial-polarization
//! hyper-CNOT gate built from quantum-dot spins in one-sided microcavities.
//!
//! The crate is layered bottom-up:
//!
//! - [`hilbert`]: labeled two-level registers, dense state vectors, operator
//!   embedding and projective measurement.
//! - [`cavity`]: steady-state reflection coefficients of the QD-cavity system
//!   and the spin-dependent photon scattering operator.
//! - [`optics`]: fixed linear-optical elements and single-spin rotations.
//! - [`protocols`]: the hybrid CZ stage, the full hyper-CNOT with spin readout
//!   and feed-forward, cluster-state preparation and hyperentangled Bell-state
//!   analysis.
//! - [`analysis`]: closed-form fidelity/efficiency, simulation cross-checks
//!   and parameter sweeps.
//! - [`cli`]: the command-line frontend used by the `hypercnot` binary.

pub mod analysis;
pub mod cavity;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod optics;
pub mod protocols;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Dense complex matrix used for operators.
pub type Matrix = ndarray::Array2<C64>;
