//! Steady-state reflection of a probe photon from a one-sided QD-cavity.
//!
//! All rates are in units of the cavity decay rate κ (κ ≡ 1 by default).
//! Only the weak-excitation steady state is modelled (⟨σ_z⟩ = −1); there is
//! no time-domain integration.
//!
//! The spin-dependent phase table follows the ideal interaction map
//! `|R,↑⟩ → −i|R,↑⟩`, `|L,↑⟩ → |L,↑⟩`, `|R,↓⟩ → |R,↓⟩`, `|L,↓⟩ → −i|L,↓⟩`.
//! Pairs receiving `−i` are treated as cold (uncoupled, φ₀ = −π/2 at the
//! operating point) and pairs receiving `1` as hot (coupled, φ_h ≈ 0). Note
//! that this is the literal phase table; the transition rules as prose
//! (spin ↑ couples to L) would read the other way round.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::{Matrix, C64};

/// Side leakage above which the relative phase Δφ = −π/2 is no longer
/// reachable at the usual operating point. Advisory only.
pub const SIDE_LEAKAGE_PHASE_LIMIT: f64 = 1.3;

/// Physical parameters of one QD-cavity system, rates in units of κ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityParams {
    /// QD-cavity coupling strength g.
    pub g: f64,
    pub kappa: f64,
    /// Side leakage rate κ_s.
    pub kappa_s: f64,
    /// X⁻ dipole decay rate γ.
    pub gamma: f64,
    /// ω − ω_c.
    pub probe_detuning: f64,
    /// ω_X⁻ − ω_c.
    pub exciton_detuning: f64,
}

impl Default for CavityParams {
    /// Operating point ω − ω_c = κ/2, ω_X⁻ = ω_c, γ = 0.1κ, no leakage, g = 0.
    fn default() -> Self {
        CavityParams {
            g: 0.0,
            kappa: 1.0,
            kappa_s: 0.0,
            gamma: 0.1,
            probe_detuning: 0.5,
            exciton_detuning: 0.0,
        }
    }
}

impl CavityParams {
    /// Default operating point with the given coupling, side leakage and
    /// exciton decay.
    pub fn new(g: f64, kappa_s: f64, gamma: f64) -> Result<Self> {
        let params = CavityParams {
            g,
            kappa_s,
            gamma,
            ..Default::default()
        };
        params.validate()?;
        Ok(params)
    }

    /// Coupling given as a multiple of the total cavity loss, g = ratio·(κ + κ_s).
    pub fn with_coupling_ratio(ratio: f64, kappa_s: f64, gamma: f64) -> Result<Self> {
        Self::new(ratio * (1.0 + kappa_s), kappa_s, gamma)
    }

    pub fn with_detuning(mut self, probe_detuning: f64) -> Result<Self> {
        self.probe_detuning = probe_detuning;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.g,
            self.kappa,
            self.kappa_s,
            self.gamma,
            self.probe_detuning,
            self.exciton_detuning,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "kappa must be > 0, got {}",
                self.kappa
            )));
        }
        if self.kappa_s < 0.0 {
            return Err(Error::InvalidParams(format!(
                "kappa_s must be >= 0, got {}",
                self.kappa_s
            )));
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma must be >= 0, got {}",
                self.gamma
            )));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParams(format!(
                "g must be >= 0, got {}",
                self.g
            )));
        }
        Ok(())
    }

    /// Warning text when side leakage exceeds [`SIDE_LEAKAGE_PHASE_LIMIT`].
    pub fn side_leakage_warning(&self) -> Option<String> {
        (self.kappa_s >= SIDE_LEAKAGE_PHASE_LIMIT * self.kappa).then(|| {
            format!(
                "kappa_s = {} exceeds {}·kappa; the -pi/2 relative phase is not reachable",
                self.kappa_s, SIDE_LEAKAGE_PHASE_LIMIT
            )
        })
    }

    /// Same parameters with the dot decoupled.
    pub fn cold(&self) -> Self {
        CavityParams { g: 0.0, ..*self }
    }
}

/// Reflection coefficient with the dot coupled (hot cavity).
pub fn reflect_hot(params: &CavityParams) -> C64 {
    if params.g == 0.0 {
        return reflect_cold(params);
    }
    let i = C64::i();
    let kappa = params.kappa;
    // i(ω_X − ω) + γ/2 and i(ω_c − ω) + κ/2 + κ_s/2
    let dipole = i * (params.exciton_detuning - params.probe_detuning) + params.gamma / 2.0;
    let cavity = -i * params.probe_detuning + (kappa + params.kappa_s) / 2.0;
    C64::new(1.0, 0.0) - kappa * dipole / (dipole * cavity + params.g * params.g)
}

/// Reflection coefficient with the dot uncoupled (cold cavity).
pub fn reflect_cold(params: &CavityParams) -> C64 {
    let i = C64::i();
    let detune = -i * params.probe_detuning;
    (detune - params.kappa / 2.0 + params.kappa_s / 2.0)
        / (detune + params.kappa / 2.0 + params.kappa_s / 2.0)
}

/// Cold and hot reflection amplitudes of one cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReflectionPair {
    pub r_cold: C64,
    pub r_hot: C64,
}

impl ReflectionPair {
    /// Amplitudes that reproduce the ideal phase table exactly.
    pub const IDEAL: ReflectionPair = ReflectionPair {
        r_cold: C64::new(0.0, -1.0),
        r_hot: C64::new(1.0, 0.0),
    };

    pub fn new(r_cold: C64, r_hot: C64) -> Self {
        ReflectionPair { r_cold, r_hot }
    }

    pub fn from_params(params: &CavityParams) -> Self {
        ReflectionPair {
            r_cold: reflect_cold(params),
            r_hot: reflect_hot(params),
        }
    }

    pub fn phi_0(&self) -> f64 {
        self.r_cold.arg()
    }

    pub fn phi_h(&self) -> f64 {
        self.r_hot.arg()
    }

    /// φ_h − φ₀.
    pub fn delta_phi(&self) -> f64 {
        self.phi_h() - self.phi_0()
    }

    /// Faraday rotation angle for spin ↑, (φ₀ − φ_h)/2.
    pub fn faraday_up(&self) -> f64 {
        (self.phi_0() - self.phi_h()) / 2.0
    }

    pub fn faraday_down(&self) -> f64 {
        -self.faraday_up()
    }

    /// Diagonal scattering matrix on (polarization, spin) in the order
    /// R↑, R↓, L↑, L↓.
    pub fn scattering_matrix(&self) -> Matrix {
        let mut m = Array2::zeros((4, 4));
        m[[0, 0]] = self.r_cold;
        m[[1, 1]] = self.r_hot;
        m[[2, 2]] = self.r_hot;
        m[[3, 3]] = self.r_cold;
        m
    }
}

/// How photon-cavity reflections are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Interaction {
    /// Exact phase table, lossless.
    Ideal,
    /// Raw complex reflection amplitudes.
    Physical(ReflectionPair),
}

impl Interaction {
    pub fn physical(params: &CavityParams) -> Self {
        Interaction::Physical(ReflectionPair::from_params(params))
    }

    pub fn reflection_pair(&self) -> ReflectionPair {
        match self {
            Interaction::Ideal => ReflectionPair::IDEAL,
            Interaction::Physical(pair) => *pair,
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, Interaction::Ideal)
    }
}

/// Reflects the photon whose polarization register is `photon_pol` off the
/// cavity holding spin `spin`. Acts unconditionally on the two registers;
/// restricting the scattering to particular paths is up to the caller.
pub fn qd_scatter(
    state: &StateVector,
    photon_pol: &str,
    spin: &str,
    interaction: Interaction,
) -> Result<StateVector> {
    state.apply(
        &[photon_pol, spin],
        &interaction.reflection_pair().scattering_matrix(),
    )
}
