//! Multi-stage protocols built on the QD-cavity interaction.
//!
//! Photon `a` is the control and photon `b` the target. Each photon carries a
//! polarization qubit (R, L) and a spatial-mode qubit (path 1, path 2). Two
//! cavity spins `e1` and `e2` mediate the gate: `e1` couples to the spatial
//! modes, `e2` to the polarization.
//!
//! The two-photon register order is always
//! `[a.pol, a.spatial, b.pol, b.spatial]`, with the spins appended as
//! `[e1, e2]` while they are in use.
//!
//! Wave-plate placement inside the spatial stage: the path-1 arm flips the
//! L port of its CPBS (both polarizations follow the R rule), the path-2 arm
//! flips the R port (L rule) and carries WP₁. WP₂ sits in both paths after
//! the polarization cavity. This placement reproduces the stage-by-stage
//! states of the gate exactly.

use std::f64::consts::FRAC_1_SQRT_2;

use ndarray::array;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cavity::{qd_scatter, Interaction};
use crate::error::{Error, Result};
use crate::hilbert::{MeasurementBasis, MeasurementRecord, Register, StateVector};
use crate::optics::{apply_element, conditional_element, routed_scatter, Element, Port};
use crate::{Matrix, C64};

pub mod labels {
    pub const A_POL: &str = "a.pol";
    pub const A_SPATIAL: &str = "a.spatial";
    pub const B_POL: &str = "b.pol";
    pub const B_SPATIAL: &str = "b.spatial";
    pub const E1: &str = "e1";
    pub const E2: &str = "e2";
    /// Auxiliary readout photon.
    pub const AUX: &str = "aux.pol";
}

use labels::*;

/// Tolerance on the input norm for protocol entry points.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-9;

/// Branch probability below which a spin branch is considered empty.
const EMPTY_BRANCH: f64 = 1e-300;

pub fn polarization_register(label: &str) -> Register {
    Register::new(label, "R", "L")
}

pub fn spatial_register(label: &str) -> Register {
    let photon = label.split('.').next().unwrap_or("x");
    Register::new(label, format!("{photon}1"), format!("{photon}2"))
}

pub fn spin_register(label: &str) -> Register {
    Register::new(label, "up", "down")
}

pub fn two_photon_registers() -> Vec<Register> {
    vec![
        polarization_register(A_POL),
        spatial_register(A_SPATIAL),
        polarization_register(B_POL),
        spatial_register(B_SPATIAL),
    ]
}

/// Polarization and spatial amplitudes of one photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonQubits {
    pub polarization: [C64; 2],
    pub spatial: [C64; 2],
}

impl PhotonQubits {
    pub fn new(polarization: [C64; 2], spatial: [C64; 2]) -> Self {
        PhotonQubits {
            polarization,
            spatial,
        }
    }

    /// Computational basis photon, `pol` and `spatial` in {0, 1}.
    pub fn basis(pol: usize, spatial: usize) -> Self {
        let ket = |b: usize| {
            let mut k = [C64::new(0.0, 0.0); 2];
            k[b] = C64::new(1.0, 0.0);
            k
        };
        PhotonQubits::new(ket(pol), ket(spatial))
    }

    /// Equal superposition in both degrees of freedom.
    pub fn uniform() -> Self {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        PhotonQubits::new([s, s], [s, s])
    }
}

/// `|a⟩ ⊗ |b⟩` in the two-photon register order.
pub fn two_photon_product(a: PhotonQubits, b: PhotonQubits) -> Result<StateVector> {
    StateVector::product([
        (polarization_register(A_POL), a.polarization),
        (spatial_register(A_SPATIAL), a.spatial),
        (polarization_register(B_POL), b.polarization),
        (spatial_register(B_SPATIAL), b.spatial),
    ])
}

/// Spin prepared as (i|↑⟩ + |↓⟩)/√2 by rotating |↑⟩.
pub fn prepared_spin(label: &str) -> Result<StateVector> {
    let up = StateVector::product([(
        spin_register(label),
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    )])?;
    apply_element(&up, Element::SpinRotPlus, label)
}

fn require(state: &StateVector, labels: &[&str]) -> Result<()> {
    match labels.iter().find(|l| !state.has_register(l)) {
        Some(missing) => Err(Error::MalformedInput(format!(
            "missing register `{missing}`"
        ))),
        None => Ok(()),
    }
}

fn validate_two_photon(state: &StateVector) -> Result<()> {
    if state.registers() != two_photon_registers().as_slice() {
        return Err(Error::MalformedInput(
            "expected registers [a.pol, a.spatial, b.pol, b.spatial]".into(),
        ));
    }
    let n = state.norm_sqr();
    if (n - 1.0).abs() > INPUT_NORM_TOLERANCE {
        return Err(Error::MalformedInput(format!(
            "input norm² is {n}, expected 1"
        )));
    }
    Ok(())
}

/// Spatial-mode controlled-Z with spin `spin` as control: the photon's two
/// paths each pass a CPBS/HWP₁ sandwich around the cavity, path 2 then
/// passes WP₁.
pub fn spatial_cz(
    state: &StateVector,
    pol: &str,
    spatial: &str,
    spin: &str,
    interaction: Interaction,
) -> Result<StateVector> {
    require(state, &[pol, spatial, spin])?;
    let scatter = interaction.reflection_pair().scattering_matrix();
    let path1 = routed_scatter(&scatter, Port::Reflected);
    let wp1 = ndarray::linalg::kron(&Element::WpU1.matrix(), &Matrix::eye(2));
    let path2 = wp1.dot(&routed_scatter(&scatter, Port::Transmitted));
    state
        .apply_controlled(&[pol, spin], &path1, spatial, 0)?
        .apply_controlled(&[pol, spin], &path2, spatial, 1)
}

/// Polarization controlled-Z with spin `spin` as control: direct
/// reflection followed by WP₂ in both paths.
pub fn polarization_cz(
    state: &StateVector,
    pol: &str,
    spin: &str,
    interaction: Interaction,
) -> Result<StateVector> {
    require(state, &[pol, spin])?;
    let scattered = qd_scatter(state, pol, spin, interaction)?;
    apply_element(&scattered, Element::WpU2, pol)
}

/// Hybrid four-qubit CZ of photon `a` with both spins: `e1` controls a π
/// phase on path 2, `e2` a π phase on |L⟩. Spins must already be prepared.
pub fn cz_stage(state: &StateVector, interaction: Interaction) -> Result<StateVector> {
    require(state, &[A_POL, A_SPATIAL, E1, E2])?;
    let s = spatial_cz(state, A_POL, A_SPATIAL, E1, interaction)?;
    polarization_cz(&s, A_POL, E2, interaction)
}

/// Every intermediate state of the gate before spin measurement.
#[derive(Debug, Clone)]
pub struct HyperCnotStages {
    /// Photons with both spins prepared.
    pub input: StateVector,
    /// Photon `a` after the spatial cavity.
    pub after_spatial_cz: StateVector,
    /// Photon `a` after both cavities.
    pub after_cz: StateVector,
    /// Target photon after its input Hadamards.
    pub after_target_hadamards: StateVector,
    /// Spins after the (i|↑⟩ ± |↓⟩)/√2 rotation.
    pub after_spin_rotation: StateVector,
    /// Target photon after both cavities.
    pub after_target_scatter: StateVector,
    pub after_spin_hadamards: StateVector,
    /// Target photon after its output Hadamards; ready for spin readout.
    pub entangled: StateVector,
}

fn hadamard_photon(state: &StateVector, pol: &str, spatial: &str) -> Result<StateVector> {
    let s = apply_element(state, Element::BeamSplitter, spatial)?;
    apply_element(&s, Element::HwpH, pol)
}

pub fn hyper_cnot_stages(input: &StateVector, interaction: Interaction) -> Result<HyperCnotStages> {
    validate_two_photon(input)?;
    let with_spins = input
        .tensor(&prepared_spin(E1)?)?
        .tensor(&prepared_spin(E2)?)?;

    let after_spatial_cz = spatial_cz(&with_spins, A_POL, A_SPATIAL, E1, interaction)?;
    let after_cz = polarization_cz(&after_spatial_cz, A_POL, E2, interaction)?;

    let after_target_hadamards = hadamard_photon(&after_cz, B_POL, B_SPATIAL)?;
    let rotated = apply_element(&after_target_hadamards, Element::SpinRotPlus, E1)?;
    let after_spin_rotation = apply_element(&rotated, Element::SpinRotPlus, E2)?;

    let s = spatial_cz(&after_spin_rotation, B_POL, B_SPATIAL, E1, interaction)?;
    let after_target_scatter = polarization_cz(&s, B_POL, E2, interaction)?;

    let s = apply_element(&after_target_scatter, Element::SpinH, E1)?;
    let after_spin_hadamards = apply_element(&s, Element::SpinH, E2)?;
    let entangled = hadamard_photon(&after_spin_hadamards, B_POL, B_SPATIAL)?;

    Ok(HyperCnotStages {
        input: with_spins,
        after_spatial_cz,
        after_cz,
        after_target_hadamards,
        after_spin_rotation,
        after_target_scatter,
        after_spin_hadamards,
        entangled,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpinOutcome {
    Up,
    Down,
}

impl SpinOutcome {
    pub fn from_index(index: usize) -> Self {
        if index == 0 {
            SpinOutcome::Up
        } else {
            SpinOutcome::Down
        }
    }

    pub fn index(self) -> usize {
        match self {
            SpinOutcome::Up => 0,
            SpinOutcome::Down => 1,
        }
    }
}

/// Classically conditioned correction on the control photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Correction {
    /// |a₂⟩ → −|a₂⟩, applied when `e1` reads ↓.
    SpatialSignFlip,
    /// |L⟩_a → −|L⟩_a, applied when `e2` reads ↓.
    PolarizationSignFlip,
}

fn sign_flip() -> Matrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    array![[l, o], [o, -l]]
}

pub fn corrections_for(outcomes: [SpinOutcome; 2]) -> Vec<Correction> {
    let mut ops = Vec::new();
    if outcomes[0] == SpinOutcome::Down {
        ops.push(Correction::SpatialSignFlip);
    }
    if outcomes[1] == SpinOutcome::Down {
        ops.push(Correction::PolarizationSignFlip);
    }
    ops
}

/// Applies the corrections implied by the spin outcomes `[e1, e2]`.
pub fn feed_forward(state: &StateVector, outcomes: [SpinOutcome; 2]) -> Result<StateVector> {
    let mut s = state.clone();
    for op in corrections_for(outcomes) {
        let target = match op {
            Correction::SpatialSignFlip => A_SPATIAL,
            Correction::PolarizationSignFlip => A_POL,
        };
        s = s.apply(&[target], &sign_flip())?;
    }
    Ok(s)
}

/// One execution of the gate for one pair of spin outcomes.
#[derive(Debug, Clone)]
pub struct GateRun {
    pub interaction: Interaction,
    pub spin_outcomes: [SpinOutcome; 2],
    pub feed_forward_ops: Vec<Correction>,
    /// Corrected two-photon state, normalized.
    pub final_state: StateVector,
    /// Norm² of the photon-spin state after all reflections, before any
    /// measurement (1 in ideal mode).
    pub survival_probability: f64,
    /// Probability of these spin outcomes given survival.
    pub branch_probability: f64,
    /// Seed of the PRNG used for sampling, if any.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchMode {
    /// All four spin branches.
    Enumerate,
    /// One branch drawn by the Born rule.
    Sample(u64),
}

fn finish_branch(
    entangled: &StateVector,
    outcomes: [SpinOutcome; 2],
    interaction: Interaction,
    survival: f64,
    seed: Option<u64>,
) -> Result<Option<GateRun>> {
    let projected = entangled
        .extract(E1, outcomes[0].index())?
        .extract(E2, outcomes[1].index())?;
    let weight = projected.norm_sqr();
    if weight <= EMPTY_BRANCH {
        return Ok(None);
    }
    let corrected = feed_forward(&projected, outcomes)?;
    Ok(Some(GateRun {
        interaction,
        spin_outcomes: outcomes,
        feed_forward_ops: corrections_for(outcomes),
        final_state: corrected.normalized()?,
        survival_probability: survival,
        branch_probability: weight / survival,
        seed,
    }))
}

/// Runs the hyper-CNOT on a normalized two-photon state.
///
/// In [`BranchMode::Enumerate`] one [`GateRun`] is returned per non-empty
/// spin branch; sampling returns exactly one.
pub fn hyper_cnot(
    input: &StateVector,
    interaction: Interaction,
    mode: BranchMode,
) -> Result<Vec<GateRun>> {
    let entangled = hyper_cnot_stages(input, interaction)?.entangled;
    let survival = entangled.norm_sqr();
    if survival <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    match mode {
        BranchMode::Enumerate => {
            let mut runs = Vec::with_capacity(4);
            for o1 in [SpinOutcome::Up, SpinOutcome::Down] {
                for o2 in [SpinOutcome::Up, SpinOutcome::Down] {
                    if let Some(run) =
                        finish_branch(&entangled, [o1, o2], interaction, survival, None)?
                    {
                        runs.push(run);
                    }
                }
            }
            Ok(runs)
        }
        BranchMode::Sample(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (first, collapsed) = entangled.measure(E1, &mut rng)?;
            let (second, _) = collapsed.measure(E2, &mut rng)?;
            let outcomes = [
                SpinOutcome::from_index(first.outcome),
                SpinOutcome::from_index(second.outcome),
            ];
            let run = finish_branch(&entangled, outcomes, interaction, survival, Some(seed))?
                .ok_or(Error::ZeroNorm)?;
            Ok(vec![run])
        }
    }
}

/// Convenience wrapper for product inputs.
pub fn hyper_cnot_product(
    control: PhotonQubits,
    target: PhotonQubits,
    interaction: Interaction,
    mode: BranchMode,
) -> Result<Vec<GateRun>> {
    hyper_cnot(&two_photon_product(control, target)?, interaction, mode)
}

/// Ideal action of the gate on a basis pattern `[a.pol, a.spatial, b.pol,
/// b.spatial]`.
pub fn hyper_cnot_basis_image(pattern: [usize; 4]) -> [usize; 4] {
    let [ap, asp, bp, bs] = pattern;
    [ap, asp, bp ^ ap, bs ^ asp]
}

/// One readout outcome of a spin via an auxiliary photon.
#[derive(Debug, Clone)]
pub struct ReadoutBranch {
    pub record: MeasurementRecord,
    /// Unnormalized probability of this outcome.
    pub weight: f64,
    /// State with the auxiliary photon removed, not renormalized.
    pub state: StateVector,
}

fn readout_basis_adjoint() -> Matrix {
    // rows are ⟨(R + iL)/√2| and ⟨(R − iL)/√2|
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let i = C64::i();
    array![[s, -i * s], [s, i * s]]
}

/// Reflects an auxiliary (|R⟩ + |L⟩)/√2 photon off the cavity of `spin` and
/// measures it in {(|R⟩ ± i|L⟩)/√2}; outcome 0 (+) reports ↑, 1 (−) ↓.
pub fn spin_readout_branches(
    state: &StateVector,
    spin: &str,
    interaction: Interaction,
) -> Result<Vec<ReadoutBranch>> {
    require(state, &[spin])?;
    let total = state.norm_sqr();
    if total <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let aux = StateVector::product([(polarization_register(AUX), [s, s])])?;
    let scattered = qd_scatter(&state.tensor(&aux)?, AUX, spin, interaction)?;
    let rotated = scattered.apply(&[AUX], &readout_basis_adjoint())?;
    rotated
        .measure_all_branches(AUX)?
        .into_iter()
        .map(|b| {
            Ok(ReadoutBranch {
                record: MeasurementRecord {
                    register_label: AUX.to_string(),
                    basis: MeasurementBasis::Custom(vec![
                        "(R+iL)/sqrt2".into(),
                        "(R-iL)/sqrt2".into(),
                    ]),
                    outcome: b.outcome,
                    probability: b.probability / total,
                },
                weight: b.probability,
                state: b.state.extract(AUX, b.outcome)?,
            })
        })
        .collect()
}

/// Sampled variant of [`spin_readout_branches`]; the returned state is
/// renormalized.
pub fn spin_readout<R: rand::Rng + ?Sized>(
    state: &StateVector,
    spin: &str,
    interaction: Interaction,
    rng: &mut R,
) -> Result<(MeasurementRecord, StateVector)> {
    use rand::RngExt;
    let branches = spin_readout_branches(state, spin, interaction)?;
    let total: f64 = branches.iter().map(|b| b.weight).sum();
    let draw = rng.random::<f64>() * total;
    let chosen = if draw < branches[0].weight {
        &branches[0]
    } else {
        &branches[1]
    };
    Ok((chosen.record.clone(), chosen.state.normalized()?))
}

/// Stage states of the cluster-state preparation for one spin branch.
#[derive(Debug, Clone)]
pub struct ClusterPreparation {
    pub run: GateRun,
    /// Hyperentangled Bell state out of the gate.
    pub hyperentangled: StateVector,
    /// After the polarization and spatial Hadamards on photon `a`.
    pub after_control_hadamards: StateVector,
    /// After the path-2 conditioned phase flip HWP₃.
    pub after_phase_flip: StateVector,
    /// Final cluster state, after Hadamards on photon `b`.
    pub cluster: StateVector,
}

/// (|R⟩ + |L⟩)_a (|a₁⟩ + |a₂⟩) |R⟩_b |b₁⟩ / 2.
pub fn cluster_input() -> Result<StateVector> {
    two_photon_product(PhotonQubits::uniform(), PhotonQubits::basis(0, 0))
}

/// Prepares the two-photon four-qubit cluster state; one entry per spin
/// branch (all identical in ideal mode).
pub fn prepare_cluster(interaction: Interaction) -> Result<Vec<ClusterPreparation>> {
    hyper_cnot(&cluster_input()?, interaction, BranchMode::Enumerate)?
        .into_iter()
        .map(|run| {
            let hyperentangled = run.final_state.clone();
            let after_control_hadamards = hadamard_photon(&hyperentangled, A_POL, A_SPATIAL)?;
            let after_phase_flip = conditional_element(
                &after_control_hadamards,
                Element::HwpPhaseFlip,
                A_POL,
                A_SPATIAL,
                1,
            )?;
            let cluster = hadamard_photon(&after_phase_flip, B_POL, B_SPATIAL)?;
            Ok(ClusterPreparation {
                run,
                hyperentangled,
                after_control_hadamards,
                after_phase_flip,
                cluster,
            })
        })
        .collect()
}

/// The target cluster state
/// ½[|a₁b₁⟩(|RR⟩ + |LL⟩) − |a₂b₂⟩(|RR⟩ − |LL⟩)].
pub fn expected_cluster_state() -> Result<StateVector> {
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    let reference = StateVector::from_amplitudes(two_photon_registers(), amps.clone())?;
    for (ap, asp, bp, bs, v) in [
        (0, 0, 0, 0, 0.5),
        (1, 0, 1, 0, 0.5),
        (0, 1, 0, 1, -0.5),
        (1, 1, 1, 1, 0.5),
    ] {
        amps[reference.index_of(&[ap, asp, bp, bs])] = C64::new(v, 0.0);
    }
    StateVector::from_amplitudes(two_photon_registers(), amps)
}

/// Two-qubit Bell states, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "Phi+",
            BellState::PhiMinus => "Phi-",
            BellState::PsiPlus => "Psi+",
            BellState::PsiMinus => "Psi-",
        }
    }

    /// Amplitude of `|x_a x_b⟩`.
    pub fn amplitude(self, a: usize, b: usize) -> f64 {
        let s = FRAC_1_SQRT_2;
        match (self, a, b) {
            (BellState::PhiPlus, 0, 0) | (BellState::PhiPlus, 1, 1) => s,
            (BellState::PhiMinus, 0, 0) => s,
            (BellState::PhiMinus, 1, 1) => -s,
            (BellState::PsiPlus, 0, 1) | (BellState::PsiPlus, 1, 0) => s,
            (BellState::PsiMinus, 0, 1) => s,
            (BellState::PsiMinus, 1, 0) => -s,
            _ => 0.0,
        }
    }
}

/// Bell state in polarization times Bell state in spatial mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HyperBellState {
    pub polarization: BellState,
    pub spatial: BellState,
}

impl HyperBellState {
    pub fn new(polarization: BellState, spatial: BellState) -> Self {
        HyperBellState {
            polarization,
            spatial,
        }
    }

    /// All 16, ordered by [`index`](Self::index).
    pub fn all() -> Vec<HyperBellState> {
        BellState::ALL
            .iter()
            .flat_map(|p| {
                BellState::ALL
                    .iter()
                    .map(move |s| HyperBellState::new(*p, *s))
            })
            .collect()
    }

    /// 4·pol + spatial.
    pub fn index(self) -> usize {
        4 * self.polarization.index() + self.spatial.index()
    }

    pub fn name(self) -> String {
        format!(
            "{}(pol) {}(spatial)",
            self.polarization.name(),
            self.spatial.name()
        )
    }

    pub fn state(self) -> Result<StateVector> {
        let reference =
            StateVector::from_amplitudes(two_photon_registers(), vec![C64::new(0.0, 0.0); 16])?;
        let amps = (0..16)
            .map(|i| {
                let [ap, asp, bp, bs] = <[usize; 4]>::try_from(reference.digits(i)).unwrap();
                C64::new(
                    self.polarization.amplitude(ap, bp) * self.spatial.amplitude(asp, bs),
                    0.0,
                )
            })
            .collect();
        StateVector::from_amplitudes(two_photon_registers(), amps)
    }
}

/// Probability above which a detection pattern counts as deterministic.
pub const DETERMINISTIC_THRESHOLD: f64 = 1.0 - 1e-10;

/// Result of running the analyzer on one input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellDecoding {
    /// Most likely detection pattern `[a.pol, a.spatial, b.pol, b.spatial]`.
    pub pattern: [usize; 4],
    /// Probability of `pattern`, averaged over spin branches.
    pub confidence: f64,
    pub deterministic: bool,
    pub polarization: usize,
    pub spatial: usize,
}

impl BellDecoding {
    pub fn hyper_bell(&self) -> Option<HyperBellState> {
        Some(HyperBellState::new(
            BellState::from_index(self.polarization)?,
            BellState::from_index(self.spatial)?,
        ))
    }
}

/// Gate followed by Hadamards on both degrees of freedom of photon `a`,
/// then single-photon detection of all four qubits.
pub fn analyze_state(state: &StateVector, interaction: Interaction) -> Result<BellDecoding> {
    let runs = hyper_cnot(state, interaction, BranchMode::Enumerate)?;
    let mut distribution = [0.0f64; 16];
    for run in &runs {
        let out = hadamard_photon(&run.final_state, A_POL, A_SPATIAL)?;
        for (slot, a) in distribution.iter_mut().zip(out.amplitudes()) {
            *slot += run.branch_probability * a.norm_sqr();
        }
    }
    let (best, confidence) =
        distribution
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |acc, (i, p)| if p > acc.1 { (i, p) } else { acc },
            );
    let pattern = <[usize; 4]>::try_from(state.digits(best)).unwrap();
    let [ap, asp, bp, bs] = pattern;
    Ok(BellDecoding {
        pattern,
        confidence,
        deterministic: confidence >= DETERMINISTIC_THRESHOLD,
        polarization: 2 * bp + ap,
        spatial: 2 * bs + asp,
    })
}

pub fn analyze_hyper_bell(input: HyperBellState, interaction: Interaction) -> Result<BellDecoding> {
    analyze_state(&input.state()?, interaction)
}

/// Detection pattern of every hyperentangled Bell state in ideal mode.
pub fn bell_decoding_table() -> Result<Vec<(HyperBellState, BellDecoding)>> {
    HyperBellState::all()
        .into_iter()
        .map(|h| Ok((h, analyze_hyper_bell(h, Interaction::Ideal)?)))
        .collect()
}
