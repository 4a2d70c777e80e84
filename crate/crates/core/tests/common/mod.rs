//! Analytic reference states for the integration and acceptance tests.
//!
//! Every oracle is written as an explicit sum of product kets with the
//! symbolic coefficients α (a.pol), γ (a.spatial), β (b.pol), δ (b.spatial)
//! and is independent of the circuit code under test.

#![allow(dead_code)]

use hypercnot::hilbert::{fidelity_up_to_global_phase, Register, StateVector};
use hypercnot::protocols::{labels, spin_register, two_photon_registers, PhotonQubits};
use hypercnot::C64;
use rand::{Rng, RngExt};

pub type Qubit = [C64; 2];

pub const STATE_EQ: f64 = 1.0 - 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const ZERO: Qubit = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
pub const ONE: Qubit = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];

pub fn random_amplitude<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(
        rng.random::<f64>() * 2.0 - 1.0,
        rng.random::<f64>() * 2.0 - 1.0,
    )
}

pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Qubit {
    loop {
        let q = [random_amplitude(rng), random_amplitude(rng)];
        let n = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
        if n > 1e-3 {
            return [q[0] / n, q[1] / n];
        }
    }
}

pub fn random_photon<R: Rng + ?Sized>(rng: &mut R) -> PhotonQubits {
    PhotonQubits::new(random_qubit(rng), random_qubit(rng))
}

/// Random normalized vector of `len` amplitudes.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..len).map(|_| random_amplitude(rng)).collect();
    let n = v.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// (x₁ + x₂)/√2, (x₁ − x₂)/√2.
pub fn primed(q: Qubit) -> Qubit {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [(q[0] + q[1]) * s, (q[0] - q[1]) * s]
}

/// x₁|0⟩ − x₂|1⟩.
pub fn sign(q: Qubit) -> Qubit {
    [q[0], -q[1]]
}

/// x₂|0⟩ + x₁|1⟩.
pub fn swap(q: Qubit) -> Qubit {
    [q[1], q[0]]
}

pub fn only(q: Qubit, index: usize) -> Qubit {
    let mut out = [c(0.0, 0.0); 2];
    out[index] = q[index];
    out
}

/// Tensor product with the first factor most significant.
pub fn outer(factors: &[Qubit]) -> Vec<C64> {
    factors.iter().fold(vec![c(1.0, 0.0)], |acc, q| {
        acc.iter().flat_map(|a| [a * q[0], a * q[1]]).collect()
    })
}

pub fn sum(terms: &[(C64, Vec<C64>)]) -> Vec<C64> {
    let mut out = vec![c(0.0, 0.0); terms[0].1.len()];
    for (k, v) in terms {
        for (o, x) in out.iter_mut().zip(v) {
            *o += k * x;
        }
    }
    out
}

/// Combines a polarization part over (a.pol, b.pol[, e2]) with a spatial
/// part over (a.spatial, b.spatial[, e1]) into the register order
/// a.pol, a.spatial, b.pol, b.spatial[, e1, e2].
pub fn join(pol: &[C64], spatial: &[C64]) -> Vec<C64> {
    if pol.len() == 4 {
        (0..16)
            .map(|i| {
                let (ap, asp, bp, bs) = ((i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1);
                pol[ap * 2 + bp] * spatial[asp * 2 + bs]
            })
            .collect()
    } else {
        (0..64)
            .map(|i| {
                let d = |k: usize| (i >> (5 - k)) & 1;
                let (ap, asp, bp, bs, e1, e2) = (d(0), d(1), d(2), d(3), d(4), d(5));
                pol[ap * 4 + bp * 2 + e2] * spatial[asp * 4 + bs * 2 + e1]
            })
            .collect()
    }
}

pub fn four(amps: Vec<C64>) -> StateVector {
    StateVector::from_amplitudes(two_photon_registers(), amps).unwrap()
}

pub fn six_registers() -> Vec<Register> {
    let mut regs = two_photon_registers();
    regs.push(spin_register(labels::E1));
    regs.push(spin_register(labels::E2));
    regs
}

pub fn six(amps: Vec<C64>) -> StateVector {
    StateVector::from_amplitudes(six_registers(), amps).unwrap()
}

pub fn fidelity(x: &StateVector, y: &StateVector) -> f64 {
    fidelity_up_to_global_phase(x, y).unwrap()
}

/// Symbolic coefficients of a product input.
#[derive(Debug, Clone, Copy)]
pub struct Coefficients {
    pub alpha: Qubit,
    pub gamma: Qubit,
    pub beta: Qubit,
    pub delta: Qubit,
}

impl Coefficients {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Coefficients {
            alpha: random_qubit(rng),
            gamma: random_qubit(rng),
            beta: random_qubit(rng),
            delta: random_qubit(rng),
        }
    }

    pub fn photons(&self) -> (PhotonQubits, PhotonQubits) {
        (
            PhotonQubits::new(self.alpha, self.gamma),
            PhotonQubits::new(self.beta, self.delta),
        )
    }

    pub fn input(&self) -> StateVector {
        let (a, b) = self.photons();
        hypercnot::protocols::two_photon_product(a, b).unwrap()
    }
}

const UP: usize = 0;
const DOWN: usize = 1;

fn spin(index: usize) -> Qubit {
    if index == UP {
        ZERO
    } else {
        ONE
    }
}

/// (i|↑⟩ + |↓⟩)/√2.
pub fn prepared() -> Qubit {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [c(0.0, s), c(s, 0.0)]
}

/// Photon `a` and spin e1 after the spatial controlled-Z; photon b and
/// spin e2 untouched.
pub fn spatial_cz_oracle(k: &Coefficients) -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pol = outer(&[k.alpha, k.beta, prepared()]);
    let spatial = sum(&[
        (c(s, 0.0), outer(&[k.gamma, k.delta, spin(UP)])),
        (c(s, 0.0), outer(&[sign(k.gamma), k.delta, spin(DOWN)])),
    ]);
    six(join(&pol, &spatial))
}

/// After the hybrid controlled-Z of photon `a` with both spins. The photon-b
/// factors are passed in; primed ones give the state after b's input
/// Hadamards.
pub fn hybrid_cz_oracle(k: &Coefficients, beta: Qubit, delta: Qubit) -> StateVector {
    let pol = sum(&[
        (c(1.0, 0.0), outer(&[k.alpha, beta, spin(UP)])),
        (c(1.0, 0.0), outer(&[sign(k.alpha), beta, spin(DOWN)])),
    ]);
    let spatial = sum(&[
        (c(1.0, 0.0), outer(&[k.gamma, delta, spin(UP)])),
        (c(1.0, 0.0), outer(&[sign(k.gamma), delta, spin(DOWN)])),
    ]);
    six(join(&pol, &spatial))
}

/// After photon b leaves both cavities (before the spin Hadamards).
pub fn target_scatter_oracle(k: &Coefficients) -> StateVector {
    let (bp, dp) = (primed(k.beta), primed(k.delta));
    let spatial = sum(&[
        (c(1.0, 0.0), outer(&[only(k.gamma, 0), dp, spin(UP)])),
        (
            c(1.0, 0.0),
            outer(&[only(k.gamma, 1), sign(dp), spin(DOWN)]),
        ),
    ]);
    let pol = sum(&[
        (c(1.0, 0.0), outer(&[only(k.alpha, 0), bp, spin(UP)])),
        (
            c(1.0, 0.0),
            outer(&[only(k.alpha, 1), sign(bp), spin(DOWN)]),
        ),
    ]);
    six(join(&pol, &spatial))
}

/// After the spin Hadamards.
pub fn spin_hadamard_oracle(k: &Coefficients) -> StateVector {
    let (bp, dp) = (primed(k.beta), primed(k.delta));
    let one = c(1.0, 0.0);
    let spatial = sum(&[
        (one, outer(&[only(k.gamma, 0), dp, spin(UP)])),
        (one, outer(&[only(k.gamma, 1), sign(dp), spin(UP)])),
        (one, outer(&[only(k.gamma, 0), dp, spin(DOWN)])),
        (-one, outer(&[only(k.gamma, 1), sign(dp), spin(DOWN)])),
    ]);
    let pol = sum(&[
        (one, outer(&[only(k.alpha, 0), bp, spin(UP)])),
        (one, outer(&[only(k.alpha, 1), sign(bp), spin(UP)])),
        (one, outer(&[only(k.alpha, 0), bp, spin(DOWN)])),
        (-one, outer(&[only(k.alpha, 1), sign(bp), spin(DOWN)])),
    ]);
    six(join(&pol, &spatial))
}

/// After b's output Hadamards, ready for spin readout.
pub fn entangled_oracle(k: &Coefficients) -> StateVector {
    let one = c(1.0, 0.0);
    let spatial = sum(&[
        (one, outer(&[only(k.gamma, 0), k.delta, spin(UP)])),
        (one, outer(&[only(k.gamma, 1), swap(k.delta), spin(UP)])),
        (one, outer(&[only(k.gamma, 0), k.delta, spin(DOWN)])),
        (-one, outer(&[only(k.gamma, 1), swap(k.delta), spin(DOWN)])),
    ]);
    let pol = sum(&[
        (one, outer(&[only(k.alpha, 0), k.beta, spin(UP)])),
        (one, outer(&[only(k.alpha, 1), swap(k.beta), spin(UP)])),
        (one, outer(&[only(k.alpha, 0), k.beta, spin(DOWN)])),
        (-one, outer(&[only(k.alpha, 1), swap(k.beta), spin(DOWN)])),
    ]);
    six(join(&pol, &spatial))
}

/// Output of the complete gate after feed-forward.
pub fn hyper_cnot_oracle(k: &Coefficients) -> StateVector {
    let one = c(1.0, 0.0);
    let spatial = sum(&[
        (one, outer(&[only(k.gamma, 0), k.delta])),
        (one, outer(&[only(k.gamma, 1), swap(k.delta)])),
    ]);
    let pol = sum(&[
        (one, outer(&[only(k.alpha, 0), k.beta])),
        (one, outer(&[only(k.alpha, 1), swap(k.beta)])),
    ]);
    four(join(&pol, &spatial))
}

/// CNOT⊗CNOT applied to an arbitrary 16-amplitude vector.
pub fn cnot_cnot(amps: &[C64]) -> Vec<C64> {
    let mut out = vec![c(0.0, 0.0); 16];
    for (i, a) in amps.iter().enumerate() {
        let (ap, asp, bp, bs) = ((i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1);
        let j = (ap << 3) | (asp << 2) | ((bp ^ ap) << 1) | (bs ^ asp);
        out[j] = *a;
    }
    out
}

const R: Qubit = ZERO;
const L: Qubit = ONE;

fn plus() -> Qubit {
    [c(1.0, 0.0), c(1.0, 0.0)]
}

fn minus() -> Qubit {
    [c(1.0, 0.0), c(-1.0, 0.0)]
}

/// ½(|RR⟩ + |LL⟩)(|a₁b₁⟩ + |a₂b₂⟩).
pub fn hyperentangled_oracle() -> StateVector {
    let one = c(1.0, 0.0);
    let pol = sum(&[(one, outer(&[R, R])), (one, outer(&[L, L]))]);
    let spatial = sum(&[(one, outer(&[ZERO, ZERO])), (one, outer(&[ONE, ONE]))]);
    four(join(&pol, &spatial))
}

/// After the Hadamards on photon a.
pub fn control_hadamard_oracle() -> StateVector {
    let one = c(1.0, 0.0);
    let pol = sum(&[(one, outer(&[plus(), R])), (one, outer(&[minus(), L]))]);
    let spatial = sum(&[(one, outer(&[plus(), ZERO])), (one, outer(&[minus(), ONE]))]);
    four(join(&pol, &spatial))
}

/// After the path-2 conditioned phase flip; order a.pol, a.spatial, b.pol,
/// b.spatial.
pub fn phase_flip_oracle() -> StateVector {
    let one = c(1.0, 0.0);
    four(sum(&[
        (one, outer(&[plus(), ZERO, R, ZERO])),
        (-one, outer(&[minus(), ONE, R, ZERO])),
        (one, outer(&[plus(), ZERO, R, ONE])),
        (one, outer(&[minus(), ONE, R, ONE])),
        (one, outer(&[minus(), ZERO, L, ZERO])),
        (-one, outer(&[plus(), ONE, L, ZERO])),
        (one, outer(&[minus(), ZERO, L, ONE])),
        (one, outer(&[plus(), ONE, L, ONE])),
    ]))
}

/// ½[|a₁b₁⟩(|RR⟩ + |LL⟩) − |a₂b₂⟩(|RR⟩ − |LL⟩)].
pub fn cluster_oracle() -> StateVector {
    let one = c(1.0, 0.0);
    four(sum(&[
        (one, outer(&[R, ZERO, R, ZERO])),
        (one, outer(&[L, ZERO, L, ZERO])),
        (-one, outer(&[R, ONE, R, ONE])),
        (one, outer(&[L, ONE, L, ONE])),
    ]))
}

/// Reduced density matrix of photon a (a.pol, a.spatial) for a normalized
/// two-photon state.
pub fn reduced_control(state: &StateVector) -> [[C64; 4]; 4] {
    let amps = state.amplitudes();
    let mut rho = [[c(0.0, 0.0); 4]; 4];
    for (i, row) in rho.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for b in 0..4 {
                *cell += amps[i * 4 + b] * amps[j * 4 + b].conj();
            }
        }
    }
    rho
}
