//! Labeled tensor-product Hilbert spaces of two-level registers.
//!
//! A [`StateVector`] is a dense amplitude vector over an ordered list of
//! [`Register`]s. The first register is the most significant digit of the
//! basis index: for registers `[r0, r1, r2]` the amplitude of
//! `|b0 b1 b2⟩` lives at index `4*b0 + 2*b1 + b2`.
//!
//! States are values. Every operation returns a new state and nothing is
//! renormalized implicitly, so sub-normalized vectors (lossy reflection)
//! propagate unchanged until a measurement or an explicit
//! [`StateVector::normalized`].

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, RngExt};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::{Matrix, C64};

/// Allowed deviation from unit norm for product-state factors.
pub const FACTOR_NORM_TOLERANCE: f64 = 1e-9;

/// A labeled two-level register.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Register {
    label: String,
    basis: [String; 2],
}

impl Register {
    pub fn new(label: impl Into<String>, zero: impl Into<String>, one: impl Into<String>) -> Self {
        Register {
            label: label.into(),
            basis: [zero.into(), one.into()],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String; 2] {
        &self.basis
    }

    pub fn basis_name(&self, index: usize) -> Option<&str> {
        self.basis.get(index).map(String::as_str)
    }
}

/// Basis in which a register was measured.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MeasurementBasis {
    Computational,
    /// The named basis vectors were rotated onto the computational basis
    /// before a computational measurement.
    Custom(Vec<String>),
}

/// Outcome of one projective measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub register_label: String,
    pub basis: MeasurementBasis,
    pub outcome: usize,
    /// Born-rule probability of `outcome` relative to the input norm.
    pub probability: f64,
}

/// One branch of an enumerated measurement.
#[derive(Debug, Clone)]
pub struct Branch {
    pub outcome: usize,
    /// Squared norm of the projected component (not renormalized), so the
    /// branch probabilities sum to the input squared norm.
    pub probability: f64,
    /// Projected state, register kept, not renormalized.
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    registers: Vec<Register>,
    amplitudes: Vec<C64>,
}

fn check_unique(registers: &[Register]) -> Result<()> {
    let mut seen = HashSet::new();
    for r in registers {
        if !seen.insert(r.label()) {
            return Err(Error::DuplicateLabel(r.label().to_string()));
        }
    }
    Ok(())
}

impl StateVector {
    /// Builds a state from raw amplitudes in the documented index order.
    pub fn from_amplitudes(registers: Vec<Register>, amplitudes: Vec<C64>) -> Result<Self> {
        check_unique(&registers)?;
        let expected = registers.iter().map(Register::dimension).product::<usize>();
        if expected != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        Ok(StateVector {
            registers,
            amplitudes,
        })
    }

    /// Kronecker product of normalized single-register factors, in order.
    pub fn product<I>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Register, [C64; 2])>,
    {
        let mut registers = Vec::new();
        let mut amplitudes = vec![C64::new(1.0, 0.0)];
        for (register, factor) in parts {
            let norm_sqr = factor.iter().map(C64::norm_sqr).sum::<f64>();
            if (norm_sqr - 1.0).abs() > FACTOR_NORM_TOLERANCE {
                return Err(Error::NotNormalized {
                    label: register.label().to_string(),
                    norm_sqr,
                });
            }
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| factor.iter().map(move |f| a * f))
                .collect();
            registers.push(register);
        }
        check_unique(&registers)?;
        Ok(StateVector {
            registers,
            amplitudes,
        })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.registers.iter().map(Register::label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.label() == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn has_register(&self, label: &str) -> bool {
        self.position(label).is_ok()
    }

    fn stride(&self, position: usize) -> usize {
        1 << (self.registers.len() - 1 - position)
    }

    fn stride_of(&self, label: &str) -> Result<usize> {
        self.position(label).map(|p| self.stride(p))
    }

    /// Basis digits (one per register) for a flat index.
    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.registers.len())
            .map(|p| (index / self.stride(p)) & 1)
            .collect()
    }

    /// Flat index for per-register basis digits.
    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .enumerate()
            .map(|(p, d)| d * self.stride(p))
            .sum()
    }

    pub fn amplitude(&self, digits: &[usize]) -> C64 {
        self.amplitudes[self.index_of(digits)]
    }

    /// Human-readable ket for a flat index, e.g. `|R,a2,up⟩`.
    pub fn ket_name(&self, index: usize) -> String {
        let names: Vec<&str> = self
            .digits(index)
            .into_iter()
            .zip(&self.registers)
            .map(|(d, r)| r.basis[d].as_str())
            .collect();
        format!("|{}⟩", names.join(","))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(C64::norm_sqr).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        StateVector {
            registers: self.registers.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn same_layout(&self, other: &StateVector) -> bool {
        self.registers == other.registers
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if !self.same_layout(other) {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let mut registers = self.registers.clone();
        registers.extend(other.registers.iter().cloned());
        check_unique(&registers)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector {
            registers,
            amplitudes,
        })
    }

    /// Applies `matrix` on the subspace of `targets` (first target most
    /// significant within the matrix), identity elsewhere. The matrix need
    /// not be unitary.
    pub fn apply(&self, targets: &[&str], matrix: &Matrix) -> Result<Self> {
        self.apply_where(targets, matrix, None)
    }

    /// Like [`apply`](Self::apply) but only inside the branch where
    /// `control` is in basis state `value`.
    pub fn apply_controlled(
        &self,
        targets: &[&str],
        matrix: &Matrix,
        control: &str,
        value: usize,
    ) -> Result<Self> {
        if value >= 2 {
            return Err(Error::BasisIndex {
                label: control.to_string(),
                index: value,
            });
        }
        if targets.contains(&control) {
            return Err(Error::DuplicateLabel(control.to_string()));
        }
        let stride = self.stride_of(control)?;
        self.apply_where(targets, matrix, Some((stride, value)))
    }

    fn apply_where(
        &self,
        targets: &[&str],
        matrix: &Matrix,
        control: Option<(usize, usize)>,
    ) -> Result<Self> {
        let strides = targets
            .iter()
            .map(|t| self.stride_of(t))
            .collect::<Result<Vec<_>>>()?;
        let unique: HashSet<_> = targets.iter().collect();
        if unique.len() != targets.len() {
            return Err(Error::DuplicateLabel(
                targets
                    .iter()
                    .find(|t| targets.iter().filter(|u| u == t).count() > 1)
                    .map(|t| t.to_string())
                    .unwrap_or_default(),
            ));
        }
        let dim = 1usize << targets.len();
        if matrix.dim() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }

        // offsets[j]: displacement of sub-basis state j from its base index
        let offsets: Vec<usize> = (0..dim)
            .map(|j| {
                strides
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| (j >> (targets.len() - 1 - k)) & 1 == 1)
                    .map(|(_, s)| s)
                    .sum()
            })
            .collect();
        let target_mask: usize = strides.iter().sum();

        let mut out = self.amplitudes.clone();
        let mut local = vec![C64::new(0.0, 0.0); dim];
        for base in (0..self.amplitudes.len()).filter(|i| i & target_mask == 0) {
            if let Some((stride, value)) = control {
                if (base / stride) & 1 != value {
                    continue;
                }
            }
            for (j, off) in offsets.iter().enumerate() {
                local[j] = self.amplitudes[base + off];
            }
            for (row, off) in offsets.iter().enumerate() {
                out[base + off] = (0..dim).map(|col| matrix[[row, col]] * local[col]).sum();
            }
        }
        Ok(StateVector {
            registers: self.registers.clone(),
            amplitudes: out,
        })
    }

    /// Component with `label` fixed to `index`, the register removed.
    /// The result is not renormalized.
    pub fn extract(&self, label: &str, index: usize) -> Result<Self> {
        if index >= 2 {
            return Err(Error::BasisIndex {
                label: label.to_string(),
                index,
            });
        }
        let position = self.position(label)?;
        let stride = self.stride(position);
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i / stride) & 1 == index)
            .map(|(_, a)| *a)
            .collect();
        let mut registers = self.registers.clone();
        registers.remove(position);
        Ok(StateVector {
            registers,
            amplitudes,
        })
    }

    /// Every projective outcome of `label` with its unnormalized projection.
    pub fn measure_all_branches(&self, label: &str) -> Result<Vec<Branch>> {
        let stride = self.stride_of(label)?;
        Ok((0..2)
            .map(|outcome| {
                let amplitudes: Vec<C64> = self
                    .amplitudes
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        if (i / stride) & 1 == outcome {
                            *a
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                    .collect();
                let state = StateVector {
                    registers: self.registers.clone(),
                    amplitudes,
                };
                Branch {
                    outcome,
                    probability: state.norm_sqr(),
                    state,
                }
            })
            .collect())
    }

    /// Samples a computational-basis outcome by the Born rule and returns the
    /// projected, renormalized state.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        label: &str,
        rng: &mut R,
    ) -> Result<(MeasurementRecord, StateVector)> {
        let total = self.norm_sqr();
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let branches = self.measure_all_branches(label)?;
        let draw: f64 = rng.random::<f64>() * total;
        let chosen = if draw < branches[0].probability {
            &branches[0]
        } else {
            &branches[1]
        };
        let record = MeasurementRecord {
            register_label: label.to_string(),
            basis: MeasurementBasis::Computational,
            outcome: chosen.outcome,
            probability: chosen.probability / total,
        };
        Ok((record, chosen.state.normalized()?))
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i){}", a.re, a.im, self.ket_name(i))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// |⟨x|y⟩|² for normalized inputs; inputs are normalized first, so
/// sub-normalized vectors compare by direction only.
pub fn fidelity_up_to_global_phase(x: &StateVector, y: &StateVector) -> Result<f64> {
    let overlap = x.inner(y)?;
    let nx = x.norm_sqr();
    let ny = y.norm_sqr();
    if nx <= 0.0 || ny <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((overlap.norm_sqr() / (nx * ny)).clamp(0.0, 1.0))
}
