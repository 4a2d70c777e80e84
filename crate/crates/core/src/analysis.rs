//! Fidelity and efficiency of the gate under cavity imperfections.
//!
//! The closed form depends only on the reflection magnitudes |r₀| and |r_h|.
//! The simulation path runs the full circuit with raw complex amplitudes and
//! compares against the ideal run on the same input. The two efficiencies
//! agree exactly; the fidelities do not in general, since the closed form
//! ignores phase errors and branch structure.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::cavity::{CavityParams, Interaction, ReflectionPair};
use crate::error::{Error, Result};
use crate::hilbert::{fidelity_up_to_global_phase, StateVector};
use crate::protocols::{
    hyper_cnot, hyper_cnot_basis_image, two_photon_product, BranchMode, PhotonQubits,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Performance {
    pub fidelity: f64,
    pub efficiency: f64,
}

/// Value of the unnormalized fidelity expression at |r₀| = |r_h| = 1.
const LOSSLESS_FIDELITY_SCALE: f64 = 64.0;

/// Closed-form fidelity and efficiency from reflection magnitudes.
pub fn formula_from_magnitudes(r0: f64, rh: f64) -> Performance {
    let sum = r0 + rh;
    let squares = r0 * r0 + rh * rh;
    let interference = (r0 + rh).abs().powi(2) + (r0 - rh).abs().powi(2);
    let raw = (2.0 * sum * sum).powi(4) / (2.0 * interference * squares).powi(2) * sum.powi(4)
        / squares.powi(2);
    Performance {
        fidelity: raw / LOSSLESS_FIDELITY_SCALE,
        efficiency: (0.5 * squares).powi(4),
    }
}

/// Closed-form fidelity and efficiency at `params`.
pub fn formula_performance(params: &CavityParams) -> Performance {
    let pair = ReflectionPair::from_params(params);
    formula_from_magnitudes(pair.r_cold.norm(), pair.r_hot.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulatedPerformance {
    /// Branch-probability-weighted fidelity against the ideal output.
    pub fidelity: f64,
    pub worst_branch_fidelity: f64,
    /// Survival probability of the photons.
    pub efficiency: f64,
}

/// Uniform superposition in all four photonic qubits.
pub fn uniform_input() -> StateVector {
    two_photon_product(PhotonQubits::uniform(), PhotonQubits::uniform())
        .expect("uniform factors are normalized")
}

pub fn simulated_with_pair(
    pair: ReflectionPair,
    input: &StateVector,
) -> Result<SimulatedPerformance> {
    let ideal = hyper_cnot(input, Interaction::Ideal, BranchMode::Enumerate)?;
    let physical = hyper_cnot(input, Interaction::Physical(pair), BranchMode::Enumerate)?;
    let mut fidelity = 0.0;
    let mut worst = 1.0f64;
    let mut weight = 0.0;
    for run in &physical {
        let reference = ideal
            .iter()
            .find(|r| r.spin_outcomes == run.spin_outcomes)
            .unwrap_or(&ideal[0]);
        let f = fidelity_up_to_global_phase(&run.final_state, &reference.final_state)?;
        fidelity += run.branch_probability * f;
        weight += run.branch_probability;
        worst = worst.min(f);
    }
    Ok(SimulatedPerformance {
        fidelity: fidelity / weight,
        worst_branch_fidelity: worst,
        efficiency: physical.first().map_or(0.0, |r| r.survival_probability),
    })
}

pub fn simulated_performance(
    params: &CavityParams,
    input: &StateVector,
) -> Result<SimulatedPerformance> {
    params.validate()?;
    simulated_with_pair(ReflectionPair::from_params(params), input)
}

/// One row of the gate's truth table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthTableRow {
    /// `[a.pol, a.spatial, b.pol, b.spatial]`.
    pub input: [usize; 4],
    pub expected: [usize; 4],
    /// Most likely output pattern, over all branches (the worst branch if
    /// they disagree).
    pub observed: [usize; 4],
    pub fidelity: f64,
    pub worst_fidelity: f64,
    pub pass: bool,
}

/// Fidelity required of every branch for an ideal-mode row to pass.
pub const IDEAL_ROW_FIDELITY: f64 = 1.0 - 1e-10;

pub fn truth_table(interaction: Interaction) -> Result<Vec<TruthTableRow>> {
    let mut rows = Vec::with_capacity(16);
    for index in 0..16 {
        let input = [
            (index >> 3) & 1,
            (index >> 2) & 1,
            (index >> 1) & 1,
            index & 1,
        ];
        let expected = hyper_cnot_basis_image(input);
        let state = two_photon_product(
            PhotonQubits::basis(input[0], input[1]),
            PhotonQubits::basis(input[2], input[3]),
        )?;
        let reference = two_photon_product(
            PhotonQubits::basis(expected[0], expected[1]),
            PhotonQubits::basis(expected[2], expected[3]),
        )?;
        let runs = hyper_cnot(&state, interaction, BranchMode::Enumerate)?;
        let mut fidelity = 0.0;
        let mut worst = 1.0f64;
        let mut observed = expected;
        let mut all_match = true;
        for run in &runs {
            let f = fidelity_up_to_global_phase(&run.final_state, &reference)?;
            fidelity += run.branch_probability * f;
            let dominant = run
                .final_state
                .amplitudes()
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |acc, (i, a)| {
                    if a.norm_sqr() > acc.1 {
                        (i, a.norm_sqr())
                    } else {
                        acc
                    }
                })
                .0;
            let pattern = <[usize; 4]>::try_from(run.final_state.digits(dominant)).unwrap();
            if f < worst {
                worst = f;
                observed = pattern;
            }
            all_match &= pattern == expected;
        }
        let pass = all_match && (!interaction.is_ideal() || worst >= IDEAL_ROW_FIDELITY);
        rows.push(TruthTableRow {
            input,
            expected,
            observed,
            fidelity,
            worst_fidelity: worst,
            pass,
        });
    }
    Ok(rows)
}

/// Evenly spaced values `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let axis = Axis { lo, hi, steps };
        axis.validate()?;
        Ok(axis)
    }

    pub fn point(value: f64) -> Self {
        Axis {
            lo: value,
            hi: value,
            steps: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo < 0.0 {
            return Err(Error::InvalidRange(format!(
                "range {}..{} must be finite and non-negative",
                self.lo, self.hi
            )));
        }
        match self.steps {
            0 => Err(Error::InvalidRange("resolution must be at least 1".into())),
            1 if self.lo != self.hi => Err(Error::InvalidRange(
                "a single-step axis needs lo == hi".into(),
            )),
            1 => Ok(()),
            _ if self.hi <= self.lo => Err(Error::InvalidRange(format!(
                "range {}..{} is empty",
                self.lo, self.hi
            ))),
            _ => Ok(()),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    /// g/κ axis.
    pub g: Axis,
    /// κ_s/κ axis.
    pub kappa_s: Axis,
    pub gamma: f64,
    pub probe_detuning: f64,
    /// Also run the circuit simulation at every point.
    pub simulate: bool,
}

pub const DEFAULT_RESOLUTION: usize = 101;

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            g: Axis {
                lo: 0.0,
                hi: 3.0,
                steps: DEFAULT_RESOLUTION,
            },
            kappa_s: Axis {
                lo: 0.0,
                hi: 2.0,
                steps: DEFAULT_RESOLUTION,
            },
            gamma: 0.1,
            probe_detuning: 0.5,
            simulate: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerformancePoint {
    pub g_over_kappa: f64,
    pub kappa_s_over_kappa: f64,
    pub gamma_over_kappa: f64,
    pub f_formula: f64,
    pub eta_formula: f64,
    pub f_sim: Option<f64>,
    pub eta_sim: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub defaults: CavityParams,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub gamma_over_kappa: f64,
    /// g-major lattice order.
    pub grid: Vec<PerformancePoint>,
    pub provenance: Provenance,
}

pub const CSV_HEADER: &str = "g_over_kappa,kappa_s_over_kappa,gamma_over_kappa,F,eta";

pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.g.validate()?;
    spec.kappa_s.validate()?;
    let base = CavityParams::new(0.0, 0.0, spec.gamma)?.with_detuning(spec.probe_detuning)?;
    let lattice: Vec<(f64, f64)> = spec
        .g
        .values()
        .into_iter()
        .flat_map(|g| spec.kappa_s.values().into_iter().map(move |k| (g, k)))
        .collect();
    let input = uniform_input();
    let grid = lattice
        .par_iter()
        .map(|&(g, kappa_s)| {
            let params = CavityParams { g, kappa_s, ..base };
            let formula = formula_performance(&params);
            let sim = if spec.simulate {
                Some(simulated_performance(&params, &input)?)
            } else {
                None
            };
            Ok(PerformancePoint {
                g_over_kappa: g,
                kappa_s_over_kappa: kappa_s,
                gamma_over_kappa: spec.gamma,
                f_formula: formula.fidelity,
                eta_formula: formula.efficiency,
                f_sim: sim.map(|s| s.fidelity),
                eta_sim: sim.map(|s| s.efficiency),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        gamma_over_kappa: spec.gamma,
        grid,
        provenance: Provenance {
            defaults: base,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

impl SweepResult {
    pub fn has_simulation(&self) -> bool {
        self.grid.iter().any(|p| p.f_sim.is_some())
    }

    /// UTF-8, LF line endings, one row per lattice point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let sim = self.has_simulation();
        if sim {
            writeln!(out, "{CSV_HEADER},F_sim,eta_sim")?;
        } else {
            writeln!(out, "{CSV_HEADER}")?;
        }
        for p in &self.grid {
            write!(
                out,
                "{},{},{},{},{}",
                p.g_over_kappa,
                p.kappa_s_over_kappa,
                p.gamma_over_kappa,
                p.f_formula,
                p.eta_formula
            )?;
            if sim {
                write!(
                    out,
                    ",{},{}",
                    p.f_sim.unwrap_or(f64::NAN),
                    p.eta_sim.unwrap_or(f64::NAN)
                )?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ASCII")
    }
}

/// A reference operating point with its reported values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaperPoint {
    pub label: &'static str,
    /// g in units of κ + κ_s.
    pub coupling_ratio: f64,
    pub kappa_s: f64,
    pub fidelity: f64,
    pub efficiency: f64,
}

impl PaperPoint {
    pub fn params(&self) -> CavityParams {
        CavityParams::with_coupling_ratio(self.coupling_ratio, self.kappa_s, 0.1)
            .expect("reference parameters are valid")
    }
}

pub const PAPER_POINTS: [PaperPoint; 4] = [
    PaperPoint {
        label: "g=0.5(k+ks), ks=0",
        coupling_ratio: 0.5,
        kappa_s: 0.0,
        fidelity: 0.943,
        efficiency: 0.489,
    },
    PaperPoint {
        label: "g=2.4(k+ks), ks=0",
        coupling_ratio: 2.4,
        kappa_s: 0.0,
        fidelity: 1.000,
        efficiency: 0.963,
    },
    PaperPoint {
        label: "g=2.4(k+ks), ks=0.2k",
        coupling_ratio: 2.4,
        kappa_s: 0.2,
        fidelity: 0.947,
        efficiency: 0.473,
    },
    PaperPoint {
        label: "g=1.3(k+ks), ks=0.2k",
        coupling_ratio: 1.3,
        kappa_s: 0.2,
        fidelity: 0.96,
        efficiency: 0.423,
    },
];

pub const PAPER_TOLERANCE: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperCheckRow {
    pub point: PaperPoint,
    pub g_over_kappa: f64,
    pub computed: Performance,
    pub delta_fidelity: f64,
    pub delta_efficiency: f64,
    pub pass: bool,
}

pub fn paper_check(tolerance: f64) -> Vec<PaperCheckRow> {
    PAPER_POINTS
        .iter()
        .map(|point| {
            let params = point.params();
            let computed = formula_performance(&params);
            let delta_fidelity = (computed.fidelity - point.fidelity).abs();
            let delta_efficiency = (computed.efficiency - point.efficiency).abs();
            PaperCheckRow {
                point: *point,
                g_over_kappa: params.g,
                computed,
                delta_fidelity,
                delta_efficiency,
                pass: delta_fidelity <= tolerance && delta_efficiency <= tolerance,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn lossless_magnitudes_are_perfect() {
        let p = formula_from_magnitudes(1.0, 1.0);
        assert_eq!(p.fidelity, 1.0);
        assert_eq!(p.efficiency, 1.0);
    }

    #[test]
    fn formula_equals_compact_form() {
        for (a, b) in [(0.3f64, 0.9f64), (1.0, 0.82), (0.5, 0.5), (0.99, 0.1)] {
            let compact = ((a + b) * (a + b) / (2.0 * (a * a + b * b))).powi(6);
            assert!((formula_from_magnitudes(a, b).fidelity - compact).abs() < 1e-14);
        }
    }

    #[test]
    fn formula_bounded_over_figure_domain() {
        for gi in 0..=30 {
            for ki in 0..=20 {
                let p = formula_performance(
                    &CavityParams::new(gi as f64 * 0.1, ki as f64 * 0.1, 0.1).unwrap(),
                );
                assert!((0.0..=1.0 + 1e-12).contains(&p.fidelity), "{p:?}");
                assert!((0.0..=1.0 + 1e-12).contains(&p.efficiency), "{p:?}");
            }
        }
    }

    #[test]
    fn reference_points_within_reported_precision() {
        for row in paper_check(PAPER_TOLERANCE) {
            assert!(row.pass, "{row:?}");
        }
        assert!(paper_check(1e-4).iter().any(|r| !r.pass));
    }

    #[test]
    fn ideal_amplitudes_simulate_perfectly() {
        let s = simulated_with_pair(ReflectionPair::IDEAL, &uniform_input()).unwrap();
        assert!((s.fidelity - 1.0).abs() < 1e-12);
        assert!((s.efficiency - 1.0).abs() < 1e-12);
        let explicit = ReflectionPair::new(C64::new(0.0, -1.0), C64::new(1.0, 0.0));
        assert_eq!(simulated_with_pair(explicit, &uniform_input()).unwrap(), s);
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 3.0, 101).is_ok());
        assert!(Axis::new(1.0, 1.0, 1).is_ok());
        assert!(Axis::new(1.0, 2.0, 1).is_err());
        assert!(Axis::new(2.0, 1.0, 5).is_err());
        assert!(Axis::new(-1.0, 1.0, 5).is_err());
        assert!(Axis::new(0.0, 1.0, 0).is_err());
        let v = Axis::new(0.0, 3.0, 101).unwrap().values();
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 3.0);
    }

    #[test]
    fn single_point_sweep_matches_reference_point() {
        let point = PAPER_POINTS[2];
        let params = point.params();
        let spec = SweepSpec {
            g: Axis::point(params.g),
            kappa_s: Axis::point(point.kappa_s),
            ..Default::default()
        };
        let result = sweep(&spec).unwrap();
        assert_eq!(result.grid.len(), 1);
        assert!((result.grid[0].f_formula - point.fidelity).abs() <= PAPER_TOLERANCE);
        assert!((result.grid[0].eta_formula - point.efficiency).abs() <= PAPER_TOLERANCE);
    }

    #[test]
    fn efficiency_at_strong_coupling() {
        let p = formula_performance(&CavityParams::new(2.4, 0.0, 0.1).unwrap());
        assert!((p.efficiency - 0.963).abs() < 0.0005);
    }

    #[test]
    fn monotonic_above_rabi_dip() {
        let mut prev = formula_performance(&CavityParams::new(0.6, 0.0, 0.1).unwrap());
        for i in 1..=240 {
            let g = 0.6 + i as f64 * 0.01;
            let p = formula_performance(&CavityParams::new(g, 0.0, 0.1).unwrap());
            assert!(p.fidelity >= prev.fidelity - 1e-15, "F at g={g}");
            assert!(p.efficiency >= prev.efficiency - 1e-15, "eta at g={g}");
            prev = p;
        }
    }

    #[test]
    fn weak_coupling_dip_exists() {
        // the vacuum-Rabi split crosses the probe near g = 0.6κ
        let at = |g: f64| formula_performance(&CavityParams::new(g, 0.0, 0.1).unwrap());
        assert!(at(0.2).efficiency > at(0.6).efficiency);
        assert!(at(0.2).fidelity > at(0.6).fidelity);
        assert!(at(3.0).efficiency > at(0.6).efficiency);
    }

    #[test]
    fn csv_layout() {
        let spec = SweepSpec {
            g: Axis::new(1.0, 2.0, 3).unwrap(),
            kappa_s: Axis::new(0.0, 0.5, 2).unwrap(),
            ..Default::default()
        };
        let csv = sweep(&spec).unwrap().to_csv_string();
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 1 + 6 + 1);
        assert_eq!(lines[7], "");
        assert!(lines[1].starts_with("1,0,0.1,"));
        assert!(lines[2].starts_with("1,0.5,0.1,"));
        assert!(lines[3].starts_with("1.5,0,0.1,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn ideal_truth_table_passes() {
        let rows = truth_table(Interaction::Ideal).unwrap();
        assert_eq!(rows.len(), 16);
        assert!(rows.iter().all(|r| r.pass));
    }
}
