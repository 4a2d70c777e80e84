//! Fixed linear-optical elements and single-spin rotations.
//!
//! Every element is a constant 2×2 matrix on the register it is applied to.
//! Polarization matrices act on the (R, L) basis, spatial ones on
//! (path 1, path 2), spin ones on (↑, ↓).

use ndarray::{array, linalg::kron, Array2};
use serde::Serialize;

use crate::error::Result;
use crate::hilbert::StateVector;
use crate::{Matrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Element {
    /// 50:50 beam splitter, Hadamard on the spatial modes.
    BeamSplitter,
    /// Circular polarizing beam splitter. Its action is routing, so as a
    /// matrix on the polarization register it is the identity; see
    /// [`cpbs_port`] and [`routed_scatter`].
    Cpbs,
    /// HWP₁, polarization bit flip X.
    HwpX,
    /// HWP₂, polarization Hadamard.
    HwpH,
    /// WP₁, −i on both polarizations.
    WpU1,
    /// WP₂, −i on L only.
    WpU2,
    /// HWP₃, polarization phase flip U_p = −|R⟩⟨R| + |L⟩⟨L|.
    HwpPhaseFlip,
    /// Spin Hadamard.
    SpinH,
    /// |↑⟩ → (i|↑⟩ + |↓⟩)/√2, |↓⟩ → (i|↑⟩ − |↓⟩)/√2.
    SpinRotPlus,
    /// Inverse of [`Element::SpinRotPlus`].
    SpinRotMinus,
}

impl Element {
    pub const ALL: [Element; 10] = [
        Element::BeamSplitter,
        Element::Cpbs,
        Element::HwpX,
        Element::HwpH,
        Element::WpU1,
        Element::WpU2,
        Element::HwpPhaseFlip,
        Element::SpinH,
        Element::SpinRotPlus,
        Element::SpinRotMinus,
    ];

    pub fn matrix(self) -> Matrix {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::i();
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            Element::BeamSplitter | Element::HwpH | Element::SpinH => {
                array![[s, s], [s, -s]]
            }
            Element::Cpbs => Array2::eye(2),
            Element::HwpX => array![[o, l], [l, o]],
            Element::WpU1 => array![[-i, o], [o, -i]],
            Element::WpU2 => array![[l, o], [o, -i]],
            Element::HwpPhaseFlip => array![[-l, o], [o, l]],
            Element::SpinRotPlus => array![[i * s, i * s], [s, -s]],
            Element::SpinRotMinus => array![[-i * s, s], [-i * s, -s]],
        }
    }

    /// Matrix of the element that undoes this one.
    pub fn inverse_matrix(self) -> Matrix {
        self.matrix().t().mapv(|z| z.conj())
    }
}

pub fn element_matrix(kind: Element) -> Matrix {
    kind.matrix()
}

pub fn apply_element(state: &StateVector, kind: Element, target: &str) -> Result<StateVector> {
    state.apply(&[target], &kind.matrix())
}

/// Applies `kind` on `target` only in the branch `control == control_value`,
/// as a wave plate placed in one spatial path.
pub fn conditional_element(
    state: &StateVector,
    kind: Element,
    target: &str,
    control: &str,
    control_value: usize,
) -> Result<StateVector> {
    state.apply_controlled(&[target], &kind.matrix(), control, control_value)
}

/// Output ports of a CPBS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Port {
    /// Transmits |R⟩.
    Transmitted,
    /// Reflects |L⟩.
    Reflected,
}

/// Projector selected by one CPBS port, on the polarization register.
pub fn cpbs_port(port: Port) -> Matrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    match port {
        Port::Transmitted => array![[l, o], [o, o]],
        Port::Reflected => array![[o, o], [o, l]],
    }
}

/// Composite of a `CPBS – HWP₁ – QD – HWP₁ – CPBS` sandwich on
/// (polarization, spin), given the QD scattering matrix on the same pair.
///
/// The CPBS splits R and L into separate arms; the arm leaving through
/// `flipped` carries a bit-flip plate before and after the cavity, the other
/// arm meets the cavity directly, and the second CPBS recombines them.
/// Both polarizations therefore see the cavity through a single
/// polarization rule while keeping their own label.
pub fn routed_scatter(scattering: &Matrix, flipped: Port) -> Matrix {
    let id: Matrix = Array2::eye(2);
    let flip = kron(&Element::HwpX.matrix(), &id);
    let mut total = Array2::zeros((4, 4));
    for port in [Port::Transmitted, Port::Reflected] {
        let select = kron(&cpbs_port(port), &id);
        let arm = if port == flipped {
            flip.dot(scattering).dot(&flip).dot(&select)
        } else {
            scattering.dot(&select)
        };
        total = total + arm;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Register;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single(label: &str, names: (&str, &str), amps: [C64; 2]) -> StateVector {
        StateVector::product([(Register::new(label, names.0, names.1), amps)]).unwrap()
    }

    fn assert_state(actual: &StateVector, expected: &[C64]) {
        for (a, e) in actual.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12, "{actual} vs {expected:?}");
        }
    }

    #[test]
    fn all_elements_unitary() {
        for kind in Element::ALL {
            let m = kind.matrix();
            let prod = m.t().mapv(|z| z.conj()).dot(&m);
            let id: Matrix = Array2::eye(2);
            let err = (&prod - &id).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-14, "{kind:?} deviates by {err}");
        }
    }

    #[test]
    fn documented_actions() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = single("p", ("R", "L"), [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_state(
            &apply_element(&r, Element::HwpX, "p").unwrap(),
            &[c(0.0, 0.0), c(1.0, 0.0)],
        );
        assert_state(
            &apply_element(&r, Element::HwpH, "p").unwrap(),
            &[c(s, 0.0), c(s, 0.0)],
        );

        let plus = single("p", ("R", "L"), [c(s, 0.0), c(s, 0.0)]);
        assert_state(
            &apply_element(&plus, Element::WpU2, "p").unwrap(),
            &[c(s, 0.0), c(0.0, -s)],
        );

        let b1 = single("b.spatial", ("b1", "b2"), [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_state(
            &apply_element(&b1, Element::BeamSplitter, "b.spatial").unwrap(),
            &[c(s, 0.0), c(s, 0.0)],
        );
        let twice = apply_element(
            &apply_element(&b1, Element::BeamSplitter, "b.spatial").unwrap(),
            Element::BeamSplitter,
            "b.spatial",
        )
        .unwrap();
        assert_state(&twice, b1.amplitudes());

        let up = single("e", ("up", "down"), [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_state(
            &apply_element(&up, Element::SpinRotPlus, "e").unwrap(),
            &[c(0.0, s), c(s, 0.0)],
        );
        let down = single("e", ("up", "down"), [c(0.0, 0.0), c(1.0, 0.0)]);
        assert_state(
            &apply_element(&down, Element::SpinRotPlus, "e").unwrap(),
            &[c(0.0, s), c(-s, 0.0)],
        );
    }

    #[test]
    fn inverse_restores_state() {
        let state = single(
            "x",
            ("0", "1"),
            [C64::from_polar(0.6, 0.4), C64::from_polar(0.8, -2.0)],
        );
        for kind in Element::ALL {
            let there = apply_element(&state, kind, "x").unwrap();
            let back = there.apply(&["x"], &kind.inverse_matrix()).unwrap();
            assert_state(&back, state.amplitudes());
        }
        let roundtrip = apply_element(
            &apply_element(&state, Element::SpinRotPlus, "x").unwrap(),
            Element::SpinRotMinus,
            "x",
        )
        .unwrap();
        assert_state(&roundtrip, state.amplitudes());
    }

    #[test]
    fn conditional_phase_flip_on_second_path() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let state = StateVector::product([
            (Register::new("a.pol", "R", "L"), [c(1.0, 0.0), c(0.0, 0.0)]),
            (
                Register::new("a.spatial", "a1", "a2"),
                [c(s, 0.0), c(s, 0.0)],
            ),
        ])
        .unwrap();
        let out =
            conditional_element(&state, Element::HwpPhaseFlip, "a.pol", "a.spatial", 1).unwrap();
        assert_state(&out, &[c(s, 0.0), c(-s, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        // unoccupied control branch
        let a1 = StateVector::product([
            (Register::new("a.pol", "R", "L"), [c(s, 0.0), c(s, 0.0)]),
            (
                Register::new("a.spatial", "a1", "a2"),
                [c(1.0, 0.0), c(0.0, 0.0)],
            ),
        ])
        .unwrap();
        assert_eq!(
            conditional_element(&a1, Element::HwpPhaseFlip, "a.pol", "a.spatial", 1).unwrap(),
            a1
        );
        assert_eq!(
            conditional_element(&state, Element::Cpbs, "a.pol", "a.spatial", 0).unwrap(),
            state
        );
    }

    #[test]
    fn conditional_errors() {
        let state = single("p", ("R", "L"), [c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(conditional_element(&state, Element::HwpX, "p", "missing", 0).is_err());
        assert!(conditional_element(&state, Element::HwpX, "missing", "p", 0).is_err());
    }

    #[test]
    fn sandwich_selects_one_polarization_rule() {
        let cold = c(0.0, -1.0);
        let hot = c(1.0, 0.0);
        let scatter = crate::cavity::ReflectionPair::IDEAL.scattering_matrix();
        // flipping the L arm makes both polarizations follow the R rule
        let r_rule = routed_scatter(&scatter, Port::Reflected);
        let diag: Vec<C64> = (0..4).map(|k| r_rule[[k, k]]).collect();
        assert_eq!(diag, vec![cold, hot, cold, hot]);
        let l_rule = routed_scatter(&scatter, Port::Transmitted);
        let diag: Vec<C64> = (0..4).map(|k| l_rule[[k, k]]).collect();
        assert_eq!(diag, vec![hot, cold, hot, cold]);
        for k in 0..4 {
            for j in 0..4 {
                if j != k {
                    assert_eq!(r_rule[[k, j]], c(0.0, 0.0));
                }
            }
        }
    }
}
