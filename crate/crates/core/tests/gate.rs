mod common;

use common::*;
use hypercnot::analysis;
use hypercnot::cavity::{CavityParams, Interaction};
use hypercnot::hilbert::StateVector;
use hypercnot::protocols::{self, labels, BranchMode, SpinOutcome};
use hypercnot::{Error, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn cz_stage_is_controlled_z_pair_with_spin_phase() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let state = six(random_vector(&mut rng, 64));
        let out = protocols::cz_stage(&state, Interaction::Ideal).unwrap();
        for (i, (a, b)) in state.amplitudes().iter().zip(out.amplitudes()).enumerate() {
            let d = state.digits(i);
            let (ap, asp, e1, e2) = (d[0], d[1], d[4], d[5]);
            // e1 controls a π phase on path 2, e2 on |L⟩; |↑⟩ of each spin picks up −i
            let mut factor = C64::new(1.0, 0.0);
            for (spin, target) in [(e1, asp), (e2, ap)] {
                factor *= if spin == 0 {
                    C64::new(0.0, -1.0)
                } else if target == 1 {
                    C64::new(-1.0, 0.0)
                } else {
                    C64::new(1.0, 0.0)
                };
            }
            assert!((a * factor - b).norm() < 1e-12, "index {i}");
        }
    }
}

#[test]
fn stages_follow_analytic_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let k = Coefficients::random(&mut rng);
        let st = protocols::hyper_cnot_stages(&k.input(), Interaction::Ideal).unwrap();
        assert!(
            fidelity(
                &st.input,
                &six(join(
                    &outer(&[k.alpha, k.beta, prepared()]),
                    &outer(&[k.gamma, k.delta, prepared()])
                ))
            ) >= STATE_EQ
        );
        assert!(fidelity(&st.after_spatial_cz, &spatial_cz_oracle(&k)) >= STATE_EQ);
        assert!(fidelity(&st.after_cz, &hybrid_cz_oracle(&k, k.beta, k.delta)) >= STATE_EQ);
        assert!(
            fidelity(
                &st.after_target_hadamards,
                &hybrid_cz_oracle(&k, primed(k.beta), primed(k.delta))
            ) >= STATE_EQ
        );
        assert!(fidelity(&st.after_target_scatter, &target_scatter_oracle(&k)) >= STATE_EQ);
        assert!(fidelity(&st.after_spin_hadamards, &spin_hadamard_oracle(&k)) >= STATE_EQ);
        assert!(fidelity(&st.entangled, &entangled_oracle(&k)) >= STATE_EQ);
    }
}

#[test]
fn spin_branches_are_equiprobable() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let k = Coefficients::random(&mut rng);
    let entangled = protocols::hyper_cnot_stages(&k.input(), Interaction::Ideal)
        .unwrap()
        .entangled;
    for b1 in entangled.measure_all_branches(labels::E1).unwrap() {
        assert!((b1.probability - 0.5).abs() < 1e-12);
        for b2 in b1
            .state
            .normalized()
            .unwrap()
            .measure_all_branches(labels::E2)
            .unwrap()
        {
            assert!((b2.probability - 0.5).abs() < 1e-12);
        }
    }
}

#[test]
fn auxiliary_photon_reads_spin() {
    for (outcome, amps) in [(0, ZERO), (1, ONE)] {
        let spin = StateVector::product([(protocols::spin_register("e"), amps)]).unwrap();
        let branches = protocols::spin_readout_branches(&spin, "e", Interaction::Ideal).unwrap();
        assert!((branches[outcome].weight - 1.0).abs() < 1e-12);
        assert!(branches[1 - outcome].weight < 1e-12);
    }
}

#[test]
fn readout_then_feed_forward_gives_gate() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let k = Coefficients::random(&mut rng);
    let oracle = hyper_cnot_oracle(&k);
    let entangled = protocols::hyper_cnot_stages(&k.input(), Interaction::Ideal)
        .unwrap()
        .entangled;
    let mut total = 0.0;
    for r1 in protocols::spin_readout_branches(&entangled, labels::E1, Interaction::Ideal).unwrap()
    {
        for r2 in
            protocols::spin_readout_branches(&r1.state, labels::E2, Interaction::Ideal).unwrap()
        {
            let (o1, o2) = (r1.record.outcome, r2.record.outcome);
            let photons = r2
                .state
                .extract(labels::E1, o1)
                .unwrap()
                .extract(labels::E2, o2)
                .unwrap();
            total += photons.norm_sqr();
            let out = protocols::feed_forward(
                &photons,
                [SpinOutcome::from_index(o1), SpinOutcome::from_index(o2)],
            )
            .unwrap();
            assert!(fidelity(&out, &oracle) >= STATE_EQ);
        }
    }
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn sampling_is_seeded() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let input = four(random_vector(&mut rng, 16));
    let a = protocols::hyper_cnot(&input, Interaction::Ideal, BranchMode::Sample(7)).unwrap();
    let b = protocols::hyper_cnot(&input, Interaction::Ideal, BranchMode::Sample(7)).unwrap();
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].spin_outcomes, b[0].spin_outcomes);
    assert_eq!(a[0].seed, Some(7));
    let expected = four(cnot_cnot(input.amplitudes()));
    assert!(fidelity(&a[0].final_state, &expected) >= STATE_EQ);
    let seen: std::collections::HashSet<_> = (0..64)
        .map(|s| {
            protocols::hyper_cnot(&input, Interaction::Ideal, BranchMode::Sample(s)).unwrap()[0]
                .spin_outcomes
        })
        .collect();
    assert_eq!(seen.len(), 4);
}

#[test]
fn gate_rejects_malformed_inputs() {
    let s = six(vec![C64::new(0.125, 0.0); 64]);
    assert!(matches!(
        protocols::hyper_cnot(&s, Interaction::Ideal, BranchMode::Enumerate),
        Err(Error::MalformedInput(_))
    ));
    let half = four(vec![C64::new(0.125, 0.0); 16]);
    assert!(matches!(
        protocols::hyper_cnot(&half, Interaction::Ideal, BranchMode::Enumerate),
        Err(Error::MalformedInput(_))
    ));
}

#[test]
fn cluster_is_maximally_entangled_across_photons() {
    for prep in protocols::prepare_cluster(Interaction::Ideal).unwrap() {
        let rho = reduced_control(&prep.cluster);
        for (i, row) in rho.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 0.25 } else { 0.0 };
                assert!((v - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        assert!(fidelity(&prep.cluster, &protocols::expected_cluster_state().unwrap()) >= STATE_EQ);
    }
}

#[test]
fn bell_states_map_to_product_patterns() {
    let table = protocols::bell_decoding_table().unwrap();
    assert_eq!(table.len(), 16);
    for (h, d) in &table {
        assert!(d.deterministic);
        assert_eq!(d.hyper_bell(), Some(*h));
        let runs = protocols::hyper_cnot(
            &h.state().unwrap(),
            Interaction::Ideal,
            BranchMode::Enumerate,
        )
        .unwrap();
        // the gate output is a product across the photons
        let rho = reduced_control(&runs[0].final_state);
        let purity: f64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (rho[i][j] * rho[j][i]).re)
            .sum();
        assert!((purity - 1.0).abs() < 1e-10);
    }
}

#[test]
fn strong_coupling_truth_table_passes() {
    let params = CavityParams::with_coupling_ratio(2.4, 0.0, 0.1).unwrap();
    let rows = analysis::truth_table(Interaction::physical(&params)).unwrap();
    assert!(rows.iter().all(|r| r.pass && r.observed == r.expected));
}

#[test]
fn simulated_efficiency_matches_formula_for_basis_inputs() {
    let params = CavityParams::with_coupling_ratio(1.3, 0.2, 0.1).unwrap();
    let formula = analysis::formula_performance(&params).efficiency;
    for idx in 0..16 {
        let input = protocols::two_photon_product(
            protocols::PhotonQubits::basis((idx >> 3) & 1, (idx >> 2) & 1),
            protocols::PhotonQubits::basis((idx >> 1) & 1, idx & 1),
        )
        .unwrap();
        let sim = analysis::simulated_performance(&params, &input).unwrap();
        assert!((sim.efficiency - formula).abs() < 1e-9, "input {idx}");
    }
}
