mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use qaoa_decode::catalog;
use qaoa_decode::codes::single_qubit_pauli;
use qaoa_decode::engine::{expectation_at, run_circuit, AngleSchedule, Sampler, StateVector};
use qaoa_decode::hamiltonian::{classical_check_cost, quantum_check_cost, quantum_generator_cost};
use qaoa_decode::{BitVector, PenaltyParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn h743_check_diag() -> Vec<f64> {
    let code = catalog::load("hamming743").unwrap();
    let h = &code.as_classical().unwrap().h;
    let s: BitVector = "010".parse().unwrap();
    classical_check_cost::<f64>(h, &s, PenaltyParams::new(1, 4).unwrap())
        .unwrap()
        .materialize()
        .unwrap()
}

fn five_gen_diag() -> Vec<f64> {
    let code = catalog::load("five_one_three").unwrap();
    let q = code.as_quantum().unwrap();
    quantum_generator_cost::<f64>(&q.g_s, &single_qubit_pauli("Y2", 5).unwrap())
        .unwrap()
        .materialize()
        .unwrap()
}

#[test]
fn matches_dense_oracle() {
    // arbitrary integer diagonal on 4 qubits
    let diag: Vec<f64> = (0..16).map(|x: i32| f64::from((x * 7 % 11) - 5)).collect();
    let gammas = [0.3, 1.1, 0.7];
    let betas = [0.9, 0.2, 0.4];
    let dense = common::dense_qaoa_state(&diag, &gammas, &betas);
    let sched = AngleSchedule::new(gammas.to_vec(), betas.to_vec()).unwrap();
    let psi = run_circuit(&diag, &sched).unwrap();
    for (a, b) in psi.amplitudes().iter().zip(&dense) {
        assert!((a - b).norm() < 1e-12);
    }

    let diag = five_gen_diag();
    let gammas = [0.41, 1.3];
    let betas = [0.2, 0.66];
    let dense = common::dense_qaoa_state(&diag, &gammas, &betas);
    let psi = run_circuit(&diag, &AngleSchedule::new(gammas.to_vec(), betas.to_vec()).unwrap()).unwrap();
    for (a, b) in psi.amplitudes().iter().zip(&dense) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn zero_angles_give_uniform_average() {
    let diag = h743_check_diag();
    let mean = diag.iter().sum::<f64>() / diag.len() as f64;
    let f = expectation_at(&diag, &AngleSchedule::uniform(3, 0.0, 0.0).unwrap()).unwrap();
    assert_relative_eq!(f, mean, epsilon = 1e-12);
}

#[test]
fn norm_preserved_at_depth_four_on_ten_qubits() {
    let code = catalog::load("five_one_three").unwrap();
    let q = code.as_quantum().unwrap();
    let diag = quantum_check_cost::<f64>(&q.h_s, &"1011".parse().unwrap(), PenaltyParams::new(1, 2).unwrap())
        .unwrap()
        .materialize()
        .unwrap();
    assert_eq!(diag.len(), 1024);
    let sched = AngleSchedule::new(vec![0.1, 0.5, -0.9, 2.0], vec![1.2, -0.3, 0.25, 0.8]).unwrap();
    let psi = run_circuit(&diag, &sched).unwrap();
    assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic_in_pi(g in -3.0f64..3.0, b in -3.0f64..3.0, g2 in -3.0f64..3.0, b2 in -3.0f64..3.0) {
        let diag = h743_check_diag();
        let base = expectation_at(&diag, &AngleSchedule::new(vec![g, g2], vec![b, b2]).unwrap()).unwrap();
        for (dg, db) in [(PI, 0.0), (0.0, PI), (-PI, PI)] {
            let shifted = AngleSchedule::new(vec![g + dg, g2], vec![b, b2 + db]).unwrap();
            prop_assert!((expectation_at(&diag, &shifted).unwrap() - base).abs() < 1e-9);
        }
    }

    #[test]
    fn bounded_by_spectrum(g in -3.0f64..3.0, b in -3.0f64..3.0) {
        for diag in [h743_check_diag(), five_gen_diag()] {
            let (lo, hi) = diag.iter().fold((f64::MAX, f64::MIN), |(l, h), &d| (l.min(d), h.max(d)));
            let f = expectation_at(&diag, &AngleSchedule::new(vec![g, b], vec![b, g]).unwrap()).unwrap();
            prop_assert!(f >= lo - 1e-9 && f <= hi + 1e-9);
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let diag = five_gen_diag();
    let diag32: Vec<f32> = diag.iter().map(|&d| d as f32).collect();
    let s64 = AngleSchedule::new(vec![0.4, 0.8], vec![0.3, -0.2]).unwrap();
    let s32 = AngleSchedule::new(vec![0.4f32, 0.8], vec![0.3f32, -0.2]).unwrap();
    let f64v = expectation_at(&diag, &s64).unwrap();
    let f32v = expectation_at(&diag32, &s32).unwrap();
    assert!((f64::from(f32v) - f64v).abs() < 1e-4, "{f32v} vs {f64v}");
}

#[test]
fn sampling_is_seeded_and_follows_probabilities() {
    let diag = five_gen_diag();
    let psi = run_circuit(&diag, &AngleSchedule::new(vec![0.7], vec![0.4]).unwrap()).unwrap();
    assert_eq!(psi.sample_indices(50, 3).unwrap(), psi.sample_indices(50, 3).unwrap());

    let probs = psi.probabilities();
    let sampler = Sampler::new(&probs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let shots = 200_000;
    let mut counts = vec![0usize; probs.len()];
    for x in sampler.draw(shots, &mut rng).unwrap() {
        counts[x as usize] += 1;
    }
    for (c, p) in counts.iter().zip(&probs) {
        let sd = (p * (1.0 - p) / shots as f64).sqrt();
        assert!((*c as f64 / shots as f64 - p).abs() < 5.0 * sd + 1e-9);
    }
}

#[test]
fn basis_states_and_dumps() {
    let psi = StateVector::<f64>::basis(3, 0b101).unwrap();
    assert_eq!(psi.probabilities()[5], 1.0);
    assert_eq!(psi.sample(4, 0).unwrap(), vec![BitVector::from_u64(5, 3); 4]);

    let phi = run_circuit(&h743_check_diag(), &AngleSchedule::uniform(2, 0.3, 0.6).unwrap()).unwrap();
    let mut buf = Vec::new();
    phi.write_dump(&mut buf).unwrap();
    assert_eq!(StateVector::<f64>::read_dump(buf.as_slice()).unwrap(), phi);
}

#[test]
fn rejects_malformed_input() {
    assert!(AngleSchedule::new(vec![0.1, 0.2], vec![0.3]).is_err());
    assert!(AngleSchedule::<f64>::from_flat(&[0.1, 0.2, 0.3]).is_err());
    assert!(run_circuit(&[1.0, 2.0, 3.0], &AngleSchedule::uniform(1, 0.1, 0.1).unwrap()).is_err());
    let mut psi = StateVector::<f64>::plus_state(2).unwrap();
    assert!(psi.apply_cost_layer(&[1.0; 8], 0.1).is_err());
    assert!(Sampler::new(&[0.0f64; 4]).is_err());
}
