mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use qensemble::simcore::{apply_gate_noisy, Gate, NoiseModel, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_gate(n: usize, rng: &mut impl Rng) -> Gate {
    let q = rng.gen_range(0..n);
    let a = rng.gen_range(-PI..PI);
    match rng.gen_range(0..4) {
        0 => Gate::rx(q, a),
        1 => Gate::ry(q, a),
        2 => Gate::rz(q, a),
        _ if n > 1 => Gate::cnot(q, (q + rng.gen_range(1..n)) % n),
        _ => Gate::rx(q, a),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn norm_survives_ten_thousand_gates(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = StateVector::zero_state(n).unwrap();
        for _ in 0..10_000 {
            s.apply_gate(&random_gate(n, &mut rng)).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        for q in 0..n {
            let z = s.expectation_z(q);
            prop_assert!((-1.0..=1.0).contains(&z));
        }
    }

    #[test]
    fn apply_gate_matches_dense(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gates: Vec<Gate> = (0..12).map(|_| random_gate(n, &mut rng)).collect();
        let mut s = StateVector::zero_state(n).unwrap();
        for g in &gates {
            s.apply_gate(g).unwrap();
        }
        let u = common::dense_circuit(&gates, n);
        for (r, a) in s.amplitudes().iter().enumerate() {
            prop_assert!((a - u[r][0]).norm() < 1e-12);
        }
    }
}

/// Pauli P equals -i·R_P(π), so a global phase away from the rotation.
fn pauli_as_rotation(kind: usize, q: usize) -> Gate {
    [Gate::rx(q, PI), Gate::ry(q, PI), Gate::rz(q, PI)][kind]
}

#[test]
fn two_qubit_trajectories_converge_to_the_channel() {
    let (p1, p2) = (0.2, 0.3);
    let noise = NoiseModel::new(p1, p2).unwrap();
    let circuit = [Gate::ry(0, 1.1), Gate::cnot(0, 1)];

    // Exact mixture: enumerate every fault pattern with its probability.
    let options = |p: f64| [(1.0 - p, None), (p / 3.0, Some(0)), (p / 3.0, Some(1)), (p / 3.0, Some(2))];
    let mut want = [0.0; 2];
    for (pa, fa) in options(p1) {
        for (pb, fb) in options(p2) {
            for (pc, fc) in options(p2) {
                let mut gates = vec![circuit[0]];
                gates.extend(fa.map(|k| pauli_as_rotation(k, 0)));
                gates.push(circuit[1]);
                gates.extend(fb.map(|k| pauli_as_rotation(k, 0)));
                gates.extend(fc.map(|k| pauli_as_rotation(k, 1)));
                let u = common::dense_circuit(&gates, 2);
                for (q, w) in want.iter_mut().enumerate() {
                    *w += pa * pb * pc * common::dense_expectation_z(&u, 2, q);
                }
            }
        }
    }

    let trials = 20_000;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut samples = [Vec::with_capacity(trials), Vec::with_capacity(trials)];
    for _ in 0..trials {
        let mut s = StateVector::zero_state(2).unwrap();
        for g in &circuit {
            apply_gate_noisy(&mut s, g, &noise, &mut rng).unwrap();
        }
        for (q, v) in samples.iter_mut().enumerate() {
            v.push(s.expectation_z(q));
        }
    }
    for q in 0..2 {
        let v = &samples[q];
        let mean = v.iter().sum::<f64>() / trials as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let tol = 3.0 * (var / trials as f64).sqrt();
        assert!((mean - want[q]).abs() <= tol, "qubit {q}: {mean} vs {} (3σ = {tol})", want[q]);
    }
}

#[test]
fn noisy_trajectories_are_deterministic() {
    let noise = NoiseModel::lagos();
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = StateVector::zero_state(3).unwrap();
        for _ in 0..200 {
            let g = random_gate(3, &mut rng);
            apply_gate_noisy(&mut s, &g, &noise, &mut rng).unwrap();
        }
        s
    };
    assert_eq!(run(5), run(5));
    assert_ne!(run(5), run(6));
}
