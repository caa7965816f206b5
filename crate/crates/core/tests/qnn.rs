mod common;

use std::f64::consts::{FRAC_PI_3, PI, TAU};
use std::time::Instant;

use proptest::prelude::*;
use qensemble::qnn::{
    build_circuit, forward, grad_adjoint, grad_parameter_shift, Backend, ParamVector, Qnn,
    QnnConfig,
};
use qensemble::simcore::NoiseModel;
use qensemble::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(cfg: &QnnConfig, rng: &mut impl Rng) -> (Vec<f64>, ParamVector) {
    let x: Vec<f64> = (0..cfg.n_qubits).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let p = ParamVector::new(cfg, (0..cfg.n_params()).map(|_| rng.gen_range(0.0..TAU)).collect())
        .unwrap();
    (x, p)
}

#[test]
fn all_zero_circuit_measures_plus_one() {
    for n in 1..6 {
        for l in 1..4 {
            let cfg = QnnConfig::regression(n, l);
            let out = forward(&vec![0.0; n], &ParamVector::zeros(&cfg), &cfg, &Backend::Exact)
                .unwrap();
            assert_eq!(out, vec![1.0]);
        }
    }
}

#[test]
fn feature_pi_flips_single_qubit() {
    let cfg = QnnConfig::regression(1, 1);
    let out = forward(&[PI], &ParamVector::zeros(&cfg), &cfg, &Backend::Exact).unwrap();
    assert!((out[0] + 1.0).abs() < 1e-12);
}

#[test]
fn forward_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let cfg = QnnConfig::classifier(3, 2, 3);
    for _ in 0..10 {
        let (x, p) = random_point(&cfg, &mut rng);
        let out = forward(&x, &p, &cfg, &Backend::Exact).unwrap();
        let u = common::dense_circuit(&build_circuit(&x, &p, &cfg).unwrap(), 3);
        for (h, &q) in cfg.head_qubits.iter().enumerate() {
            let want = common::dense_expectation_z(&u, 3, q);
            assert!((out[h] - want).abs() < 1e-10, "{} vs {want}", out[h]);
        }
    }
}

#[test]
fn gradient_vanishes_at_all_zero_point() {
    let cfg = QnnConfig::regression(3, 2);
    let zeros = ParamVector::zeros(&cfg);
    let ps = grad_parameter_shift(&[0.0; 3], &zeros, &cfg, &Backend::Exact).unwrap();
    let adj = grad_adjoint(&[0.0; 3], &zeros, &cfg, &Backend::Exact).unwrap();
    assert!(ps[0].iter().all(|g| g.abs() < 1e-12));
    assert!(adj[0].iter().all(|g| g.abs() < 1e-12));
}

#[test]
fn single_qubit_rx_gradient() {
    // Only the first RX is non-zero, so f(θ) = cos θ.
    let cfg = QnnConfig::regression(1, 1);
    let p = ParamVector::new(&cfg, vec![FRAC_PI_3, 0.0, 0.0]).unwrap();
    let f = forward(&[0.0], &p, &cfg, &Backend::Exact).unwrap()[0];
    assert!((f - 0.5).abs() < 1e-12);
    let g = grad_parameter_shift(&[0.0], &p, &cfg, &Backend::Exact).unwrap();
    assert!((g[0][0] + (3f64).sqrt() / 2.0).abs() < 1e-12);
    assert!((g[0][0] + 0.866).abs() < 1e-3);
}

#[test]
fn gradients_agree_with_finite_differences_and_each_other() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-5;
    for n in 1..=4 {
        for l in 1..=3 {
            let cfg = QnnConfig::regression(n, l);
            let (x, p) = random_point(&cfg, &mut rng);
            let ps = grad_parameter_shift(&x, &p, &cfg, &Backend::Exact).unwrap();
            let adj = grad_adjoint(&x, &p, &cfg, &Backend::Exact).unwrap();
            for j in 0..cfg.n_params() {
                let mut plus = p.clone();
                plus.as_mut_slice()[j] += h;
                let mut minus = p.clone();
                minus.as_mut_slice()[j] -= h;
                let fd = (forward(&x, &plus, &cfg, &Backend::Exact).unwrap()[0]
                    - forward(&x, &minus, &cfg, &Backend::Exact).unwrap()[0])
                    / (2.0 * h);
                assert!((ps[0][j] - fd).abs() < 1e-4, "n={n} l={l} j={j}");
                assert!((ps[0][j] - adj[0][j]).abs() < 1e-9, "n={n} l={l} j={j}");
            }
        }
    }
}

#[test]
fn multi_head_jacobians_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = QnnConfig::classifier(4, 2, 3);
    let (x, p) = random_point(&cfg, &mut rng);
    let ps = grad_parameter_shift(&x, &p, &cfg, &Backend::Exact).unwrap();
    let adj = grad_adjoint(&x, &p, &cfg, &Backend::Exact).unwrap();
    assert_eq!(ps.len(), 3);
    for (a, b) in ps.iter().flatten().zip(adj.iter().flatten()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn vjp_is_weighted_jacobian() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cfg = QnnConfig::classifier(3, 2, 2);
    let (x, p) = random_point(&cfg, &mut rng);
    let qnn = Qnn::new(cfg.clone()).unwrap();
    let jac = qnn.grad_adjoint(&x, p.as_slice(), &Backend::Exact).unwrap();
    let mut g = vec![0.0; cfg.n_params()];
    let out = qnn.vjp(&x, p.as_slice(), |_| vec![0.7, -1.3], &mut g).unwrap();
    assert_eq!(out, qnn.forward(&x, p.as_slice(), &Backend::Exact).unwrap());
    for j in 0..cfg.n_params() {
        assert!((g[j] - (0.7 * jac[0][j] - 1.3 * jac[1][j])).abs() < 1e-12);
    }
}

#[test]
fn adjoint_rejects_stochastic_backends() {
    let cfg = QnnConfig::regression(2, 1);
    let p = ParamVector::zeros(&cfg);
    let shots = Backend::Shots { shots: 10, seed: 0 };
    let noisy = Backend::Noisy { noise: NoiseModel::lagos(), trajectories: 4, seed: 0 };
    for b in [shots, noisy] {
        assert!(matches!(
            grad_adjoint(&[0.1, 0.2], &p, &cfg, &b),
            Err(Error::UnsupportedBackend { .. })
        ));
    }
}

#[test]
fn invalid_backend_is_config_error() {
    let cfg = QnnConfig::regression(2, 1);
    let p = ParamVector::zeros(&cfg);
    let bad = Backend::Shots { shots: 0, seed: 0 };
    assert!(matches!(forward(&[0.0, 0.0], &p, &cfg, &bad), Err(Error::Config(_))));
    let bad = Backend::Noisy { noise: NoiseModel::lagos(), trajectories: 0, seed: 0 };
    assert!(matches!(forward(&[0.0, 0.0], &p, &cfg, &bad), Err(Error::Config(_))));
}

#[test]
fn shot_backend_converges() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let cfg = QnnConfig::regression(3, 2);
    for trial in 0..20 {
        let (x, p) = random_point(&cfg, &mut rng);
        let exact = forward(&x, &p, &cfg, &Backend::Exact).unwrap()[0];
        let shots = 4000;
        let est = forward(&x, &p, &cfg, &Backend::Shots { shots, seed: trial }).unwrap()[0];
        assert!((est - exact).abs() < 3.0 / (shots as f64).sqrt(), "{est} vs {exact}");
    }
}

#[test]
fn noisy_backend_behaviour() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = QnnConfig::regression(3, 1);
    let (x, p) = random_point(&cfg, &mut rng);
    let exact = forward(&x, &p, &cfg, &Backend::Exact).unwrap()[0];
    let zero = Backend::Noisy { noise: NoiseModel::noiseless(), trajectories: 10, seed: 1 };
    assert_eq!(forward(&x, &p, &cfg, &zero).unwrap()[0], exact);

    let lagos = Backend::Noisy { noise: NoiseModel::lagos(), trajectories: 200, seed: 3 };
    let a = forward(&x, &p, &cfg, &lagos).unwrap()[0];
    assert_eq!(a.to_bits(), forward(&x, &p, &cfg, &lagos).unwrap()[0].to_bits());
    assert!((-1.0..=1.0).contains(&a));
    assert!((a - exact).abs() < 0.1);
}

#[test]
fn noisy_trajectories_match_depolarizing_average() {
    // One qubit, RY(x) then RX(a) RZ(b) RX(c): every gate is followed by a
    // depolarizing error with probability p. For a single qubit the channel
    // shrinks the Bloch vector by (1 − 4p/3) per gate, so after 4 gates
    // ⟨Z⟩ = (1 − 4p/3)^4 · ⟨Z⟩_ideal.
    let cfg = QnnConfig::regression(1, 1);
    let p = ParamVector::new(&cfg, vec![0.4, 1.1, 0.3]).unwrap();
    let x = [0.5];
    let exact = forward(&x, &p, &cfg, &Backend::Exact).unwrap()[0];
    let rate = 0.05;
    let trajectories = 40_000;
    let b = Backend::Noisy {
        noise: NoiseModel::new(rate, 0.0).unwrap(),
        trajectories,
        seed: 9,
    };
    let est = forward(&x, &p, &cfg, &b).unwrap()[0];
    let want = (1.0 - 4.0 * rate / 3.0_f64).powi(4) * exact;
    let sigma = 1.0 / (trajectories as f64).sqrt();
    assert!((est - want).abs() < 3.0 * sigma, "{est} vs {want}");
}

#[test]
fn adjoint_is_much_faster_at_wine_scale() {
    let cfg = QnnConfig::regression(13, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (x, p) = random_point(&cfg, &mut rng);
    let t = Instant::now();
    let adj = grad_adjoint(&x, &p, &cfg, &Backend::Exact).unwrap();
    let adjoint_time = t.elapsed();
    assert_eq!(adj[0].len(), 390);
    let t = Instant::now();
    let ps = grad_parameter_shift(&x, &p, &cfg, &Backend::Exact).unwrap();
    let shift_time = t.elapsed();
    for (a, b) in adj[0].iter().zip(&ps[0]) {
        assert!((a - b).abs() < 1e-9);
    }
    assert!(
        shift_time > 10 * adjoint_time,
        "adjoint {adjoint_time:?} vs parameter shift {shift_time:?}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outputs_bounded_and_periodic(
        seed in any::<u64>(),
        n in 1usize..5,
        l in 1usize..4,
        j_frac in 0.0f64..1.0,
    ) {
        let cfg = QnnConfig::classifier(n, l, n.min(2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, p) = random_point(&cfg, &mut rng);
        let out = forward(&x, &p, &cfg, &Backend::Exact).unwrap();
        prop_assert!(out.iter().all(|v| (-1.0..=1.0).contains(v)));
        let j = ((cfg.n_params() as f64) * j_frac) as usize % cfg.n_params();
        let mut shifted = p.clone();
        shifted.as_mut_slice()[j] += TAU;
        let again = forward(&x, &shifted, &cfg, &Backend::Exact).unwrap();
        for (a, b) in out.iter().zip(&again) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
