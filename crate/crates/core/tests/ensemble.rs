use proptest::prelude::*;
use qensemble::data::{generate_linear, Dataset, TaskKind, Targets};
use qensemble::ensemble::{
    adaboost_r2, bootstrap_indices, combine, fit_adaboost_r2, fit_adaboost_samme_r, fit_bagging,
    jury_probability, samme_r, subspace_indices, CombinationRule, EnsembleConfig, RoundingMode,
    BETA_MIN,
};
use qensemble::optim::{config_for, fit, predict_all, TrainConfig};
use qensemble::qnn::Backend;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn linear(n: usize, d: usize, seed: u64) -> Dataset {
    generate_linear(n, d, 0.05, seed).unwrap().dataset
}

fn quick(epochs: usize, seed: u64) -> TrainConfig {
    TrainConfig { epochs, seed, ..TrainConfig::default() }
}

fn three_class(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..n {
        let c = i % 3;
        let centre = [-0.6, 0.0, 0.6][c];
        rows.push(vec![centre + rng.gen_range(-0.2..0.2), -centre + rng.gen_range(-0.2..0.2), rng.gen_range(-1.0..1.0)]);
        labels.push(c);
    }
    Dataset::from_rows(rows, Targets::Classes { labels, n_classes: 3 }).unwrap()
}

#[test]
fn sampling_is_reproducible() {
    let draw = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (bootstrap_indices(200, 0.2, &mut rng).unwrap(), subspace_indices(13, 0.8, RoundingMode::HalfUp, &mut rng).unwrap())
    };
    let (rows, cols) = draw(5);
    assert_eq!(rows.len(), 40);
    assert_eq!(cols.len(), 10);
    assert_eq!(draw(5), (rows, cols));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert_eq!(subspace_indices(7, 1.0, RoundingMode::HalfUp, &mut rng).unwrap(), (0..7).collect::<Vec<_>>());
    assert_eq!(subspace_indices(5, 0.3, RoundingMode::Floor, &mut rng).unwrap().len(), 1);
    assert_eq!(subspace_indices(5, 0.3, RoundingMode::HalfUp, &mut rng).unwrap().len(), 2);
}

#[test]
fn bagging_members_use_subspace_qubits() {
    let data = linear(30, 5, 1);
    let ens = EnsembleConfig { seed: 3, ..EnsembleConfig::bagging(0.8, 0.2) };
    let model = fit_bagging(&data, 1, &ens, &quick(3, 3)).unwrap();
    assert_eq!(model.members.len(), 10);
    for m in &model.members {
        assert_eq!(m.features.len(), 4);
        assert_eq!(m.model.config.n_qubits, 4);
        assert!(m.features.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(m.weight, 1.0);
    }
    let r = model.resources();
    assert_eq!(r.n_qubits, 40);
    assert_eq!(r.trainable_params, 10 * 12);
    assert_eq!(r.cnot_gates, 10 * 6);
    // Members differ in their subspaces or rows, so they are not clones.
    assert!(model.members.windows(2).any(|w| w[0] != w[1]));
    let again = fit_bagging(&data, 1, &ens, &quick(3, 3)).unwrap();
    assert_eq!(model, again);
}

#[test]
fn single_full_member_equals_plain_model() {
    for data in [linear(25, 3, 2), three_class(24, 4)] {
        let tr = quick(10, 77);
        let ens = EnsembleConfig { n_estimators: 1, seed: 77, ..EnsembleConfig::bagging(1.0, 1.0) };
        let bag = fit_bagging(&data, 2, &ens, &tr).unwrap();
        let (fm, _) = fit(config_for(&data, 2), &data, &tr, None).unwrap();
        assert_eq!(bag.members[0].model, fm);
        let a = bag.predict(&data, &Backend::Exact).unwrap();
        let b = predict_all(&fm, &data, &Backend::Exact).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let xb: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
            let yb: Vec<u64> = y.iter().map(|v| v.to_bits()).collect();
            assert_eq!(xb, yb);
        }
    }
}

#[test]
fn member_failure_names_the_member() {
    // Two features cannot carry three softmax heads.
    let data = three_class(12, 1);
    let ens = EnsembleConfig { n_estimators: 2, ..EnsembleConfig::bagging(0.5, 1.0) };
    match fit_bagging(&data, 1, &ens, &quick(1, 0)) {
        Err(qensemble::Error::Member { member, .. }) => assert_eq!(member, 0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn r2_perfect_first_member_ends_boosting() {
    let y = [0.1, -0.2, 0.3, 0.0];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (members, trace) = adaboost_r2(&y, 10, &mut rng, |t, _| Ok((t, y.to_vec()))).unwrap();
    assert_eq!(members.len(), 1);
    assert_eq!(members[0], (0, (1.0 / BETA_MIN).ln()));
    assert_eq!(trace.rounds.len(), 1);
    let out = combine(&[vec![0.25]], CombinationRule::WeightedAverage, &[members[0].1], TaskKind::Regression).unwrap();
    assert_eq!(out, vec![0.25]);
}

#[test]
fn r2_bad_rounds() {
    let y = [0.0; 4];
    let bad = [1.0, 1.0, 1.0, 0.5];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    // L̄ ≥ 0.5 in round 0: kept alone with weight 1.
    let (members, _) = adaboost_r2(&y, 5, &mut rng, |t, _| Ok((t, bad.to_vec()))).unwrap();
    assert_eq!(members, vec![(0, 1.0)]);
    // L̄ ≥ 0.5 later: discarded.
    let good = [0.1, 0.0, 0.0, 0.0];
    let (members, trace) = adaboost_r2(&y, 5, &mut rng, |t, _| {
        Ok((t, if t == 0 { good.to_vec() } else { bad.to_vec() }))
    })
    .unwrap();
    assert_eq!(members.len(), 1);
    assert_eq!(trace.rounds.len(), 2);
    assert_eq!(trace.rounds[1].member_weight, None);
}

#[test]
fn samme_r_uniform_learner_leaves_weights() {
    let labels = [0, 1, 2, 1];
    let (_, trace) = samme_r(&labels, 3, 3, |t, _| Ok((t, vec![vec![1.0 / 3.0; 3]; 4]))).unwrap();
    for r in &trace.rounds {
        assert!(r.sample_weights.iter().all(|w| (w - 0.25).abs() < 1e-15));
        assert!(r.contributions.iter().flatten().all(|h| h.abs() < 1e-15));
    }
}

#[test]
fn boosting_end_to_end() {
    let data = linear(20, 2, 9);
    let ens = EnsembleConfig { n_estimators: 3, seed: 1, ..EnsembleConfig::default() };
    let r2 = fit_adaboost_r2(&data, 1, &ens, &quick(15, 2)).unwrap();
    assert!(!r2.members.is_empty() && r2.members.len() <= 3);
    assert_eq!(r2.rule, CombinationRule::WeightedAverage);
    assert!(r2.members.iter().all(|m| m.weight.is_finite() && m.weight > 0.0));
    assert!(r2.evaluate(&data, &Backend::Exact).unwrap().value().is_finite());

    let cls = three_class(24, 2);
    let sr = fit_adaboost_samme_r(&cls, 1, &ens, &quick(15, 2)).unwrap();
    assert_eq!(sr.members.len(), 3);
    let acc = sr.evaluate(&cls, &Backend::Exact).unwrap().value();
    assert!((0.0..=1.0).contains(&acc));

    assert!(fit_adaboost_r2(&cls, 1, &ens, &quick(1, 0)).is_err());
    assert!(fit_adaboost_samme_r(&data, 1, &ens, &quick(1, 0)).is_err());
}

/// Points for class c from one member: how many classes it ranks below c.
fn borda_oracle(members: &[Vec<f64>]) -> Vec<f64> {
    let k = members[0].len();
    (0..k)
        .map(|c| {
            members
                .iter()
                .map(|p| (0..k).filter(|&o| p[o] < p[c]).count() as f64)
                .sum()
        })
        .collect()
}

#[test]
fn borda_matches_rank_sum() {
    // All 6 orderings of 3 classes, taken 3 at a time.
    let perms: Vec<Vec<f64>> = vec![
        vec![0.5, 0.3, 0.2],
        vec![0.5, 0.2, 0.3],
        vec![0.3, 0.5, 0.2],
        vec![0.2, 0.5, 0.3],
        vec![0.3, 0.2, 0.5],
        vec![0.2, 0.3, 0.5],
    ];
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..6 {
                let members = vec![perms[a].clone(), perms[b].clone(), perms[c].clone()];
                let got = combine(&members, CombinationRule::Borda, &[1.0; 3], TaskKind::Classification).unwrap();
                assert_eq!(got, borda_oracle(&members));
            }
        }
    }
}

#[test]
fn jury_nondecreasing_in_p() {
    for m in [1, 2, 3, 4, 5, 10, 15, 31] {
        let mut prev = 0.0;
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let v = jury_probability(m, p).unwrap();
            assert!(v >= prev - 1e-15, "m={m} p={p}");
            prev = v;
        }
    }
}

fn prob_vec(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, k).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

proptest! {
    #[test]
    fn r2_weights_stay_normalized(preds in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 6), 1..6), seed in any::<u64>()) {
        let y = [0.3, -0.1, 0.8, -0.7, 0.0, 0.5];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, trace) = adaboost_r2(&y, preds.len(), &mut rng, |t, _| Ok((t, preds[t].clone()))).unwrap();
        for r in &trace.rounds {
            prop_assert!((r.sample_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        prop_assert!((trace.final_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn samme_r_weights_stay_normalized(probs in prop::collection::vec(prop::collection::vec(prob_vec(3), 5), 1..5)) {
        let labels = [0, 1, 2, 2, 0];
        let (_, trace) = samme_r(&labels, 3, probs.len(), |t, _| Ok((t, probs[t].clone()))).unwrap();
        for r in &trace.rounds {
            prop_assert!((r.sample_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        prop_assert!((trace.final_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn average_ignores_member_order(vals in prop::collection::vec(-1.0f64..1.0, 1..12), rot in 0usize..12) {
        let members: Vec<Vec<f64>> = vals.iter().map(|&v| vec![v]).collect();
        let mut rotated = members.clone();
        rotated.rotate_left(rot % members.len());
        let w = vec![1.0; members.len()];
        let a = combine(&members, CombinationRule::Average, &w, TaskKind::Regression).unwrap()[0];
        let b = combine(&rotated, CombinationRule::Average, &w, TaskKind::Regression).unwrap()[0];
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn weighted_rules_ignore_weight_scale(
        members in prop::collection::vec(prob_vec(3), 1..8),
        raw in prop::collection::vec(0.1f64..5.0, 8),
        scale in 0.01f64..100.0,
    ) {
        let w = &raw[..members.len()];
        let scaled: Vec<f64> = w.iter().map(|x| x * scale).collect();
        let task = TaskKind::Classification;
        let argmax = |v: &[f64]| (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b });
        let a = combine(&members, CombinationRule::WeightedMajorityVote, w, task).unwrap();
        let b = combine(&members, CombinationRule::WeightedMajorityVote, &scaled, task).unwrap();
        prop_assert_eq!(argmax(&a), argmax(&b));
        let a = combine(&members, CombinationRule::WeightedAverage, w, task).unwrap();
        let b = combine(&members, CombinationRule::WeightedAverage, &scaled, task).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
