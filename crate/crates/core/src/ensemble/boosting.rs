//! Learner-agnostic AdaBoost.R2 and SAMME.R loops.
//!
//! The QNN trainers plug into these through closures, which also lets tests
//! drive them with stub learners and compare traces against hand arithmetic.

use rand::Rng;

use super::sampling::weighted_bootstrap;
use crate::error::{Error, Result};
use crate::optim::PROB_FLOOR;

/// Member weight cap used when a round fits the training set exactly.
pub const BETA_MIN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct R2Round {
    /// Distribution the bootstrap was drawn from.
    pub sample_weights: Vec<f64>,
    pub bootstrap: Vec<usize>,
    /// D = max_i |f(x_i) − y_i|.
    pub max_error: f64,
    /// L_i = |f(x_i) − y_i| / D (all zero when D = 0).
    pub losses: Vec<f64>,
    pub average_loss: f64,
    pub beta: f64,
    /// ln(1/β); `None` when the round was discarded.
    pub member_weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct R2Trace {
    pub rounds: Vec<R2Round>,
    /// Distribution after the last accepted update.
    pub final_weights: Vec<f64>,
}

fn normalize(w: &mut [f64]) {
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
}

/// AdaBoost.R2 with the linear loss.
///
/// `fit_round(t, rows)` trains round `t` on the bootstrap `rows` and returns
/// the model with its predictions on every training sample. Returns the
/// accepted members with their weights ln(1/β).
///
/// A round with average loss ≥ 0.5 ends boosting without being added,
/// except in round 0 where it is kept with weight 1 so the ensemble is never
/// empty. A round with D = 0 is kept with weight ln(1/β_min) and ends
/// boosting.
pub fn adaboost_r2<M, F, R>(
    targets: &[f64],
    rounds: usize,
    rng: &mut R,
    mut fit_round: F,
) -> Result<(Vec<(M, f64)>, R2Trace)>
where
    F: FnMut(usize, &[usize]) -> Result<(M, Vec<f64>)>,
    R: Rng,
{
    let n = targets.len();
    if n == 0 || rounds == 0 {
        return Err(Error::contract("boosting needs samples and at least one round"));
    }
    let mut w = vec![1.0 / n as f64; n];
    let mut members = Vec::new();
    let mut trace = Vec::new();

    for t in 0..rounds {
        let rows = weighted_bootstrap(&w, n, rng)?;
        let (model, pred) = fit_round(t, &rows)?;
        if pred.len() != n {
            return Err(Error::contract("learner returned the wrong number of predictions"));
        }
        let err: Vec<f64> = pred.iter().zip(targets).map(|(p, y)| (p - y).abs()).collect();
        let d = err.iter().copied().fold(0.0, f64::max);
        let mut round = R2Round {
            sample_weights: w.clone(),
            bootstrap: rows,
            max_error: d,
            losses: vec![0.0; n],
            average_loss: 0.0,
            beta: BETA_MIN,
            member_weight: None,
        };
        if d == 0.0 {
            round.member_weight = Some((1.0 / BETA_MIN).ln());
            members.push((model, (1.0 / BETA_MIN).ln()));
            trace.push(round);
            break;
        }
        round.losses = err.iter().map(|e| e / d).collect();
        round.average_loss = w.iter().zip(&round.losses).map(|(wi, li)| wi * li).sum();
        if round.average_loss >= 0.5 {
            round.beta = round.average_loss / (1.0 - round.average_loss);
            if members.is_empty() {
                round.member_weight = Some(1.0);
                members.push((model, 1.0));
            }
            trace.push(round);
            break;
        }
        let beta = (round.average_loss / (1.0 - round.average_loss)).max(BETA_MIN);
        round.beta = beta;
        round.member_weight = Some((1.0 / beta).ln());
        members.push((model, (1.0 / beta).ln()));
        for (wi, li) in w.iter_mut().zip(&round.losses) {
            *wi *= beta.powf(1.0 - li);
        }
        normalize(&mut w);
        trace.push(round);
    }
    Ok((members, R2Trace { rounds: trace, final_weights: w }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SammeRRound {
    /// Weights the learner was trained with.
    pub sample_weights: Vec<f64>,
    /// h_c(x_i) per training sample.
    pub contributions: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SammeRTrace {
    pub rounds: Vec<SammeRRound>,
    pub final_weights: Vec<f64>,
}

/// SAMME.R for `n_classes` classes.
///
/// `fit_round(t, weights)` trains on the full training set under the given
/// sample weights and returns the model with class probabilities for every
/// training sample. Weights update as
/// w_i ← w_i · exp(−((k−1)/k) · ỹ_i · log p(x_i)), with ỹ_i = 1 on the true
/// class and −1/(k−1) elsewhere.
pub fn samme_r<M, F>(labels: &[usize], n_classes: usize, rounds: usize, mut fit_round: F) -> Result<(Vec<M>, SammeRTrace)>
where
    F: FnMut(usize, &[f64]) -> Result<(M, Vec<Vec<f64>>)>,
{
    let n = labels.len();
    if n == 0 || rounds == 0 {
        return Err(Error::contract("boosting needs samples and at least one round"));
    }
    if n_classes < 2 || labels.iter().any(|&l| l >= n_classes) {
        return Err(Error::contract("SAMME.R labels must lie in 0..k with k >= 2"));
    }
    let k = n_classes as f64;
    let mut w = vec![1.0 / n as f64; n];
    let mut members = Vec::with_capacity(rounds);
    let mut trace = Vec::with_capacity(rounds);

    for t in 0..rounds {
        let (model, probs) = fit_round(t, &w)?;
        if probs.len() != n || probs.iter().any(|p| p.len() != n_classes) {
            return Err(Error::contract("learner returned probabilities of the wrong shape"));
        }
        let contributions = probs.iter().map(|p| super::combine::samme_r_contribution(p)).collect();
        trace.push(SammeRRound {
            sample_weights: w.clone(),
            contributions,
        });
        for ((wi, p), &y) in w.iter_mut().zip(&probs).zip(labels) {
            let dot: f64 = p
                .iter()
                .enumerate()
                .map(|(c, pc)| {
                    let code = if c == y { 1.0 } else { -1.0 / (k - 1.0) };
                    code * pc.clamp(PROB_FLOOR, 1.0).ln()
                })
                .sum();
            *wi *= (-(k - 1.0) / k * dot).exp();
        }
        normalize(&mut w);
        if !w.iter().all(|v| v.is_finite()) {
            return Err(Error::contract(format!("SAMME.R weights became non-finite in round {t}")));
        }
        members.push(model);
    }
    Ok((members, SammeRTrace { rounds: trace, final_weights: w }))
}
