use serde::{Deserialize, Serialize};

use crate::data::TaskKind;
use crate::error::{Error, Result};
use crate::optim::{argmax, PROB_FLOOR};

/// How member outputs are merged.
///
/// Member outputs are `[value]` for regression and a class-probability
/// vector for classification. The combined output has the same shape for
/// regression and is a per-class score vector for classification; the
/// predicted class is its argmax (lowest index on ties).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombinationRule {
    /// Mean value, or mean probability vector.
    Average,
    WeightedAverage,
    /// Smallest value whose cumulative weight reaches half the total.
    WeightedMedian,
    MajorityVote,
    WeightedMajorityVote,
    /// Each member gives k−1 points to its most likely class, down to 0.
    Borda,
    Min,
    Max,
    /// Σ (k−1)(log p_c − mean_c' log p_c') over members.
    SammeR,
}

impl CombinationRule {
    pub fn supports(self, task: TaskKind) -> bool {
        use CombinationRule::*;
        match task {
            TaskKind::Regression => matches!(self, Average | WeightedAverage | WeightedMedian | Min | Max),
            TaskKind::Classification => matches!(
                self,
                Average | WeightedAverage | MajorityVote | WeightedMajorityVote | Borda | SammeR
            ),
        }
    }

    fn is_weighted(self) -> bool {
        matches!(
            self,
            CombinationRule::WeightedAverage
                | CombinationRule::WeightedMedian
                | CombinationRule::WeightedMajorityVote
        )
    }

    pub fn check(self, task: TaskKind) -> Result<()> {
        if self.supports(task) {
            Ok(())
        } else {
            Err(Error::config(format!("rule {self:?} does not apply to {task:?} tasks")))
        }
    }
}

/// Combines one row's member outputs.
pub fn combine(outputs: &[Vec<f64>], rule: CombinationRule, weights: &[f64], task: TaskKind) -> Result<Vec<f64>> {
    rule.check(task)?;
    if outputs.is_empty() {
        return Err(Error::contract("combining zero members"));
    }
    if weights.len() != outputs.len() {
        return Err(Error::contract(format!(
            "{} weights for {} members",
            weights.len(),
            outputs.len()
        )));
    }
    let width = outputs[0].len();
    if width == 0 || outputs.iter().any(|o| o.len() != width) {
        return Err(Error::contract("member outputs differ in width"));
    }
    if task == TaskKind::Regression && width != 1 {
        return Err(Error::contract("regression members must emit one value"));
    }
    if rule.is_weighted() && weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::contract("weighted rules need positive finite weights"));
    }
    let ones;
    let weights = if rule.is_weighted() {
        weights
    } else {
        ones = vec![1.0; outputs.len()];
        &ones
    };

    use CombinationRule::*;
    Ok(match rule {
        Average | WeightedAverage => {
            let total: f64 = weights.iter().sum();
            (0..width)
                .map(|c| outputs.iter().zip(weights).map(|(o, w)| w * o[c]).sum::<f64>() / total)
                .collect()
        }
        WeightedMedian => vec![weighted_median(outputs, weights)],
        Min => vec![outputs.iter().map(|o| o[0]).fold(f64::INFINITY, f64::min)],
        Max => vec![outputs.iter().map(|o| o[0]).fold(f64::NEG_INFINITY, f64::max)],
        MajorityVote | WeightedMajorityVote => {
            let mut votes = vec![0.0; width];
            for (o, w) in outputs.iter().zip(weights) {
                votes[argmax(o)] += w;
            }
            votes
        }
        Borda => {
            let mut points = vec![0.0; width];
            for o in outputs {
                for (rank, c) in ranking(o).into_iter().enumerate() {
                    points[c] += (width - 1 - rank) as f64;
                }
            }
            points
        }
        SammeR => {
            let mut score = vec![0.0; width];
            for o in outputs {
                for (s, h) in score.iter_mut().zip(samme_r_contribution(o)) {
                    *s += h;
                }
            }
            score
        }
    })
}

/// Classes by descending probability; equal probabilities keep index order.
fn ranking(p: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    order
}

fn weighted_median(outputs: &[Vec<f64>], weights: &[f64]) -> f64 {
    let mut pairs: Vec<(f64, f64)> = outputs.iter().map(|o| o[0]).zip(weights.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half = 0.5 * weights.iter().sum::<f64>();
    let mut acc = 0.0;
    for (v, w) in &pairs {
        acc += w;
        if acc >= half {
            return *v;
        }
    }
    pairs.last().expect("nonempty").0
}

/// h_c = (k−1)(log p_c − (1/k) Σ_c' log p_c'), probabilities clamped to
/// [1e-12, 1].
pub fn samme_r_contribution(p: &[f64]) -> Vec<f64> {
    let k = p.len() as f64;
    let logs: Vec<f64> = p.iter().map(|v| v.clamp(PROB_FLOOR, 1.0).ln()).collect();
    let mean = logs.iter().sum::<f64>() / k;
    logs.iter().map(|l| (k - 1.0) * (l - mean)).collect()
}
