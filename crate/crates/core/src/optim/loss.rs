use crate::error::{Error, Result};

/// Probabilities are clamped to this floor before taking logs.
pub const PROB_FLOOR: f64 = 1e-12;

/// Mean squared error.
pub fn mse_loss(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::contract("MSE of an empty batch"));
    }
    if predictions.len() != targets.len() {
        return Err(Error::contract(format!(
            "{} predictions for {} targets",
            predictions.len(),
            targets.len()
        )));
    }
    let sum: f64 = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    Ok(sum / predictions.len() as f64)
}

/// Mean of −log p[label] with p clamped below at [`PROB_FLOOR`].
pub fn cce_loss(class_probs: &[Vec<f64>], labels: &[usize]) -> Result<f64> {
    if class_probs.is_empty() {
        return Err(Error::contract("cross entropy of an empty batch"));
    }
    if class_probs.len() != labels.len() {
        return Err(Error::contract(format!(
            "{} probability vectors for {} labels",
            class_probs.len(),
            labels.len()
        )));
    }
    let mut sum = 0.0;
    for (i, (p, &y)) in class_probs.iter().zip(labels).enumerate() {
        if y >= p.len() {
            return Err(Error::contract(format!(
                "sample {i}: label {y} out of range for {} classes",
                p.len()
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::contract(format!(
                "sample {i}: probabilities sum to {total}"
            )));
        }
        sum += sample_cce(p, y);
    }
    Ok(sum / labels.len() as f64)
}

pub(crate) fn sample_cce(p: &[f64], label: usize) -> f64 {
    -p[label].max(PROB_FLOOR).ln()
}
