use std::f64::consts::TAU;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamConfig, AdamState};
use super::loss::{sample_cce, PROB_FLOOR};
use crate::data::{Dataset, Targets};
use crate::error::{Error, Result};
use crate::qnn::{softmax, Backend, ParamVector, Qnn, QnnConfig, QnnModel};
use crate::seed::derive_path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    ParameterShift,
    Adjoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Seeds parameter initialization and, on stochastic backends, the
    /// per-evaluation sampling streams.
    pub seed: u64,
    pub gradient_method: GradientMethod,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub backend: Backend,
}

impl Default for TrainConfig {
    fn default() -> Self {
        let adam = AdamConfig::default();
        TrainConfig {
            learning_rate: adam.learning_rate,
            epochs: 150,
            seed: 0,
            gradient_method: GradientMethod::Adjoint,
            adam_beta1: adam.beta1,
            adam_beta2: adam.beta2,
            adam_eps: adam.eps,
            backend: Backend::Exact,
        }
    }
}

impl TrainConfig {
    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.adam().validate()?;
        if self.epochs == 0 {
            return Err(Error::config("training needs at least one epoch"));
        }
        self.backend.validate()?;
        if self.gradient_method == GradientMethod::Adjoint && !self.backend.is_exact() {
            return Err(Error::UnsupportedBackend {
                op: "adjoint differentiation",
                backend: self.backend.name(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub final_params: ParamVector,
    /// Loss at the start of each epoch, before that epoch's update.
    pub train_loss_curve: Vec<f64>,
    /// Seconds.
    pub wall_time: f64,
}

/// QNN architecture matching a dataset: one qubit per feature and, for k
/// classes, one head qubit per class.
pub fn config_for(data: &Dataset, layers: usize) -> QnnConfig {
    match data.targets() {
        Targets::Regression(_) => QnnConfig::regression(data.n_features(), layers),
        Targets::Classes { n_classes, .. } => {
            QnnConfig::classifier(data.n_features(), layers, *n_classes)
        }
    }
}

fn check_compatible(config: &QnnConfig, data: &Dataset) -> Result<()> {
    config.validate()?;
    if data.n_features() != config.n_qubits {
        return Err(Error::contract(format!(
            "dataset has {} features, model has {} qubits",
            data.n_features(),
            config.n_qubits
        )));
    }
    match data.targets() {
        Targets::Regression(_) if config.n_outputs() != 1 => Err(Error::contract(
            "regression needs a single-output model",
        )),
        Targets::Classes { n_classes, .. } if config.n_outputs() != *n_classes || *n_classes < 2 => {
            Err(Error::contract(format!(
                "{n_classes}-class data on a {}-output model",
                config.n_outputs()
            )))
        }
        _ => Ok(()),
    }
}

/// Per-sample loss and its derivative with respect to the head outputs.
fn loss_and_cotangent(targets: &Targets, i: usize, outputs: &[f64]) -> (f64, Vec<f64>) {
    match targets {
        Targets::Regression(y) => {
            let r = outputs[0] - y[i];
            (r * r, vec![2.0 * r])
        }
        Targets::Classes { labels, .. } => {
            let mut p = softmax(outputs);
            let loss = sample_cce(&p, labels[i]);
            // d(−log p_y)/dz = p − e_y. Inside the clamp region the loss is
            // flat, but the softmax gradient is still the useful direction.
            p[labels[i]] -= 1.0;
            debug_assert!(loss <= -PROB_FLOOR.ln());
            (loss, p)
        }
    }
}

fn sample_weights(n: usize, weights: Option<&[f64]>) -> Result<Vec<f64>> {
    match weights {
        None => Ok(vec![1.0 / n as f64; n]),
        Some(w) => {
            if w.len() != n {
                return Err(Error::contract(format!("{} sample weights for {n} samples", w.len())));
            }
            if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::contract("sample weights must be finite and nonnegative"));
            }
            let total: f64 = w.iter().sum();
            if total.is_nan() || total <= 0.0 {
                return Err(Error::contract("sample weights sum to zero"));
            }
            Ok(w.iter().map(|v| v / total).collect())
        }
    }
}

/// Weighted empirical risk and its gradient at `params`.
fn risk_and_gradient(
    qnn: &Qnn,
    data: &Dataset,
    weights: &[f64],
    params: &[f64],
    config: &TrainConfig,
    epoch: usize,
) -> Result<(f64, Vec<f64>)> {
    let targets = data.targets();
    let per_sample: Vec<(f64, Vec<f64>)> = (0..data.n_samples())
        .into_par_iter()
        .map(|i| -> Result<(f64, Vec<f64>)> {
            let x = data.row(i);
            let mut grad = vec![0.0; params.len()];
            match config.gradient_method {
                GradientMethod::Adjoint => {
                    let mut loss = 0.0;
                    qnn.vjp(
                        x,
                        params,
                        |out| {
                            let (l, w) = loss_and_cotangent(targets, i, out);
                            loss = l;
                            w
                        },
                        &mut grad,
                    )?;
                    Ok((loss, grad))
                }
                GradientMethod::ParameterShift => {
                    let stream = derive_path(config.seed, &[epoch as u64, i as u64]);
                    let backend = config.backend.derive(stream);
                    let outputs = qnn.forward(x, params, &backend)?;
                    let (loss, w) = loss_and_cotangent(targets, i, &outputs);
                    let jac = qnn.grad_parameter_shift(x, params, &backend.derive(u64::MAX))?;
                    for (row, wh) in jac.iter().zip(&w) {
                        for (g, d) in grad.iter_mut().zip(row) {
                            *g += wh * d;
                        }
                    }
                    Ok((loss, grad))
                }
            }
        })
        .collect::<Result<_>>()?;

    // Fixed-order reduction keeps results independent of the thread count.
    let mut risk = 0.0;
    let mut total = vec![0.0; params.len()];
    for ((loss, grad), &w) in per_sample.iter().zip(weights) {
        risk += w * loss;
        for (t, g) in total.iter_mut().zip(grad) {
            *t += w * g;
        }
    }
    Ok((risk, total))
}

/// Full-batch ADAM on the (optionally weighted) empirical risk: squared error
/// for regression, cross entropy over softmax(head outputs) for
/// classification. Weights are normalized to sum to 1; `None` means uniform.
pub fn train(model: &QnnModel, data: &Dataset, config: &TrainConfig, weights: Option<&[f64]>) -> Result<FitResult> {
    let start = Instant::now();
    config.validate()?;
    check_compatible(&model.config, data)?;
    let weights = sample_weights(data.n_samples(), weights)?;
    let qnn = Qnn::new(model.config.clone())?;
    let adam = config.adam();
    let mut params = model.params.as_slice().to_vec();
    let mut state = AdamState::new(params.len());
    let mut curve = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let (risk, grad) = risk_and_gradient(&qnn, data, &weights, &params, config, epoch)?;
        if !risk.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::contract(format!("non-finite loss or gradient at epoch {epoch}")));
        }
        curve.push(risk);
        adam_step(&mut params, &grad, &mut state, &adam)?;
        for p in &mut params {
            *p = p.rem_euclid(TAU);
            // rem_euclid can round up to exactly TAU for tiny negatives.
            if *p >= TAU {
                *p = 0.0;
            }
        }
    }

    Ok(FitResult {
        final_params: ParamVector::new(&model.config, params)?,
        train_loss_curve: curve,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Initializes from `config.seed` and trains; returns the fitted model.
pub fn fit(qnn_config: QnnConfig, data: &Dataset, config: &TrainConfig, weights: Option<&[f64]>) -> Result<(QnnModel, FitResult)> {
    qnn_config.validate()?;
    let init = QnnModel::init(qnn_config, config.seed);
    let result = train(&init, data, config, weights)?;
    let model = QnnModel {
        config: init.config,
        params: result.final_params.clone(),
    };
    Ok((model, result))
}
