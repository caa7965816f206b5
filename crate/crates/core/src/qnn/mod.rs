//! The quantum neural network f(x; θ) = Tr[U†(θ) V†(x) ρ₀ V(x) U(θ) O].
//!
//! V(x) applies RY(x_i) to qubit i. U(θ) stacks `layers` blocks of
//! RX column → CNOT chain → RZ column → CNOT chain → RX column, layer 0
//! first. Trainable angle `3·k·n + c·n + i` drives column `c` of layer `k`
//! on qubit `i` (see [`param_index`]). The observable is σz on each head
//! qubit.

mod backend;
mod circuit;
mod eval;
mod resources;

pub use backend::Backend;
pub use circuit::{build_ansatz, build_feature_map, param_index, ParamVector, QnnConfig};
pub use eval::{build_circuit, forward, grad_adjoint, grad_parameter_shift, Qnn};
pub use resources::{resource_report, ResourceReport};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Architecture plus trained (or initial) angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QnnModel {
    pub config: QnnConfig,
    pub params: ParamVector,
}

impl QnnModel {
    /// Angles drawn uniformly from [0, 2π) with `seed`.
    pub fn init(config: QnnConfig, seed: u64) -> Self {
        let params = ParamVector::random(&config, seed);
        QnnModel { config, params }
    }

    pub fn outputs(&self, x: &[f64], backend: &Backend) -> Result<Vec<f64>> {
        forward(x, &self.params, &self.config, backend)
    }

    /// The regression value, or class probabilities (softmax of the head
    /// outputs) when the model has more than one head.
    pub fn predict(&self, x: &[f64], backend: &Backend) -> Result<Vec<f64>> {
        let out = self.outputs(x, backend)?;
        Ok(if out.len() == 1 { out } else { softmax(&out) })
    }

    pub fn resources(&self) -> ResourceReport {
        resource_report(&self.config)
    }
}

/// Numerically stable softmax.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / total).collect()
}
