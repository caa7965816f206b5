use std::f64::consts::TAU;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simcore::{Gate, GateKind, ParamSlot};

/// Architecture of one QNN: qubit count (= input features), ansatz depth and
/// the qubits whose ⟨σz⟩ form the model output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QnnConfig {
    pub n_qubits: usize,
    pub layers: usize,
    pub head_qubits: Vec<usize>,
}

impl QnnConfig {
    /// Single output ⟨σz⟩ on qubit 0.
    pub fn regression(n_qubits: usize, layers: usize) -> Self {
        QnnConfig {
            n_qubits,
            layers,
            head_qubits: vec![0],
        }
    }

    /// One ⟨σz⟩ per class on the first `n_classes` qubits.
    pub fn classifier(n_qubits: usize, layers: usize, n_classes: usize) -> Self {
        QnnConfig {
            n_qubits,
            layers,
            head_qubits: (0..n_classes).collect(),
        }
    }

    pub fn n_params(&self) -> usize {
        3 * self.layers * self.n_qubits
    }

    pub fn n_outputs(&self) -> usize {
        self.head_qubits.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=crate::simcore::MAX_QUBITS).contains(&self.n_qubits) {
            return Err(Error::config(format!(
                "QNN qubit count {} outside 1..={}",
                self.n_qubits,
                crate::simcore::MAX_QUBITS
            )));
        }
        if self.layers == 0 {
            return Err(Error::config("QNN needs at least one layer"));
        }
        if self.head_qubits.is_empty() {
            return Err(Error::config("QNN head has no measured qubits"));
        }
        if let Some(&q) = self.head_qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::config(format!(
                "head qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }
}

/// Trainable angles, `3 · layers · n_qubits` of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(config: &QnnConfig, values: Vec<f64>) -> Result<Self> {
        if values.len() != config.n_params() {
            return Err(Error::contract(format!(
                "expected {} parameters, got {}",
                config.n_params(),
                values.len()
            )));
        }
        Ok(ParamVector(values))
    }

    pub fn zeros(config: &QnnConfig) -> Self {
        ParamVector(vec![0.0; config.n_params()])
    }

    /// Uniform draw from [0, 2π) per coordinate.
    pub fn random(config: &QnnConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = Uniform::new(0.0, TAU);
        ParamVector((0..config.n_params()).map(|_| dist.sample(&mut rng)).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Index of the trainable angle for `column` (0 = first RX, 1 = RZ,
/// 2 = last RX) of layer `layer` on `qubit`. All indices are zero-based.
pub fn param_index(n_qubits: usize, layer: usize, column: usize, qubit: usize) -> usize {
    3 * layer * n_qubits + column * n_qubits + qubit
}

/// V(x) = ⊗ RY(x_i): one RY per qubit with the raw feature as angle.
pub fn build_feature_map(x: &[f64], n_qubits: usize) -> Result<Vec<Gate>> {
    if x.len() != n_qubits {
        return Err(Error::contract(format!(
            "feature vector has {} entries for {n_qubits} qubits",
            x.len()
        )));
    }
    Ok(x.iter()
        .enumerate()
        .map(|(i, &xi)| Gate::ry(i, xi).with_slot(ParamSlot::Feature(i)))
        .collect())
}

/// The layered ansatz with angles filled in from `params`.
///
/// Per layer, in application order: RX column, CNOT chain CX(i, i+1),
/// RZ column, CNOT chain, RX column.
pub fn build_ansatz(params: &ParamVector, config: &QnnConfig) -> Result<Vec<Gate>> {
    if params.len() != config.n_params() {
        return Err(Error::contract(format!(
            "expected {} parameters, got {}",
            config.n_params(),
            params.len()
        )));
    }
    let mut gates = ansatz_template(config);
    for g in &mut gates {
        if let Some(ParamSlot::Trainable(j)) = g.slot {
            g.angle = params.as_slice()[j];
        }
    }
    Ok(gates)
}

/// Ansatz gates with zero angles; rotation slots point into the parameter
/// vector.
pub(crate) fn ansatz_template(config: &QnnConfig) -> Vec<Gate> {
    let n = config.n_qubits;
    let mut gates = Vec::with_capacity(config.layers * (3 * n + 2 * n.saturating_sub(1)));
    let column = |gates: &mut Vec<Gate>, kind: GateKind, layer: usize, col: usize| {
        for q in 0..n {
            let slot = ParamSlot::Trainable(param_index(n, layer, col, q));
            gates.push(Gate::rotation(kind, q, 0.0).with_slot(slot));
        }
    };
    let chain = |gates: &mut Vec<Gate>| {
        for q in 0..n.saturating_sub(1) {
            gates.push(Gate::cnot(q, q + 1));
        }
    };
    for layer in 0..config.layers {
        column(&mut gates, GateKind::Rx, layer, 0);
        chain(&mut gates);
        column(&mut gates, GateKind::Rz, layer, 1);
        chain(&mut gates);
        column(&mut gates, GateKind::Rx, layer, 2);
    }
    gates
}
