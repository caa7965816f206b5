use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::circuit::QnnConfig;

/// Hardware footprint of a QNN (or, summed, of an ensemble of them).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n_qubits: usize,
    pub trainable_params: usize,
    /// Feature-map RY gates plus ansatz rotations.
    pub rotation_gates: usize,
    pub cnot_gates: usize,
    /// Total gate count of the circuit.
    pub circuit_depth_gates: usize,
}

pub fn resource_report(config: &QnnConfig) -> ResourceReport {
    let n = config.n_qubits;
    let l = config.layers;
    let trainable_params = 3 * l * n;
    let rotation_gates = n + trainable_params;
    let cnot_gates = 2 * l * n.saturating_sub(1);
    ResourceReport {
        n_qubits: n,
        trainable_params,
        rotation_gates,
        cnot_gates,
        circuit_depth_gates: rotation_gates + cnot_gates,
    }
}

impl Add for ResourceReport {
    type Output = ResourceReport;

    fn add(self, rhs: Self) -> Self {
        ResourceReport {
            n_qubits: self.n_qubits + rhs.n_qubits,
            trainable_params: self.trainable_params + rhs.trainable_params,
            rotation_gates: self.rotation_gates + rhs.rotation_gates,
            cnot_gates: self.cnot_gates + rhs.cnot_gates,
            circuit_depth_gates: self.circuit_depth_gates + rhs.circuit_depth_gates,
        }
    }
}

impl Sum for ResourceReport {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ResourceReport::default(), Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnn::{build_ansatz, build_feature_map, ParamVector};
    use crate::simcore::GateKind;

    #[test]
    fn five_qubit_single_layer() {
        let r = resource_report(&QnnConfig::regression(5, 1));
        assert_eq!(r.trainable_params, 15);
        assert_eq!(r.cnot_gates, 8);
        assert_eq!(r.rotation_gates - r.trainable_params, 5);
        assert_eq!(r.circuit_depth_gates, 5 + 15 + 8);
    }

    #[test]
    fn single_qubit_has_no_cnots() {
        for l in 1..6 {
            assert_eq!(resource_report(&QnnConfig::regression(1, l)).cnot_gates, 0);
        }
    }

    #[test]
    fn subspace_parameter_ratio() {
        let full = resource_report(&QnnConfig::regression(10, 4)).trainable_params as f64;
        let sub8 = resource_report(&QnnConfig::regression(8, 4)).trainable_params as f64;
        let sub5 = resource_report(&QnnConfig::regression(5, 4)).trainable_params as f64;
        assert_eq!(sub8 / full, 0.8);
        assert_eq!(sub5 / full, 0.5);
    }

    #[test]
    fn counts_match_built_circuit() {
        for n in 1..6 {
            for l in 1..4 {
                let cfg = QnnConfig::regression(n, l);
                let mut gates = build_feature_map(&vec![0.0; n], n).unwrap();
                gates.extend(build_ansatz(&ParamVector::zeros(&cfg), &cfg).unwrap());
                let r = resource_report(&cfg);
                let cnots = gates.iter().filter(|g| g.kind == GateKind::Cnot).count();
                assert_eq!(r.cnot_gates, cnots);
                assert_eq!(r.rotation_gates, gates.len() - cnots);
                assert_eq!(r.circuit_depth_gates, gates.len());
                assert_eq!(r.trainable_params, 3 * l * n);
            }
        }
    }

    #[test]
    fn reports_sum() {
        let a = resource_report(&QnnConfig::regression(4, 1));
        let total: ResourceReport = [a, a, a].into_iter().sum();
        assert_eq!(total.trainable_params, 36);
        assert_eq!(total.n_qubits, 12);
    }
}
