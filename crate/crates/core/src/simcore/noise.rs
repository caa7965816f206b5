//! Stochastic Pauli trajectories for a per-gate depolarizing channel.
//!
//! After every gate, each touched qubit independently suffers an error with
//! the gate's error probability; the error is X, Y or Z with equal odds.
//! Averaging observables over many trajectories reproduces the depolarizing
//! channel without a density matrix.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gate::{Gate, Pauli};
use super::state::StateVector;
use crate::error::{Error, Result};

/// Per-gate error rates plus the device coupling map (metadata only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub single_qubit_error: f64,
    pub two_qubit_error: f64,
    #[serde(default)]
    pub topology: Vec<(usize, usize)>,
}

/// Worst-case single-qubit gate error on ibm_lagos.
pub const LAGOS_SINGLE_QUBIT_ERROR: f64 = 2.89e-4;
/// Worst-case CNOT error on ibm_lagos.
pub const LAGOS_TWO_QUBIT_ERROR: f64 = 8.63e-3;
pub const LAGOS_TOPOLOGY: [(usize, usize); 6] = [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5), (4, 6)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub qubit: usize,
    pub pauli: Pauli,
}

impl NoiseModel {
    pub fn new(single_qubit_error: f64, two_qubit_error: f64) -> Result<Self> {
        let model = NoiseModel {
            single_qubit_error,
            two_qubit_error,
            topology: Vec::new(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            single_qubit_error: 0.0,
            two_qubit_error: 0.0,
            topology: Vec::new(),
        }
    }

    /// Calibration magnitudes and coupling map of the 7-qubit ibm_lagos device.
    pub fn lagos() -> Self {
        NoiseModel {
            single_qubit_error: LAGOS_SINGLE_QUBIT_ERROR,
            two_qubit_error: LAGOS_TWO_QUBIT_ERROR,
            topology: LAGOS_TOPOLOGY.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("single_qubit_error", self.single_qubit_error),
            ("two_qubit_error", self.two_qubit_error),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.single_qubit_error == 0.0 && self.two_qubit_error == 0.0
    }

    pub fn error_rate(&self, gate: &Gate) -> f64 {
        if gate.control.is_some() {
            self.two_qubit_error
        } else {
            self.single_qubit_error
        }
    }

    /// Draws the faults following `gate`.
    ///
    /// Consumes one uniform per touched qubit (control first), plus one
    /// Pauli choice per fault. The draws never depend on the state, so a
    /// fault pattern sampled ahead of time matches gate-by-gate application
    /// from the same stream.
    pub fn sample_faults<R: Rng + ?Sized>(&self, gate: &Gate, rng: &mut R) -> [Option<Fault>; 2] {
        let p = self.error_rate(gate);
        let mut out = [None; 2];
        for (slot, qubit) in out.iter_mut().zip(gate.qubits()) {
            let u: f64 = rng.gen();
            if u < p {
                let pauli = Pauli::ALL[rng.gen_range(0..3)];
                *slot = Some(Fault { qubit, pauli });
            }
        }
        out
    }
}

/// Applies `gate` followed by whatever Pauli faults the noise model draws.
pub fn apply_gate_noisy<R: Rng + ?Sized>(
    state: &mut StateVector,
    gate: &Gate,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<()> {
    state.apply_gate(gate)?;
    for fault in noise.sample_faults(gate, rng).into_iter().flatten() {
        state.apply_pauli(fault.qubit, fault.pauli)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_rates_match_ideal() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let gates = [Gate::ry(0, 0.4), Gate::cnot(0, 1), Gate::rx(1, 2.0)];
        let mut noisy = StateVector::zero_state(2).unwrap();
        let mut ideal = noisy.clone();
        for g in &gates {
            apply_gate_noisy(&mut noisy, g, &NoiseModel::noiseless(), &mut rng).unwrap();
            ideal.apply_gate(g).unwrap();
        }
        assert_eq!(noisy, ideal);
    }

    #[test]
    fn certain_error_always_injects() {
        let noise = NoiseModel::new(1.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let faults = noise.sample_faults(&Gate::rx(0, 0.0), &mut rng);
            assert!(faults[0].is_some());
            assert!(faults[1].is_none());
        }
    }

    #[test]
    fn depolarized_expectation() {
        // X or Y flip |0⟩ (prob 2p/3), Z leaves it: ⟨Z⟩ = 1 − 2p·(2/3)
        let p = 0.3;
        let noise = NoiseModel::new(p, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 10_000;
        let mut sum = 0.0;
        for _ in 0..trials {
            let mut s = StateVector::zero_state(1).unwrap();
            apply_gate_noisy(&mut s, &Gate::rx(0, 0.0), &noise, &mut rng).unwrap();
            sum += s.expectation_z(0);
        }
        let mean = sum / trials as f64;
        assert!((mean - (1.0 - 2.0 * p * 2.0 / 3.0)).abs() < 0.02, "{mean}");
    }

    #[test]
    fn invalid_rates_rejected() {
        assert!(NoiseModel::new(-0.1, 0.0).is_err());
        assert!(NoiseModel::new(0.0, 1.5).is_err());
        assert!(NoiseModel::lagos().validate().is_ok());
    }
}
