//! Dense statevector simulator for the {RX, RY, RZ, CNOT} gate set.
//!
//! Qubit 0 is the most significant bit of a basis index everywhere in this
//! crate.

mod gate;
mod noise;
mod state;

pub use gate::{gate_matrix, Gate, GateKind, GateMatrix, Matrix2, Matrix4, ParamSlot, Pauli};
pub use noise::{
    apply_gate_noisy, Fault, NoiseModel, LAGOS_SINGLE_QUBIT_ERROR, LAGOS_TOPOLOGY,
    LAGOS_TWO_QUBIT_ERROR,
};
pub use state::{StateVector, MAX_QUBITS};

pub(crate) use state::z_from_counts;
