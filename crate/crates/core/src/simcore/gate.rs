use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    Cnot,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        !matches!(self, GateKind::Cnot)
    }

    /// Pauli generator `P` of a rotation `exp(-i θ P / 2)`.
    pub fn generator(self) -> Option<Pauli> {
        match self {
            GateKind::Rx => Some(Pauli::X),
            GateKind::Ry => Some(Pauli::Y),
            GateKind::Rz => Some(Pauli::Z),
            GateKind::Cnot => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Matrix2 {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }
}

/// Where a rotation angle comes from when a circuit is built from data and
/// trainable weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamSlot {
    Feature(usize),
    Trainable(usize),
}

/// One gate of the universal set {RX, RY, RZ, CNOT}.
///
/// `angle` is ignored for CNOT. `control` is set only for CNOT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub control: Option<usize>,
    pub angle: f64,
    pub slot: Option<ParamSlot>,
}

impl Gate {
    pub fn rx(target: usize, angle: f64) -> Self {
        Self::rotation(GateKind::Rx, target, angle)
    }

    pub fn ry(target: usize, angle: f64) -> Self {
        Self::rotation(GateKind::Ry, target, angle)
    }

    pub fn rz(target: usize, angle: f64) -> Self {
        Self::rotation(GateKind::Rz, target, angle)
    }

    pub fn rotation(kind: GateKind, target: usize, angle: f64) -> Self {
        debug_assert!(kind.is_rotation());
        Gate {
            kind,
            target,
            control: None,
            angle,
            slot: None,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate {
            kind: GateKind::Cnot,
            target,
            control: Some(control),
            angle: 0.0,
            slot: None,
        }
    }

    pub fn with_slot(mut self, slot: ParamSlot) -> Self {
        self.slot = Some(slot);
        self
    }

    /// Qubits the gate acts on, control first.
    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        self.control.into_iter().chain(std::iter::once(self.target))
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.target >= n_qubits {
            return Err(Error::contract(format!(
                "target qubit {} out of range for {n_qubits} qubits",
                self.target
            )));
        }
        match (self.kind, self.control) {
            (GateKind::Cnot, Some(c)) if c >= n_qubits => Err(Error::contract(format!(
                "control qubit {c} out of range for {n_qubits} qubits"
            ))),
            (GateKind::Cnot, Some(c)) if c == self.target => {
                Err(Error::contract("CNOT control equals target"))
            }
            (GateKind::Cnot, None) => Err(Error::contract("CNOT without control qubit")),
            (kind, Some(_)) if kind.is_rotation() => {
                Err(Error::contract("rotation gates take no control qubit"))
            }
            _ => Ok(()),
        }
    }
}

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix {
    /// Acts on the target qubit.
    Single(Matrix2),
    /// Basis order |control, target⟩ with the control as the high bit.
    Two(Matrix4),
}

/// Dense unitary of a gate. RX(θ) = exp(-iθσx/2) and likewise for RY, RZ.
pub fn gate_matrix(gate: &Gate) -> GateMatrix {
    let (s, c) = (gate.angle / 2.0).sin_cos();
    let re = |v: f64| Complex64::new(v, 0.0);
    let im = |v: f64| Complex64::new(0.0, v);
    match gate.kind {
        GateKind::Rx => GateMatrix::Single([[re(c), im(-s)], [im(-s), re(c)]]),
        GateKind::Ry => GateMatrix::Single([[re(c), re(-s)], [re(s), re(c)]]),
        GateKind::Rz => GateMatrix::Single([
            [Complex64::new(c, -s), re(0.0)],
            [re(0.0), Complex64::new(c, s)],
        ]),
        GateKind::Cnot => {
            let mut m = [[re(0.0); 4]; 4];
            m[0][0] = re(1.0);
            m[1][1] = re(1.0);
            m[2][3] = re(1.0);
            m[3][2] = re(1.0);
            GateMatrix::Two(m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn single(g: &Gate) -> Matrix2 {
        match gate_matrix(g) {
            GateMatrix::Single(m) => m,
            GateMatrix::Two(_) => panic!("expected a single-qubit matrix"),
        }
    }

    #[test]
    fn rx_zero_is_identity() {
        let m = single(&Gate::rx(0, 0.0));
        for r in 0..2 {
            for c in 0..2 {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!(close(m[r][c], Complex64::new(want, 0.0), 1e-15));
            }
        }
    }

    #[test]
    fn ry_pi_matrix() {
        let m = single(&Gate::ry(0, PI));
        let want = [[0.0, -1.0], [1.0, 0.0]];
        for r in 0..2 {
            for c in 0..2 {
                assert!(close(m[r][c], Complex64::new(want[r][c], 0.0), 1e-15));
            }
        }
    }

    #[test]
    fn rotations_are_unitary() {
        for kind in [GateKind::Rx, GateKind::Ry, GateKind::Rz] {
            for &theta in &[FRAC_PI_2, 0.3, 4.0, -1.2] {
                let m = single(&Gate::rotation(kind, 0, theta));
                for r in 0..2 {
                    for c in 0..2 {
                        let dot: Complex64 = (0..2).map(|k| m[r][k] * m[c][k].conj()).sum();
                        let want = if r == c { 1.0 } else { 0.0 };
                        assert!(close(dot, Complex64::new(want, 0.0), 1e-12), "{kind:?} {theta}");
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_is_exponential_of_generator() {
        // exp(-iθP/2) = cos(θ/2) I − i sin(θ/2) P
        for kind in [GateKind::Rx, GateKind::Ry, GateKind::Rz] {
            let theta = 0.77;
            let m = single(&Gate::rotation(kind, 0, theta));
            let p = kind.generator().unwrap().matrix();
            let (s, c) = (theta / 2.0).sin_cos();
            for r in 0..2 {
                for col in 0..2 {
                    let id = if r == col { 1.0 } else { 0.0 };
                    let want = Complex64::new(c * id, 0.0) - Complex64::new(0.0, s) * p[r][col];
                    assert!(close(m[r][col], want, 1e-14));
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(Gate::rx(2, 0.1).validate(3).is_ok());
        assert!(Gate::rx(3, 0.1).validate(3).is_err());
        assert!(Gate::cnot(1, 1).validate(3).is_err());
        assert!(Gate::cnot(0, 3).validate(3).is_err());
        assert!(Gate::cnot(3, 0).validate(3).is_err());
        assert!(Gate::cnot(2, 0).validate(3).is_ok());
    }
}
