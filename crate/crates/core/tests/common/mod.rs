//! Independent dense-matrix oracle: every gate is expanded to a full
//! 2^n × 2^n unitary by kron products and multiplied onto |0…0⟩.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use qensemble::simcore::{Gate, GateKind};

pub type Mat = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn identity(dim: usize) -> Mat {
    (0..dim)
        .map(|r| (0..dim).map(|k| if r == k { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Kron of per-qubit 2×2 factors, qubit 0 leftmost (most significant).
fn embed(n: usize, factors: &[(usize, Mat)]) -> Mat {
    let mut out = vec![vec![c(1.0, 0.0)]];
    for q in 0..n {
        let f = factors
            .iter()
            .find(|(fq, _)| *fq == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| identity(2));
        out = kron(&out, &f);
    }
    out
}

fn rotation(kind: GateKind, theta: f64) -> Mat {
    // exp(-iθP/2) = cos(θ/2) I − i sin(θ/2) P
    let (s, co) = (theta / 2.0).sin_cos();
    match kind {
        GateKind::Rx => vec![vec![c(co, 0.0), c(0.0, -s)], vec![c(0.0, -s), c(co, 0.0)]],
        GateKind::Ry => vec![vec![c(co, 0.0), c(-s, 0.0)], vec![c(s, 0.0), c(co, 0.0)]],
        GateKind::Rz => vec![vec![c(co, -s), c(0.0, 0.0)], vec![c(0.0, 0.0), c(co, s)]],
        GateKind::Cnot => unreachable!(),
    }
}

pub fn dense_gate(gate: &Gate, n: usize) -> Mat {
    match gate.kind {
        GateKind::Cnot => {
            let ctl = gate.control.unwrap();
            let p0 = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
            let p1 = vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
            let x = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
            add(
                &embed(n, &[(ctl, p0)]),
                &embed(n, &[(ctl, p1), (gate.target, x)]),
            )
        }
        kind => embed(n, &[(gate.target, rotation(kind, gate.angle))]),
    }
}

/// Full circuit unitary: later gates multiply from the left.
pub fn dense_circuit(gates: &[Gate], n: usize) -> Mat {
    gates
        .iter()
        .fold(identity(1 << n), |acc, g| matmul(&dense_gate(g, n), &acc))
}

/// ⟨0|U† σz^(q) U|0⟩ from the first column of U.
pub fn dense_expectation_z(u: &Mat, n: usize, q: usize) -> f64 {
    let z = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]];
    let zq = embed(n, &[(q, z)]);
    let dim = 1 << n;
    let psi: Vec<C> = (0..dim).map(|r| u[r][0]).collect();
    let mut acc = c(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            acc += psi[i].conj() * zq[i][j] * psi[j];
        }
    }
    acc.re
}
