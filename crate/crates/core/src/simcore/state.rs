use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gate::{Gate, GateKind, Matrix2, Pauli};
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 16;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pure n-qubit state as 2^n complex amplitudes.
///
/// Qubit 0 is the most significant bit of the basis index: in a 3-qubit
/// register, basis index `0b100` is |1⟩ on qubit 0 and |0⟩ on qubits 1 and 2.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubit_count(n_qubits: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n_qubits) {
        Ok(())
    } else {
        Err(Error::config(format!(
            "qubit count {n_qubits} outside supported range 1..={MAX_QUBITS}"
        )))
    }
}

impl StateVector {
    /// |0…0⟩ on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two and the
    /// vector normalized to within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::contract(format!(
                "amplitude count {len} is not 2^n for n >= 1"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubit_count(n_qubits)?;
        let state = StateVector { n_qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::contract(format!("state norm² {norm} is not 1")));
        }
        Ok(state)
    }

    /// ⊗_q RY(angles[q]) |0…0⟩, built directly as a product state.
    pub fn ry_product(angles: &[f64]) -> Result<Self> {
        let n = angles.len();
        check_qubit_count(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        amps.push(Complex64::new(1.0, 0.0));
        // Each pass puts the new qubit on the high bit, so walk backwards to
        // finish with qubit 0 as the most significant bit.
        for &a in angles.iter().rev() {
            let (s, c) = (a / 2.0).sin_cos();
            let len = amps.len();
            amps.extend_from_within(..);
            for v in &mut amps[..len] {
                *v *= c;
            }
            for v in &mut amps[len..] {
                *v *= s;
            }
        }
        Ok(StateVector { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies `gate` in place after validating its qubit indices.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    /// Applies an already validated gate.
    pub(crate) fn apply_unchecked(&mut self, gate: &Gate) {
        let t = self.mask(gate.target);
        match gate.kind {
            GateKind::Rx => rx(&mut self.amps, t, gate.angle),
            GateKind::Ry => ry(&mut self.amps, t, gate.angle),
            GateKind::Rz => rz(&mut self.amps, t, gate.angle),
            GateKind::Cnot => {
                let c = self.mask(gate.control.expect("validated CNOT has a control"));
                cnot(&mut self.amps, c, t);
            }
        }
    }

    #[cfg(test)]
    /// Applies the inverse of an already validated gate.
    pub(crate) fn apply_inverse_unchecked(&mut self, gate: &Gate) {
        if gate.kind.is_rotation() {
            let inv = Gate { angle: -gate.angle, ..*gate };
            self.apply_unchecked(&inv);
        } else {
            self.apply_unchecked(gate);
        }
    }

    pub fn apply_pauli(&mut self, qubit: usize, pauli: Pauli) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::contract(format!("qubit {qubit} out of range")));
        }
        let m = self.mask(qubit);
        apply_pauli(&mut self.amps, m, pauli);
        Ok(())
    }

    /// Applies an arbitrary 2×2 matrix to `qubit`.
    pub fn apply_matrix(&mut self, qubit: usize, m: &Matrix2) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::contract(format!("qubit {qubit} out of range")));
        }
        let mask = self.mask(qubit);
        for_each_pair(&mut self.amps, mask, |a0, a1| {
            let (x, y) = (*a0, *a1);
            *a0 = m[0][0] * x + m[0][1] * y;
            *a1 = m[1][0] * x + m[1][1] * y;
        });
        Ok(())
    }

    /// ⟨ψ|σz^(qubit)|ψ⟩.
    pub fn expectation_z(&self, qubit: usize) -> f64 {
        assert!(qubit < self.n_qubits, "qubit {qubit} out of range");
        let mask = self.mask(qubit);
        let mut acc = 0.0;
        for chunk in self.amps.chunks_exact(2 * mask) {
            let (lo, hi) = chunk.split_at(mask);
            acc += lo.iter().map(|a| a.norm_sqr()).sum::<f64>();
            acc -= hi.iter().map(|a| a.norm_sqr()).sum::<f64>();
        }
        acc.clamp(-1.0, 1.0)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Draws `shots` computational-basis measurements. Only observed
    /// outcomes appear in the histogram.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
        if shots == 0 {
            return Err(Error::config("shot count must be at least 1"));
        }
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut total = 0.0;
        for a in &self.amps {
            total += a.norm_sqr();
            cumulative.push(total);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let uniform = Uniform::new(0.0, total);
        let last = self.amps.len() - 1;
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = uniform.sample(&mut rng);
            let idx = cumulative.partition_point(|&c| c <= u).min(last);
            *counts.entry(idx).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Shot-noise estimate of ⟨σz^(qubit)⟩: (n₊ − n₋) / shots.
    pub fn shot_expectation_z(&self, qubit: usize, shots: u64, seed: u64) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::contract(format!("qubit {qubit} out of range")));
        }
        let counts = self.sample_counts(shots, seed)?;
        Ok(z_from_counts(&counts, self.mask(qubit), shots))
    }
}

pub(crate) fn z_from_counts(counts: &BTreeMap<usize, u64>, mask: usize, shots: u64) -> f64 {
    let minus: u64 = counts
        .iter()
        .filter(|(idx, _)| *idx & mask != 0)
        .map(|(_, n)| n)
        .sum();
    let plus = shots - minus;
    (plus as f64 - minus as f64) / shots as f64
}

/// Visits every amplitude pair (|…0…⟩, |…1…⟩) differing in the bit `mask`.
#[inline(always)]
pub(crate) fn for_each_pair<F>(amps: &mut [Complex64], mask: usize, mut f: F)
where
    F: FnMut(&mut Complex64, &mut Complex64),
{
    for chunk in amps.chunks_exact_mut(2 * mask) {
        let (lo, hi) = chunk.split_at_mut(mask);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            f(a0, a1);
        }
    }
}

pub(crate) fn rx(amps: &mut [Complex64], mask: usize, angle: f64) {
    let (s, c) = (angle / 2.0).sin_cos();
    for_each_pair(amps, mask, |a0, a1| {
        let (x, y) = (*a0, *a1);
        // c·x − i s·y, −i s·x + c·y
        *a0 = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
        *a1 = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
    });
}

pub(crate) fn ry(amps: &mut [Complex64], mask: usize, angle: f64) {
    let (s, c) = (angle / 2.0).sin_cos();
    for_each_pair(amps, mask, |a0, a1| {
        let (x, y) = (*a0, *a1);
        *a0 = x * c - y * s;
        *a1 = x * s + y * c;
    });
}

pub(crate) fn rz(amps: &mut [Complex64], mask: usize, angle: f64) {
    let (s, c) = (angle / 2.0).sin_cos();
    let p0 = Complex64::new(c, -s);
    let p1 = Complex64::new(c, s);
    for_each_pair(amps, mask, |a0, a1| {
        *a0 *= p0;
        *a1 *= p1;
    });
}

pub(crate) fn cnot(amps: &mut [Complex64], control: usize, target: usize) {
    if control > target {
        for chunk in amps.chunks_exact_mut(2 * control) {
            let ones = &mut chunk[control..];
            for sub in ones.chunks_exact_mut(2 * target) {
                let (lo, hi) = sub.split_at_mut(target);
                lo.swap_with_slice(hi);
            }
        }
    } else {
        for chunk in amps.chunks_exact_mut(2 * target) {
            let (lo, hi) = chunk.split_at_mut(target);
            for (l, h) in lo
                .chunks_exact_mut(2 * control)
                .zip(hi.chunks_exact_mut(2 * control))
            {
                l[control..].swap_with_slice(&mut h[control..]);
            }
        }
    }
}

pub(crate) fn apply_pauli(amps: &mut [Complex64], mask: usize, pauli: Pauli) {
    match pauli {
        Pauli::X => for_each_pair(amps, mask, std::mem::swap),
        Pauli::Y => for_each_pair(amps, mask, |a0, a1| {
            let (x, y) = (*a0, *a1);
            *a0 = -I * y;
            *a1 = I * x;
        }),
        Pauli::Z => for_each_pair(amps, mask, |_, a1| *a1 = -*a1),
    }
}
