use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::backend::Backend;
use super::circuit::{ansatz_template, build_ansatz, build_feature_map, ParamVector, QnnConfig};
use crate::error::{Error, Result};
use crate::simcore::{z_from_counts, Fault, Gate, GateKind, ParamSlot, StateVector};

/// A validated QNN configuration with its ansatz layout cached, ready for
/// repeated evaluation.
#[derive(Debug, Clone)]
pub struct Qnn {
    config: QnnConfig,
    template: Vec<Gate>,
    head_masks: Vec<usize>,
}

impl Qnn {
    pub fn new(config: QnnConfig) -> Result<Self> {
        config.validate()?;
        let template = ansatz_template(&config);
        let n = config.n_qubits;
        let head_masks = config.head_qubits.iter().map(|&q| 1 << (n - 1 - q)).collect();
        Ok(Qnn {
            config,
            template,
            head_masks,
        })
    }

    pub fn config(&self) -> &QnnConfig {
        &self.config
    }

    fn check(&self, x: &[f64], params: &[f64]) -> Result<()> {
        if x.len() != self.config.n_qubits {
            return Err(Error::contract(format!(
                "feature vector has {} entries for {} qubits",
                x.len(),
                self.config.n_qubits
            )));
        }
        if params.len() != self.config.n_params() {
            return Err(Error::contract(format!(
                "expected {} parameters, got {}",
                self.config.n_params(),
                params.len()
            )));
        }
        Ok(())
    }

    fn bound(gate: &Gate, params: &[f64]) -> Gate {
        match gate.slot {
            Some(ParamSlot::Trainable(j)) => Gate { angle: params[j], ..*gate },
            _ => *gate,
        }
    }

    /// Final statevector V(x) U(θ) |0…0⟩ without noise.
    pub fn state(&self, x: &[f64], params: &[f64]) -> Result<StateVector> {
        self.check(x, params)?;
        Ok(self.state_unchecked(x, params))
    }

    fn state_unchecked(&self, x: &[f64], params: &[f64]) -> StateVector {
        let mut state = StateVector::ry_product(x).expect("qubit count validated");
        for gate in &self.template {
            state.apply_unchecked(&Self::bound(gate, params));
        }
        state
    }

    fn head_values(&self, state: &StateVector) -> Vec<f64> {
        self.config
            .head_qubits
            .iter()
            .map(|&q| state.expectation_z(q))
            .collect()
    }

    /// Head expectations ⟨σz⟩ on the chosen backend.
    pub fn forward(&self, x: &[f64], params: &[f64], backend: &Backend) -> Result<Vec<f64>> {
        self.check(x, params)?;
        backend.validate()?;
        match backend {
            Backend::Exact => Ok(self.head_values(&self.state_unchecked(x, params))),
            Backend::Shots { shots, seed } => {
                let state = self.state_unchecked(x, params);
                let counts = state.sample_counts(*shots, *seed)?;
                Ok(self
                    .head_masks
                    .iter()
                    .map(|&m| z_from_counts(&counts, m, *shots))
                    .collect())
            }
            Backend::Noisy {
                noise,
                trajectories,
                seed,
            } => {
                if noise.is_noiseless() {
                    return Ok(self.head_values(&self.state_unchecked(x, params)));
                }
                let mut gates = build_feature_map(x, self.config.n_qubits)?;
                gates.extend(self.template.iter().map(|g| Self::bound(g, params)));
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut acc = vec![0.0; self.config.n_outputs()];
                let mut clean = 0u32;
                let mut faults: Vec<(usize, Fault)> = Vec::new();
                for _ in 0..*trajectories {
                    faults.clear();
                    for (i, g) in gates.iter().enumerate() {
                        for f in noise.sample_faults(g, &mut rng).into_iter().flatten() {
                            faults.push((i, f));
                        }
                    }
                    // Fault-free trajectories all equal the ideal state.
                    if faults.is_empty() {
                        clean += 1;
                        continue;
                    }
                    let mut state = StateVector::zero_state(self.config.n_qubits)?;
                    let mut pending = faults.iter().peekable();
                    for (i, g) in gates.iter().enumerate() {
                        state.apply_unchecked(g);
                        while let Some((_, f)) = pending.next_if(|(j, _)| *j == i) {
                            state.apply_pauli(f.qubit, f.pauli)?;
                        }
                    }
                    for (a, v) in acc.iter_mut().zip(self.head_values(&state)) {
                        *a += v;
                    }
                }
                if clean > 0 {
                    let ideal = self.head_values(&self.state_unchecked(x, params));
                    for (a, v) in acc.iter_mut().zip(ideal) {
                        *a += clean as f64 * v;
                    }
                }
                let t = *trajectories as f64;
                Ok(acc.into_iter().map(|a| a / t).collect())
            }
        }
    }

    /// ∂f_h/∂θ_j = [f_h(θ + π/2 e_j) − f_h(θ − π/2 e_j)] / 2, as one row per
    /// head output. Stochastic backends use an independent stream per
    /// shifted evaluation.
    pub fn grad_parameter_shift(
        &self,
        x: &[f64],
        params: &[f64],
        backend: &Backend,
    ) -> Result<Vec<Vec<f64>>> {
        self.check(x, params)?;
        let p = params.len();
        let mut jac = vec![vec![0.0; p]; self.config.n_outputs()];
        let mut shifted = params.to_vec();
        for j in 0..p {
            shifted[j] = params[j] + FRAC_PI_2;
            let plus = self.forward(x, &shifted, &backend.derive(2 * j as u64))?;
            shifted[j] = params[j] - FRAC_PI_2;
            let minus = self.forward(x, &shifted, &backend.derive(2 * j as u64 + 1))?;
            shifted[j] = params[j];
            for (h, row) in jac.iter_mut().enumerate() {
                row[j] = (plus[h] - minus[h]) / 2.0;
            }
        }
        Ok(jac)
    }

    /// Jacobian by adjoint differentiation; exact backend only.
    pub fn grad_adjoint(
        &self,
        x: &[f64],
        params: &[f64],
        backend: &Backend,
    ) -> Result<Vec<Vec<f64>>> {
        if !backend.is_exact() {
            return Err(Error::UnsupportedBackend {
                op: "adjoint differentiation",
                backend: backend.name(),
            });
        }
        self.check(x, params)?;
        let k = self.config.n_outputs();
        let mut jac = Vec::with_capacity(k);
        for h in 0..k {
            let mut row = vec![0.0; params.len()];
            self.vjp_unchecked(x, params, |_| one_hot(k, h), &mut row);
            jac.push(row);
        }
        Ok(jac)
    }

    /// Vector–Jacobian product in a single adjoint sweep.
    ///
    /// `weights` maps the head outputs to cotangents `w_h`; the return value
    /// is the head outputs and `grad` receives Σ_h w_h ∂f_h/∂θ (overwritten).
    pub fn vjp<W>(&self, x: &[f64], params: &[f64], weights: W, grad: &mut [f64]) -> Result<Vec<f64>>
    where
        W: FnOnce(&[f64]) -> Vec<f64>,
    {
        self.check(x, params)?;
        if grad.len() != params.len() {
            return Err(Error::contract("gradient buffer length differs from parameter count"));
        }
        Ok(self.vjp_unchecked(x, params, weights, grad))
    }

    fn vjp_unchecked<W>(&self, x: &[f64], params: &[f64], weights: W, grad: &mut [f64]) -> Vec<f64>
    where
        W: FnOnce(&[f64]) -> Vec<f64>,
    {
        let mut psi = self.state_unchecked(x, params);
        let outputs = self.head_values(&psi);
        let w = weights(&outputs);
        debug_assert_eq!(w.len(), outputs.len());

        // λ = O ψ with O = Σ_h w_h σz^(h), diagonal in the computational basis.
        let mut lam = psi.clone();
        for (b, l) in lam.amplitudes_mut().iter_mut().enumerate() {
            let d: f64 = self
                .head_masks
                .iter()
                .zip(&w)
                .map(|(&m, &wh)| if b & m == 0 { wh } else { -wh })
                .sum();
            *l *= d;
        }

        grad.iter_mut().for_each(|g| *g = 0.0);
        let n = self.config.n_qubits;
        for gate in self.template.iter().rev() {
            let mask = 1 << (n - 1 - gate.target);
            match (gate.kind, gate.slot) {
                (GateKind::Cnot, _) => {
                    psi.apply_unchecked(gate);
                    lam.apply_unchecked(gate);
                }
                (kind, Some(ParamSlot::Trainable(j))) => {
                    grad[j] = adjoint_rotation(
                        psi.amplitudes_mut(),
                        lam.amplitudes_mut(),
                        mask,
                        kind,
                        params[j],
                    );
                }
                (_, _) => unreachable!("ansatz rotations always carry a trainable slot"),
            }
        }
        outputs
    }
}

fn one_hot(k: usize, h: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[h] = 1.0;
    v
}

#[inline(always)]
fn for_each_pair2<F>(psi: &mut [Complex64], lam: &mut [Complex64], mask: usize, mut f: F)
where
    F: FnMut(&mut Complex64, &mut Complex64, &mut Complex64, &mut Complex64),
{
    for (pc, lc) in psi.chunks_exact_mut(2 * mask).zip(lam.chunks_exact_mut(2 * mask)) {
        let (p0, p1) = pc.split_at_mut(mask);
        let (l0, l1) = lc.split_at_mut(mask);
        for (((a, b), c), d) in p0.iter_mut().zip(p1).zip(l0).zip(l1) {
            f(a, b, c, d);
        }
    }
}

/// Returns Im⟨λ|P|ψ⟩ = ∂f/∂θ for the rotation exp(−iθP/2) that produced
/// ψ, then rewinds the rotation on both ψ and λ.
fn adjoint_rotation(
    psi: &mut [Complex64],
    lam: &mut [Complex64],
    mask: usize,
    kind: GateKind,
    angle: f64,
) -> f64 {
    // Inverse rotation: angle → −angle.
    let (s, c) = (-angle / 2.0).sin_cos();
    let mut acc = 0.0;
    match kind {
        GateKind::Rx => for_each_pair2(psi, lam, mask, |p0, p1, l0, l1| {
            acc += (l0.conj() * *p1 + l1.conj() * *p0).im;
            rx_pair(p0, p1, c, s);
            rx_pair(l0, l1, c, s);
        }),
        GateKind::Ry => for_each_pair2(psi, lam, mask, |p0, p1, l0, l1| {
            acc += (l1.conj() * *p0).re - (l0.conj() * *p1).re;
            ry_pair(p0, p1, c, s);
            ry_pair(l0, l1, c, s);
        }),
        GateKind::Rz => {
            let ph0 = Complex64::new(c, -s);
            let ph1 = Complex64::new(c, s);
            for_each_pair2(psi, lam, mask, |p0, p1, l0, l1| {
                acc += (l0.conj() * *p0 - l1.conj() * *p1).im;
                *p0 *= ph0;
                *p1 *= ph1;
                *l0 *= ph0;
                *l1 *= ph1;
            })
        }
        GateKind::Cnot => unreachable!(),
    }
    acc
}

#[inline(always)]
fn rx_pair(a0: &mut Complex64, a1: &mut Complex64, c: f64, s: f64) {
    let (x, y) = (*a0, *a1);
    *a0 = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
    *a1 = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
}

#[inline(always)]
fn ry_pair(a0: &mut Complex64, a1: &mut Complex64, c: f64, s: f64) {
    let (x, y) = (*a0, *a1);
    *a0 = x * c - y * s;
    *a1 = x * s + y * c;
}

/// Head expectations of the QNN f(x; θ) on `backend`.
pub fn forward(x: &[f64], params: &ParamVector, config: &QnnConfig, backend: &Backend) -> Result<Vec<f64>> {
    Qnn::new(config.clone())?.forward(x, params.as_slice(), backend)
}

/// Parameter-shift Jacobian, one row per head output.
pub fn grad_parameter_shift(
    x: &[f64],
    params: &ParamVector,
    config: &QnnConfig,
    backend: &Backend,
) -> Result<Vec<Vec<f64>>> {
    Qnn::new(config.clone())?.grad_parameter_shift(x, params.as_slice(), backend)
}

/// Adjoint-method Jacobian, one row per head output. Exact backend only.
pub fn grad_adjoint(
    x: &[f64],
    params: &ParamVector,
    config: &QnnConfig,
    backend: &Backend,
) -> Result<Vec<Vec<f64>>> {
    Qnn::new(config.clone())?.grad_adjoint(x, params.as_slice(), backend)
}

/// Gate list V(x) followed by U(θ).
pub fn build_circuit(x: &[f64], params: &ParamVector, config: &QnnConfig) -> Result<Vec<Gate>> {
    let mut gates = build_feature_map(x, config.n_qubits)?;
    gates.extend(build_ansatz(params, config)?);
    Ok(gates)
}
