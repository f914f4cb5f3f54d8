//! Dense statevector simulation.
//!
//! Amplitude index `i` encodes qubit `q` as bit `q` of `i` (qubit 0 is the
//! least significant bit). Controlled and multiplexed gates are applied by
//! branching on control bits; no full-register matrix is ever formed.

use num_complex::Complex64;

use crate::circuit::{pauli_x, phase_matrix, Axis, Circuit, Gate, Mat2};
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

/// `|0…0⟩` on `num_qubits` qubits.
pub fn init_zero_state(num_qubits: usize) -> Result<StateVector> {
    StateVector::zero(num_qubits)
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&num_qubits) {
            return Err(Error::config(format!("number of qubits must be in 1..={MAX_QUBITS}, got {num_qubits}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Wraps explicit amplitudes; the length must be a power of two and the
    /// vector must be normalized within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::structural(format!("amplitude count {n} is not a power of two ≥ 2")));
        }
        let state = StateVector { num_qubits: n.trailing_zeros() as usize, amps };
        if (state.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(Error::domain("amplitudes are not normalized"));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn amplitude_of_zero(&self) -> Complex64 {
        self.amps[0]
    }

    /// `⟨ψ|O|ψ⟩` for `O = |0…0⟩⟨0…0|`.
    pub fn expectation_zero_projector(&self) -> f64 {
        self.amps[0].norm_sqr()
    }

    /// Applies `u` to `target` on every branch where `select` returns it.
    /// `select` sees the index with the target bit cleared.
    fn apply_branched<F>(&mut self, target: usize, select: F)
    where
        F: Fn(usize) -> Option<Mat2>,
    {
        let stride = 1usize << target;
        for i0 in (0..self.amps.len()).filter(|i| i & stride == 0) {
            if let Some(u) = select(i0) {
                let i1 = i0 | stride;
                let (a0, a1) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i1] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let hits = |controls: &[usize], pattern: &[bool], i: usize| {
            controls.iter().zip(pattern).all(|(&q, &p)| ((i >> q) & 1 == 1) == p)
        };
        match gate {
            Gate::Ry { target, angle } => {
                let u = Axis::Y.rotation(*angle);
                self.apply_branched(*target, |_| Some(u));
            }
            Gate::Rz { target, angle } => {
                let u = Axis::Z.rotation(*angle);
                self.apply_branched(*target, |_| Some(u));
            }
            Gate::Phase { target, angle } => {
                let u = phase_matrix(*angle);
                self.apply_branched(*target, |_| Some(u));
            }
            Gate::X { target } => self.apply_branched(*target, |_| Some(pauli_x())),
            Gate::Cnot { control, target } => {
                let c = *control;
                self.apply_branched(*target, |i| ((i >> c) & 1 == 1).then(pauli_x));
            }
            Gate::Mcx { controls, pattern, target } => {
                self.apply_branched(*target, |i| hits(controls, pattern, i).then(pauli_x));
            }
            Gate::ControlledRotation { axis, controls, pattern, target, angle } => {
                let u = axis.rotation(*angle);
                self.apply_branched(*target, |i| hits(controls, pattern, i).then_some(u));
            }
            Gate::Multiplexor { axis, controls, target, angles, .. } => {
                let blocks: Vec<Mat2> = angles.iter().map(|&a| axis.rotation(a)).collect();
                self.apply_branched(*target, |i| {
                    let r = controls.iter().enumerate().fold(0, |acc, (k, &q)| acc | (((i >> q) & 1) << k));
                    Some(blocks[r])
                });
            }
            Gate::ControlledPhase { controls, pattern, angle, .. } => {
                let phase = Complex64::from_polar(1.0, *angle);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if hits(controls, pattern, i) {
                        *amp *= phase;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() > self.num_qubits {
            return Err(Error::structural(format!(
                "circuit needs {} qubits, state has {}",
                circuit.num_qubits(),
                self.num_qubits
            )));
        }
        circuit.gates().iter().try_for_each(|g| self.apply_gate(g))
    }
}

/// Runs `circuit` from `|0…0⟩`.
pub fn simulate(circuit: &Circuit) -> Result<StateVector> {
    let mut state = StateVector::zero(circuit.num_qubits())?;
    state.apply_circuit(circuit)?;
    Ok(state)
}
