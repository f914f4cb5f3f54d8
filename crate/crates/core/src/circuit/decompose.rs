use std::f64::consts::PI;

use super::gate::{Axis, Gate};
use super::{Circuit, Section};
use crate::error::{Error, Result};

fn rotation(axis: Axis, target: usize, angle: f64) -> Gate {
    match axis {
        Axis::Y => Gate::Ry { target, angle },
        Axis::Z => Gate::Rz { target, angle },
    }
}

/// Uniformly controlled rotation as alternating rotations and CNOTs.
///
/// The most significant control is peeled off with
/// `MUX(a) = CNOT·MUX(q)·CNOT·MUX(p)`, `p = (a_r + a_{r+h})/2`,
/// `q = (a_r - a_{r+h})/2`. The second half is emitted in reverse order,
/// which leaves each block unitary unchanged (every control fires an even
/// number of CNOTs and `X R(α) X = R(-α)` for both axes), so the two inner
/// CNOTs meeting at the seam cancel. The result has exactly `2^k` rotations
/// and `2^k` CNOTs for `k ≥ 1` controls and always ends with a CNOT from the
/// top control.
fn mux_sequence(axis: Axis, controls: &[usize], target: usize, angles: &[f64]) -> Vec<Gate> {
    let k = controls.len();
    if k == 0 {
        return vec![rotation(axis, target, angles[0])];
    }
    let half = angles.len() / 2;
    let top = controls[k - 1];
    let sum: Vec<f64> = (0..half).map(|r| (angles[r] + angles[r + half]) / 2.0).collect();
    let diff: Vec<f64> = (0..half).map(|r| (angles[r] - angles[r + half]) / 2.0).collect();

    let mut out = mux_sequence(axis, &controls[..k - 1], target, &sum);
    let mut tail = mux_sequence(axis, &controls[..k - 1], target, &diff);
    tail.reverse();
    if k > 1 {
        // CNOT(c) CNOT(top) CNOT(c) = CNOT(top): all share the target.
        out.pop();
        tail.remove(0);
    }
    out.push(Gate::Cnot { control: top, target });
    out.extend(tail);
    out.push(Gate::Cnot { control: top, target });
    out
}

/// Expands any multiplexor gate (either axis) into rotations and CNOTs.
pub fn decompose_multiplexor(gate: &Gate) -> Result<Vec<Gate>> {
    match gate {
        Gate::Multiplexor { axis, controls, target, angles, .. } => Ok(mux_sequence(*axis, controls, *target, angles)),
        other => Err(Error::structural(format!("expected a multiplexor, got {}", other.name()))),
    }
}

/// Recursive synthesis of a multiplexor-`R_y` into `R_y` and CNOT gates (`2^k` CNOTs for `k` controls).
pub fn decompose_multiplexor_ry(gate: &Gate) -> Result<Circuit> {
    match gate {
        Gate::Multiplexor { axis: Axis::Y, .. } => Circuit::from_gates(decompose_multiplexor(gate)?),
        other => Err(Error::structural(format!("expected a multiplexor-ry, got {}", other.name()))),
    }
}

/// `R(α/2) · MCX · R(-α/2) · MCX` on the target (time order). When the
/// controls match, `X R(-α/2) X R(α/2) = R(α)`; otherwise the rotations
/// cancel.
pub fn decompose_controlled_rotation(
    axis: Axis,
    controls: &[usize],
    pattern: &[bool],
    target: usize,
    angle: f64,
) -> Vec<Gate> {
    let mcx = Gate::Mcx { controls: controls.to_vec(), pattern: pattern.to_vec(), target };
    vec![rotation(axis, target, angle / 2.0), mcx.clone(), rotation(axis, target, -angle / 2.0), mcx]
}

pub fn decompose_controlled_rz(controls: &[usize], pattern: &[bool], target: usize, angle: f64) -> Result<Circuit> {
    let gates = decompose_controlled_rotation(Axis::Z, controls, pattern, target, angle);
    Circuit::from_gates(gates)
}

/// Diagonal unitary `diag(e^{iδ_s})` over `qubits` (`s` indexes `qubits[k]`
/// as bit `k`), synthesized exactly, global phase included, from `R_z`,
/// `u1` and CNOT gates. Rotations with zero angle are omitted.
pub fn decompose_diagonal(qubits: &[usize], phases: &[f64]) -> Result<Vec<Gate>> {
    if qubits.is_empty() || phases.len() != 1usize << qubits.len() {
        return Err(Error::structural(format!(
            "diagonal over {} qubits needs {} phases, got {}",
            qubits.len(),
            1usize << qubits.len().min(63),
            phases.len()
        )));
    }
    Ok(diagonal_sequence(qubits, phases))
}

fn diagonal_sequence(qubits: &[usize], phases: &[f64]) -> Vec<Gate> {
    let k = qubits.len();
    if k == 1 {
        // diag(e^{iα}, e^{iβ}) = u1(α+β) · Rz(-2α)
        let (alpha, beta) = (phases[0], phases[1]);
        let mut out = Vec::new();
        if alpha != 0.0 {
            out.push(Gate::Rz { target: qubits[0], angle: -2.0 * alpha });
        }
        if alpha + beta != 0.0 {
            out.push(Gate::Phase { target: qubits[0], angle: alpha + beta });
        }
        return out;
    }
    // Per lower assignment s: diag(e^{iδa}, e^{iδb}) = e^{i(δa+δb)/2} Rz(δb-δa).
    let half = phases.len() / 2;
    let mean: Vec<f64> = (0..half).map(|s| (phases[s] + phases[s + half]) / 2.0).collect();
    let spread: Vec<f64> = (0..half).map(|s| phases[s + half] - phases[s]).collect();
    let mut out = diagonal_sequence(&qubits[..k - 1], &mean);
    if spread.iter().any(|&l| l != 0.0) {
        out.extend(mux_sequence(Axis::Z, &qubits[..k - 1], qubits[k - 1], &spread));
    }
    out
}

/// Pattern-controlled X in elementary gates (exact, no ancillas).
///
/// Zero-pattern controls are conjugated by X; the all-ones `C^k X` is
/// `C^k R_y(π) · C^k Z` since `X = R_y(π) Z`.
pub fn decompose_mcx(controls: &[usize], pattern: &[bool], target: usize) -> Vec<Gate> {
    let k = controls.len();
    if k == 0 {
        return vec![Gate::X { target }];
    }
    let flips: Vec<Gate> =
        controls.iter().zip(pattern).filter(|(_, &bit)| !bit).map(|(&q, _)| Gate::X { target: q }).collect();
    let mut out = flips.clone();
    if k == 1 {
        out.push(Gate::Cnot { control: controls[0], target });
    } else {
        let mut qubits = controls.to_vec();
        qubits.push(target);
        let mut phases = vec![0.0; 1 << (k + 1)];
        *phases.last_mut().unwrap() = PI;
        out.extend(diagonal_sequence(&qubits, &phases));
        let mut angles = vec![0.0; 1 << k];
        *angles.last_mut().unwrap() = PI;
        out.extend(mux_sequence(Axis::Y, controls, target, &angles));
    }
    out.extend(flips);
    out
}

fn expand_elementary(gate: &Gate) -> Vec<Gate> {
    match gate {
        g if g.is_elementary() => vec![g.clone()],
        Gate::Mcx { controls, pattern, target } => decompose_mcx(controls, pattern, *target),
        Gate::ControlledRotation { axis, controls, pattern, target, angle } => {
            decompose_controlled_rotation(*axis, controls, pattern, *target, *angle)
                .iter()
                .flat_map(expand_elementary)
                .collect()
        }
        Gate::Multiplexor { axis, controls, target, angles, .. } => mux_sequence(*axis, controls, *target, angles),
        Gate::ControlledPhase { controls, pattern, angle, .. } => {
            let index = pattern.iter().enumerate().fold(0usize, |acc, (k, &b)| acc | (usize::from(b) << k));
            let mut phases = vec![0.0; 1 << controls.len()];
            phases[index] = *angle;
            diagonal_sequence(controls, &phases)
        }
        _ => unreachable!("elementary gates handled above"),
    }
}

/// Rewrites every gate into `{ry, rz, u1, x, cx}`, preserving the unitary
/// exactly (including global phase) and remapping section boundaries.
pub fn decompose_full(circuit: &Circuit) -> Circuit {
    let mut gates = Vec::new();
    let mut starts = Vec::with_capacity(circuit.len() + 1);
    for g in circuit.gates() {
        starts.push(gates.len());
        gates.extend(expand_elementary(g));
    }
    starts.push(gates.len());
    let sections = circuit
        .sections()
        .iter()
        .map(|s| Section { label: s.label.clone(), start: starts[s.start], end: starts[s.end] })
        .collect();
    Circuit { num_qubits: circuit.num_qubits(), gates, sections }
}
