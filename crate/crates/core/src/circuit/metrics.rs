use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::decompose::decompose_multiplexor;
use super::gate::Gate;
use super::Circuit;

/// Width, depth, CNOT count and trainable-parameter count of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceProfile {
    pub width: usize,
    pub depth: usize,
    pub cnot_count: usize,
    pub param_count: usize,
}

/// A scheduling unit: the qubits it occupies, how many layers it lasts and
/// how many CNOTs it stands for.
struct Op {
    qubits: Vec<usize>,
    layers: usize,
    cnots: usize,
}

impl Op {
    fn unit(gate: &Gate) -> Op {
        Op { qubits: gate.qubits(), layers: 1, cnots: usize::from(matches!(gate, Gate::Cnot { .. })) }
    }

    /// Linear-cost multi-controlled X: one layer (and one CNOT) per control.
    fn mcx(controls: &[usize], target: usize) -> Op {
        let mut qubits = controls.to_vec();
        qubits.push(target);
        let k = controls.len().max(1);
        Op { qubits, layers: k, cnots: if controls.is_empty() { 0 } else { k } }
    }

    /// `1q · MCX · 1q · MCX` sandwich for a pattern-controlled 1-qubit gate.
    fn controlled_single(controls: &[usize], target: usize) -> Vec<Op> {
        let one = || Op { qubits: vec![target], layers: 1, cnots: 0 };
        if controls.is_empty() {
            return vec![one()];
        }
        vec![one(), Op::mcx(controls, target), one(), Op::mcx(controls, target)]
    }
}

fn cost_ops(gate: &Gate) -> Vec<Op> {
    match gate {
        Gate::Multiplexor { .. } => decompose_multiplexor(gate).expect("multiplexor").iter().map(Op::unit).collect(),
        Gate::Mcx { controls, target, .. } => vec![Op::mcx(controls, *target)],
        Gate::ControlledRotation { controls, target, .. } => Op::controlled_single(controls, *target),
        // Treated as a pattern-controlled u1 on the last control qubit.
        Gate::ControlledPhase { controls, .. } => {
            let (target, rest) = controls.split_last().expect("controlled phase has controls");
            Op::controlled_single(rest, *target)
        }
        other => vec![Op::unit(other)],
    }
}

fn schedule(num_qubits: usize, ops: impl IntoIterator<Item = Op>) -> (usize, usize) {
    let mut free = vec![0usize; num_qubits];
    let mut cnots = 0;
    for op in ops {
        let start = op.qubits.iter().map(|&q| free[q]).max().unwrap_or(0);
        for &q in &op.qubits {
            free[q] = start + op.layers;
        }
        cnots += op.cnots;
    }
    (free.into_iter().max().unwrap_or(0), cnots)
}

/// Distinct trainable angles: labelled multiplexor angles (θ) and labelled
/// controlled phases (φ). Input-encoding angles are not counted.
fn trainable_params(circuit: &Circuit) -> usize {
    let mut seen = BTreeSet::new();
    for g in circuit.gates() {
        match g {
            Gate::Multiplexor { angles, theta_offset: Some(off), .. } => {
                seen.extend((*off..off + angles.len()).map(|i| (0u8, i)));
            }
            Gate::ControlledPhase { phi_index: Some(i), .. } => {
                seen.insert((1u8, *i));
            }
            _ => {}
        }
    }
    seen.len()
}

/// Resource profile under as-soon-as-possible layering.
///
/// With `decompose`, multiplexors are expanded into rotations and CNOTs and
/// every pattern-controlled gate is costed with the linear model: an MCX with
/// `k` controls occupies all its qubits for `k` layers and counts as `k`
/// CNOTs; a pattern-controlled single-qubit gate is `1q · MCX · 1q · MCX`.
pub fn circuit_metrics(circuit: &Circuit, decompose: bool) -> ResourceProfile {
    let (depth, cnot_count) = if decompose {
        schedule(circuit.num_qubits(), circuit.gates().iter().flat_map(cost_ops))
    } else {
        schedule(circuit.num_qubits(), circuit.gates().iter().map(Op::unit))
    };
    ResourceProfile { width: circuit.num_qubits(), depth, cnot_count, param_count: trainable_params(circuit) }
}

/// Unit-duration ASAP layering: gate indices grouped by layer.
pub fn asap_layers(circuit: &Circuit) -> Vec<Vec<usize>> {
    let mut free = vec![0usize; circuit.num_qubits()];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (i, g) in circuit.gates().iter().enumerate() {
        let qubits = g.qubits();
        let layer = qubits.iter().map(|&q| free[q]).max().unwrap_or(0);
        for &q in &qubits {
            free[q] = layer + 1;
        }
        if layers.len() <= layer {
            layers.resize_with(layer + 1, Vec::new);
        }
        layers[layer].push(i);
    }
    layers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::make_multiplexor_ry;

    #[test]
    fn empty_circuit() {
        let p = circuit_metrics(&Circuit::new(3), true);
        assert_eq!(p, ResourceProfile { width: 3, depth: 0, cnot_count: 0, param_count: 0 });
    }

    #[test]
    fn layering_packs_disjoint_gates() {
        let c = Circuit::with_gates(
            3,
            vec![
                Gate::Ry { target: 0, angle: 0.1 },
                Gate::Ry { target: 1, angle: 0.1 },
                Gate::Cnot { control: 0, target: 1 },
                Gate::X { target: 2 },
            ],
        )
        .unwrap();
        let layers = asap_layers(&c);
        assert_eq!(layers, vec![vec![0, 1, 3], vec![2]]);
        assert_eq!(circuit_metrics(&c, false).depth, 2);
        assert_eq!(circuit_metrics(&c, false).cnot_count, 1);
    }

    #[test]
    fn mcx_costs_one_layer_per_control() {
        let c = Circuit::with_gates(4, vec![Gate::Mcx { controls: vec![0, 1, 2], pattern: vec![false; 3], target: 3 }])
            .unwrap();
        let p = circuit_metrics(&c, true);
        assert_eq!((p.depth, p.cnot_count), (3, 3));
    }

    #[test]
    fn multiplexor_cnots_after_expansion() {
        let g = make_multiplexor_ry(&[0, 1], 2, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        let c = Circuit::with_gates(3, vec![g]).unwrap();
        assert_eq!(circuit_metrics(&c, true).cnot_count, 4);
        assert_eq!(circuit_metrics(&c, true).depth, 8);
        assert_eq!(circuit_metrics(&c, false).cnot_count, 0);
    }
}
