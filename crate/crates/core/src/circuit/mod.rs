//! Gate IR, exact decompositions, resource metrics and OpenQASM export.

mod decompose;
pub mod dense;
mod gate;
mod metrics;
mod qasm;

pub use decompose::{
    decompose_controlled_rotation, decompose_controlled_rz, decompose_diagonal, decompose_full, decompose_mcx,
    decompose_multiplexor, decompose_multiplexor_ry,
};
pub use gate::{
    make_multiplexor, make_multiplexor_ry, parse_pattern, pattern_of, pattern_string, pauli_x, phase_matrix, Axis,
    Gate, Mat2,
};
pub use metrics::{asap_layers, circuit_metrics, ResourceProfile};
pub use qasm::{export_qasm, parse_qasm};

use crate::error::Result;

/// A labelled contiguous run of gates, e.g. the state-preparation block.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub label: String,
    pub start: usize,
    pub end: usize,
}

/// Ordered gate list over `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    sections: Vec<Section>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new(), sections: Vec::new() }
    }

    /// Builds a circuit just wide enough for `gates`.
    pub fn from_gates(gates: Vec<Gate>) -> Result<Self> {
        let width = gates.iter().flat_map(|g| g.qubits()).max().map_or(1, |q| q + 1);
        Self::with_gates(width, gates)
    }

    pub fn with_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Appends `gates` and records them as one labelled section.
    pub fn push_section(&mut self, label: impl Into<String>, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        let start = self.gates.len();
        self.extend(gates)?;
        self.sections.push(Section { label: label.into(), start, end: self.gates.len() });
        Ok(())
    }

    /// Inverse circuit: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            sections: Vec::new(),
        }
    }

    /// Human-readable listing, one gate per line, with section headers.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        let mut sections = self.sections.iter().peekable();
        for (i, g) in self.gates.iter().enumerate() {
            while let Some(s) = sections.peek() {
                if s.start == i {
                    out.push_str(&format!("# {}\n", s.label));
                    sections.next();
                } else {
                    break;
                }
            }
            out.push_str(&format!("  {g}\n"));
        }
        out
    }
}
